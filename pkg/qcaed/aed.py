#!/usr/bin/env python
#
# This file is part of qcaed.
#
# qcaed is free software: you can redistribute it and/or modify
# it under the terms of the GNU General Public License as published by
# the Free Software Foundation, either version 3 of the License, or
# (at your option) any later version.
#
# qcaed is distributed in the hope that it will be useful,
# but WITHOUT ANY WARRANTY; without even the implied warranty of
# MERCHANTABILITY or FITNESS FOR A PARTICULAR PURPOSE.  See the
# GNU General Public License for more details.
#
# You should have received a copy of the GNU General Public License
# along with qcaed.  If not, see <http://www.gnu.org/licenses/>.

import numpy as np

import qcaed
import qcaed.gf2 as gf2
from qcaed import autom
from qcaed.bpdec import DecoderConfig, DecodeOutcome, get_decoder
from qcaed.channel import modulate
from qcaed.errors import DimensionError, PermutationError


class EnsembleConfig(object):
    """L permutations sharing one decoding matrix Htilde.

    Candidates are checked against H_orig, so Htilde may be undercomplete.
    """

    def __init__(self, perms, decoder_cfg=None, Htilde=None, H_orig=None, check=True):
        perms = list(perms)
        if not perms:
            raise PermutationError("an ensemble needs at least one permutation")
        if H_orig is None:
            raise DimensionError("original parity-check matrix is required")
        self.Htilde = getattr(Htilde, 'H', Htilde) if Htilde is not None else H_orig
        self.H_orig = H_orig
        self.decoder_cfg = decoder_cfg if decoder_cfg is not None else DecoderConfig()
        if self.Htilde.N != H_orig.N:
            raise DimensionError("decoding matrix has N={}, code has N={}".format(self.Htilde.N, H_orig.N))
        for p in perms:
            if len(p) != H_orig.N:
                raise DimensionError("permutation of size {} for N={}".format(len(p), H_orig.N))
            if check and not p.is_identity() and not autom.is_automorphism(H_orig, p):
                raise PermutationError("{} is not an automorphism of the code".format(p))
        self.perms = perms
        self.inverses = [autom.inverse(p) for p in perms]
        self._fwd = np.array([p.map for p in perms], dtype=np.int64)
        self._inv = np.array([p.map for p in self.inverses], dtype=np.int64)

    @property
    def L(self):
        return len(self.perms)

    @classmethod
    def quasi_cyclic(cls, code, Htilde=None, decoder_cfg=None, L=None):
        """Use the first L shifts of the code's quasi-cyclic group (all Z by default)."""
        L = code.Z if L is None else int(L)
        if not 1 <= L <= code.Z:
            raise PermutationError("ensemble size {} outside [1, Z={}]".format(L, code.Z))
        perms = autom.qc_group(code.Z, code.n)[:L]
        # members of Q_Z are automorphisms of every lifted QC matrix
        return cls(perms, decoder_cfg, Htilde, code.H, check=False)

    def decoder(self):
        return get_decoder(self.Htilde, self.decoder_cfg)

    def __repr__(self):
        return '<EnsembleConfig(L={}, Htilde={}, cfg={})>'.format(self.L, self.Htilde, tuple(self.decoder_cfg))


class EnsembleOutcome(object):
    def __init__(self, selected, candidate_index, per_branch, any_valid, launched=None):
        self.selected = selected
        self.candidate_index = candidate_index
        self.per_branch = per_branch
        self.any_valid = any_valid
        self.launched = len(per_branch) if launched is None else launched
        its = [b.iterations_used for b in per_branch[:self.launched]]
        self.max_iterations = max(its)
        self.sum_iterations = sum(its)
        self.converged_count = sum(1 for b in per_branch if b.converged)

    @property
    def avg_iterations(self):
        return float(self.sum_iterations) / self.launched

    def __repr__(self):
        return '<EnsembleOutcome(winner={}, branches={}, any_valid={}, max_it={})>'.format(
            self.candidate_index, len(self.per_branch), self.any_valid, self.max_iterations)


def select_ml(candidates, y):
    """Index of the candidate closest to y in Euclidean distance.

    All BPSK candidates have equal energy, so this is the largest
    correlation; ties go to the lowest index.
    """
    candidates = np.atleast_2d(np.asarray(candidates))
    if candidates.shape[0] == 0 or candidates.size == 0:
        raise ValueError("no candidates to select from")
    y = np.asarray(y, dtype=np.float64)
    if candidates.shape[1] != y.size:
        raise DimensionError("candidates of length {} for {} observations".format(candidates.shape[1], y.size))
    corr = modulate(candidates) @ y
    return int(np.argmax(corr))


def pick_candidate(outcomes, y, eligible):
    """ML choice among eligible outcomes, or among all if none is eligible."""
    pool = [k for k, ok in enumerate(eligible) if ok]
    any_eligible = bool(pool)
    if not pool:
        pool = list(range(len(outcomes)))
    k = pool[select_ml([outcomes[i].hard_bits for i in pool], y)]
    return k, any_eligible


def aed_decode(cfg, y, lch):
    lch = np.asarray(lch, dtype=np.float64)
    if lch.size != cfg.H_orig.N or np.size(y) != cfg.H_orig.N:
        raise DimensionError("frame of length {} for N={}".format(lch.size, cfg.H_orig.N))
    permuted = np.empty((cfg.L, lch.size))
    permuted[np.arange(cfg.L)[:, None], cfg._fwd] = lch
    raw = cfg.decoder().decode_batch(permuted)

    branches = []
    for j, out in enumerate(raw):
        bits = np.empty_like(out.hard_bits)
        bits[cfg._inv[j]] = out.hard_bits
        total = np.empty_like(out.total_llr)
        total[cfg._inv[j]] = out.total_llr
        valid = not gf2.syndrome(cfg.H_orig, bits).any()
        branches.append(DecodeOutcome(bits, total, out.iterations_used, out.converged, valid))

    k, any_valid = pick_candidate(branches, y, [b.valid for b in branches])
    res = EnsembleOutcome(branches[k], k, branches, any_valid)
    qcaed.log.debug("AED-{}: winner {}, valid {}, iterations max {} sum {}".format(
        cfg.L, k, sum(b.valid for b in branches), res.max_iterations, res.sum_iterations))
    return res
