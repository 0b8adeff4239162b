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

import math

import numpy as np

import qcaed
from qcaed.aed import EnsembleOutcome, pick_candidate
from qcaed.bpdec import DecoderConfig, get_decoder
from qcaed.errors import DimensionError


def least_reliable(lch, S):
    # stable sort: equal magnitudes keep the lower index first
    return np.argsort(np.abs(lch), kind='stable')[:S]


def saturated_inputs(lch, S, sat):
    """All 2^S sign patterns of +-sat on the S least reliable positions.

    Pattern b puts -sat on the k-th position when bit S-1-k of b is set,
    so branch order is binary counting order.
    """
    positions = least_reliable(lch, S)
    patterns = (np.arange(2 ** S)[:, None] >> np.arange(S - 1, -1, -1)[None, :]) & 1
    inputs = np.tile(lch, (2 ** S, 1))
    inputs[:, positions] = np.where(patterns == 1, -sat, sat)
    return inputs, positions


def sbp_decode(H, lch, S, sat=None, cfg=None, stop_after=3, y=None, sequential=False):
    """Saturated BP ensemble over the S least reliable positions.

    With early stopping the branches count as launched in binary order
    until stop_after of them converged; iteration statistics cover the
    launched branches only. sequential=True also restricts the selection
    to them, otherwise every converged branch competes.

    By default the saturated positions get infinite LLRs, which the
    decoder holds fixed; a finite sat lets check nodes overrule them.
    """
    if cfg is None:
        cfg = DecoderConfig()
    lch = np.asarray(lch, dtype=np.float64)
    if lch.size != H.N:
        raise DimensionError("LLR vector of length {} for N={}".format(lch.size, H.N))
    if not 1 <= S < H.N:
        raise ValueError("S={} outside [1, N)".format(S))
    if sat is None:
        sat = math.inf
    if not sat > 0:
        raise ValueError("saturation magnitude must be positive")

    inputs, positions = saturated_inputs(lch, S, sat)
    branches = get_decoder(H, cfg).decode_batch(inputs)
    for b in branches:
        b.valid = b.converged

    launched = len(branches)
    if cfg.early_stop and stop_after:
        done = 0
        for k, b in enumerate(branches):
            done += b.converged
            if done >= stop_after:
                launched = k + 1
                break

    pool = branches[:launched] if sequential else branches
    k, any_valid = pick_candidate(pool, lch if y is None else y, [b.valid for b in pool])
    res = EnsembleOutcome(branches[k], k, branches, any_valid, launched=launched)
    qcaed.log.debug("SBP-{}: positions {}, converged {}, launched {}, winner {}".format(
        S, positions.tolist(), res.converged_count, launched, k))
    return res
