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
from qcaed.autom import qc_perm
from qcaed.errors import DimensionError, SymmetryBreakError

methods = ('none', 'row-add', 'overcomplete', 'undercomplete')


class BrokenMatrix(object):
    """Decoding matrix derived from H plus a record of how it was made."""

    def __init__(self, H, original, method, params):
        self.H = H
        self.original = original
        self.method = method
        self.params = dict(params)

    @property
    def M(self):
        return self.H.M

    @property
    def N(self):
        return self.H.N

    @property
    def same_code(self):
        # only the undercomplete matrix describes a supercode
        return self.method != 'undercomplete'

    def __repr__(self):
        return '<BrokenMatrix(method={}, params={}, H={})>'.format(self.method, self.params, self.H)


def _matrix(m):
    return getattr(m, 'H', m)


def break_row_add(H, src, dst):
    try:
        Ht = gf2.row_add(H, src, dst)
    except DimensionError as e:
        raise SymmetryBreakError(str(e))
    qcaed.log.debug("Added check {} onto check {}".format(src, dst))
    return BrokenMatrix(Ht, H, 'row-add', {'src': src, 'dst': dst})


def break_overcomplete(H, check_indices):
    checks = [int(c) for c in check_indices]
    if len(checks) < 2:
        raise SymmetryBreakError("an auxiliary check needs at least two checks")
    if len(set(checks)) != len(checks):
        raise SymmetryBreakError("duplicate check in {}".format(checks))
    for c in checks:
        if not 0 <= c < H.M:
            raise SymmetryBreakError("check {} out of range [0, {})".format(c, H.M))
    aux = np.zeros(H.N, dtype=np.uint8)
    for c in checks:
        aux ^= gf2.row_bits(H, c)
    qcaed.log.debug("Auxiliary check from {} has degree {}".format(checks, int(aux.sum())))
    return BrokenMatrix(gf2.append_row(H, aux), H, 'overcomplete', {'checks': sorted(checks)})


def break_undercomplete(H, idx):
    try:
        Ht = gf2.remove_row(H, idx)
    except DimensionError as e:
        raise SymmetryBreakError(str(e))
    return BrokenMatrix(Ht, H, 'undercomplete', {'idx': idx})


def pick_auxiliary_checks(H, count=4, draws=100, seed=0):
    """Random combination of count checks with the lowest resulting degree."""
    if not 2 <= count <= H.M:
        raise SymmetryBreakError("cannot combine {} of {} checks".format(count, H.M))
    rng = np.random.default_rng(seed)
    best, best_deg = None, None
    for _ in range(draws):
        checks = sorted(rng.choice(H.M, size=count, replace=False).tolist())
        support = set()
        for c in checks:
            support.symmetric_difference_update(H.rows[c])
        # dependent checks can cancel to nothing
        if support and (best_deg is None or len(support) < best_deg):
            best, best_deg = checks, len(support)
    if best is None:
        raise SymmetryBreakError("no combination of {} checks gives a nonzero auxiliary check".format(count))
    qcaed.log.debug("Picked auxiliary checks {} (degree {})".format(best, best_deg))
    return best


def make_decoding_matrix(H, method='undercomplete', params=None):
    params = dict(params or {})
    if method == 'none':
        return BrokenMatrix(H, H, 'none', {})
    if method == 'row-add':
        return break_row_add(H, int(params.get('src', 0)), int(params.get('dst', 1)))
    if method == 'overcomplete':
        checks = params.get('checks')
        if checks is None:
            checks = pick_auxiliary_checks(
                H,
                count=int(params.get('count', 4)),
                draws=int(params.get('draws', 100)),
                seed=int(params.get('seed', 0)))
        elif isinstance(checks, int):
            checks = [checks]
        return break_overcomplete(H, checks)
    if method == 'undercomplete':
        return break_undercomplete(H, int(params.get('idx', 0)))
    raise SymmetryBreakError("unknown method '{}', expected one of {}".format(method, methods))


def is_equivariant(Ht, p):
    """True if permuting the columns of Ht only reorders its rows."""
    Ht = _matrix(Ht)
    if len(p) != Ht.N:
        raise DimensionError("permutation of size {} on {} columns".format(len(p), Ht.N))
    return gf2.row_multiset(gf2.permute_columns(Ht, p)) == gf2.row_multiset(Ht)


def equivariant_shifts(Ht, Z):
    Ht = _matrix(Ht)
    n = Ht.N // Z
    return [d for d in range(Z) if is_equivariant(Ht, qc_perm(d, Z, n))]
