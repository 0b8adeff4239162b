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

import qcaed.gf2 as gf2
from qcaed.errors import PermutationError


class Permutation(object):
    """Bijection on {0, ..., N-1}; map[i] is the image of position i.

    apply(p, v) moves v[i] to position p(i).
    """

    __slots__ = ('map', '_hash')

    def __init__(self, mapping):
        mapping = tuple(int(x) for x in mapping)
        n = len(mapping)
        if sorted(mapping) != list(range(n)):
            raise PermutationError("not a bijection on {{0..{}}}".format(n - 1))
        self.map = mapping
        self._hash = None

    def __len__(self):
        return len(self.map)

    def __getitem__(self, i):
        return self.map[i]

    def __iter__(self):
        return iter(self.map)

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.map, dtype=dtype if dtype is not None else np.int64)

    def __eq__(self, other):
        if not isinstance(other, Permutation):
            return NotImplemented
        return self.map == other.map

    def __ne__(self, other):
        res = self.__eq__(other)
        return res if res is NotImplemented else not res

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.map)
        return self._hash

    def is_identity(self):
        return all(i == p for i, p in enumerate(self.map))

    def __repr__(self):
        if len(self.map) <= 12:
            return 'Permutation({})'.format(list(self.map))
        return '<Permutation(N={})>'.format(len(self.map))


def identity(n):
    return Permutation(range(n))


def qc_perm(d, Z, n):
    """Cyclic shift by d inside each of the n blocks of size Z."""
    if not 0 <= d < Z:
        raise PermutationError("shift {} outside [0, {})".format(d, Z))
    i = np.arange(n * Z)
    return Permutation(np.where(i % Z + d >= Z, i + d - Z, i + d))


def qc_group(Z, n):
    return [qc_perm(d, Z, n) for d in range(Z)]


def _check_size(p, n):
    if len(p) != n:
        raise PermutationError("permutation of size {} applied to length {}".format(len(p), n))


def apply(p, v):
    v = np.asarray(v)
    _check_size(p, v.shape[-1])
    out = np.empty_like(v)
    out[..., np.asarray(p)] = v
    return out


def inverse(p):
    inv = np.empty(len(p), dtype=np.int64)
    inv[np.asarray(p)] = np.arange(len(p))
    return Permutation(inv)


def compose(p, q):
    """p after q: apply(compose(p, q), v) == apply(p, apply(q, v))."""
    _check_size(p, len(q))
    return Permutation(np.asarray(p)[np.asarray(q)])


def is_automorphism(H, p):
    _check_size(p, H.N)
    return gf2.rank(gf2.stack(H, gf2.permute_columns(H, p))) == gf2.rank(H)
