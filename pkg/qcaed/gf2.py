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

import collections
import io

import numpy as np

import qcaed
from qcaed.errors import AlistError, DimensionError

_WORD = 64


class BinaryMatrix(object):
    """Sparse matrix over GF(2), stored as sorted column lists per row.

    Instances are never modified after construction; every operation in
    this module returns a new matrix.
    """

    __slots__ = ('_n_rows', '_n_cols', '_rows', '_dense', '_hash')

    def __init__(self, n_rows, n_cols, rows):
        n_rows = int(n_rows)
        n_cols = int(n_cols)
        if n_rows < 0 or n_cols < 0:
            raise DimensionError("negative matrix dimension {}x{}".format(n_rows, n_cols))
        rows = list(rows)
        if len(rows) != n_rows:
            raise DimensionError("expected {} rows, got {}".format(n_rows, len(rows)))
        canon = []
        for j, row in enumerate(rows):
            cols = sorted(int(c) for c in row)
            for a, b in zip(cols, cols[1:]):
                if a == b:
                    raise DimensionError("duplicate column {} in row {}".format(a, j))
            if cols and (cols[0] < 0 or cols[-1] >= n_cols):
                raise DimensionError("column index out of range in row {}".format(j))
            canon.append(tuple(cols))
        self._n_rows = n_rows
        self._n_cols = n_cols
        self._rows = tuple(canon)
        self._dense = None
        self._hash = None

    @classmethod
    def from_dense(cls, dense):
        dense = np.asarray(dense)
        if dense.ndim != 2:
            raise DimensionError("dense matrix must be two-dimensional")
        rows = [np.flatnonzero(r & 1).tolist() for r in dense.astype(np.uint8)]
        return cls(dense.shape[0], dense.shape[1], rows)

    @property
    def M(self):
        return self._n_rows

    @property
    def N(self):
        return self._n_cols

    @property
    def shape(self):
        return (self._n_rows, self._n_cols)

    @property
    def rows(self):
        return self._rows

    @property
    def nnz(self):
        return sum(len(r) for r in self._rows)

    def row_degrees(self):
        return [len(r) for r in self._rows]

    def col_degrees(self):
        deg = [0] * self._n_cols
        for row in self._rows:
            for c in row:
                deg[c] += 1
        return deg

    def col_lists(self):
        cols = [[] for _ in range(self._n_cols)]
        for j, row in enumerate(self._rows):
            for c in row:
                cols[c].append(j)
        return cols

    def to_dense(self):
        if self._dense is None:
            dense = np.zeros((self._n_rows, self._n_cols), dtype=np.uint8)
            for j, row in enumerate(self._rows):
                dense[j, list(row)] = 1
            dense.setflags(write=False)
            self._dense = dense
        return self._dense

    def __eq__(self, other):
        if not isinstance(other, BinaryMatrix):
            return NotImplemented
        return self.shape == other.shape and self._rows == other._rows

    def __ne__(self, other):
        res = self.__eq__(other)
        if res is NotImplemented:
            return res
        return not res

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self._n_rows, self._n_cols, self._rows))
        return self._hash

    def __repr__(self):
        return '<BinaryMatrix(M={m}, N={n}, nnz={nnz})>'.format(
            m=self._n_rows, n=self._n_cols, nnz=self.nnz)


def _check_row(m, idx, what='row'):
    if not 0 <= idx < m.M:
        raise DimensionError("{} index {} out of range [0, {})".format(what, idx, m.M))


def _as_bits(v, length):
    bits = np.asarray(v).astype(np.uint8).ravel()
    if bits.size != length:
        raise DimensionError("vector length {} does not match {}".format(bits.size, length))
    return bits & 1


def _perm_map(p):
    return np.asarray(getattr(p, 'map', p), dtype=np.int64)


#
# alist interchange
#

def _alist_lines(text):
    if not isinstance(text, str):
        text = text.read()
    for lineno, line in enumerate(io.StringIO(text), 1):
        if line.strip():
            yield lineno, line


def _ints(line, lineno):
    try:
        return [int(x) for x in line.split()]
    except ValueError:
        raise AlistError("non-integer entry", lineno)


def from_alist(text):
    """Parse an alist description (1-based, zero padding allowed)."""
    lines = _alist_lines(text)

    def take(what):
        try:
            lineno, line = next(lines)
        except StopIteration:
            raise AlistError("unexpected end of input while reading {}".format(what))
        return lineno, _ints(line, lineno)

    lineno, dims = take('dimensions')
    if len(dims) != 2 or min(dims) < 0:
        raise AlistError("expected 'N M'", lineno)
    n_cols, n_rows = dims
    lineno, maxdeg = take('maximum degrees')
    if len(maxdeg) != 2:
        raise AlistError("expected maximum column and row degree", lineno)

    lineno, col_deg = take('column degrees')
    if len(col_deg) != n_cols:
        raise AlistError("expected {} column degrees, got {}".format(n_cols, len(col_deg)), lineno)
    lineno, row_deg = take('row degrees')
    if len(row_deg) != n_rows:
        raise AlistError("expected {} row degrees, got {}".format(n_rows, len(row_deg)), lineno)

    def neighbours(count, degrees, bound, what):
        out = []
        for k in range(count):
            lineno, entries = take(what)
            entries = [e for e in entries if e != 0]
            if len(entries) != degrees[k]:
                raise AlistError("{} {} lists {} entries, degree says {}".format(
                    what, k, len(entries), degrees[k]), lineno)
            for e in entries:
                if not 1 <= e <= bound:
                    raise AlistError("index {} out of range [1, {}]".format(e, bound), lineno)
            if len(set(entries)) != len(entries):
                raise AlistError("duplicate index in {} {}".format(what, k), lineno)
            out.append((lineno, sorted(e - 1 for e in entries)))
        return out

    cols = neighbours(n_cols, col_deg, n_rows, 'column')
    rows = neighbours(n_rows, row_deg, n_cols, 'row')

    from_rows = set((j, c) for j, (_, r) in enumerate(rows) for c in r)
    for c, (lineno, col) in enumerate(cols):
        for j in col:
            if (j, c) not in from_rows:
                raise AlistError("column {} lists row {} but row list disagrees".format(c, j), lineno)
    if len(from_rows) != sum(len(col) for _, col in cols):
        raise AlistError("row lists contain entries missing from column lists")

    return BinaryMatrix(n_rows, n_cols, [r for _, r in rows])


def to_alist(m):
    cols = m.col_lists()
    col_deg = [len(c) for c in cols]
    row_deg = m.row_degrees()
    out = ["{} {}".format(m.N, m.M),
           "{} {}".format(max(col_deg, default=0), max(row_deg, default=0)),
           ' '.join(str(d) for d in col_deg),
           ' '.join(str(d) for d in row_deg)]
    out.extend(' '.join(str(j + 1) for j in col) for col in cols)
    out.extend(' '.join(str(c + 1) for c in row) for row in m.rows)
    return '\n'.join(out) + '\n'


def read_alist(path):
    with open(path, 'r') as f:
        return from_alist(f)


def write_alist(m, path):
    with open(path, 'w') as f:
        f.write(to_alist(m))
    qcaed.log.debug("Wrote {} to {}".format(m, path))


#
# linear algebra
#

def _pack(dense):
    n_rows, n_cols = dense.shape
    width = max(1, -(-n_cols // _WORD)) * _WORD
    padded = np.zeros((n_rows, width), dtype=np.uint8)
    padded[:, :n_cols] = dense
    packed = np.packbits(padded, axis=1, bitorder='little')
    return np.ascontiguousarray(packed).view('<u8').copy()


def rank(m):
    """GF(2) row rank by forward elimination on a 64-bit packed copy."""
    words = _pack(m.to_dense())
    r = 0
    for col in range(m.N):
        if r == m.M:
            break
        w, b = divmod(col, _WORD)
        shift = np.uint64(b)
        hits = np.flatnonzero((words[r:, w] >> shift) & np.uint64(1))
        if hits.size == 0:
            continue
        p = r + hits[0]
        if p != r:
            words[[r, p]] = words[[p, r]]
        below = r + 1 + np.flatnonzero((words[r + 1:, w] >> shift) & np.uint64(1))
        words[below] ^= words[r]
        r += 1
    return r


def row_add(m, src, dst):
    """Return a copy with row dst replaced by dst XOR src."""
    _check_row(m, src, 'source row')
    _check_row(m, dst, 'destination row')
    if src == dst:
        raise DimensionError("source and destination row must differ")
    rows = list(m.rows)
    rows[dst] = tuple(sorted(set(rows[dst]).symmetric_difference(rows[src])))
    return BinaryMatrix(m.M, m.N, rows)


def append_row(m, row):
    bits = _as_bits(row, m.N)
    return BinaryMatrix(m.M + 1, m.N, list(m.rows) + [np.flatnonzero(bits).tolist()])


def remove_row(m, idx):
    _check_row(m, idx)
    return BinaryMatrix(m.M - 1, m.N, m.rows[:idx] + m.rows[idx + 1:])


def stack(a, b):
    if a.N != b.N:
        raise DimensionError("cannot stack {} and {}".format(a, b))
    return BinaryMatrix(a.M + b.M, a.N, a.rows + b.rows)


def row_bits(m, idx):
    _check_row(m, idx)
    bits = np.zeros(m.N, dtype=np.uint8)
    bits[list(m.rows[idx])] = 1
    return bits


def syndrome(m, v):
    bits = _as_bits(v, m.N)
    return (m.to_dense().astype(np.int64) @ bits.astype(np.int64) & 1).astype(np.uint8)


def permute_columns(m, p):
    """Column i of the result is column p(i) of m.

    Decoding apply(p, y) on m is the same as decoding y on the result.
    With compose(p, q) = p after q,
    permute_columns(m, compose(p, q)) == permute_columns(permute_columns(m, p), q).
    """
    pmap = _perm_map(p)
    if pmap.size != m.N:
        raise DimensionError("permutation of size {} on {} columns".format(pmap.size, m.N))
    inv = np.empty_like(pmap)
    inv[pmap] = np.arange(pmap.size)
    return BinaryMatrix(m.M, m.N, [inv[list(row)].tolist() for row in m.rows])


def row_multiset(m):
    return collections.Counter(m.rows)
