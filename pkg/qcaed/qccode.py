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

import os

import numpy as np

import qcaed
import qcaed.gf2 as gf2
from qcaed.errors import BaseMatrixError, CodeConstructionError, DimensionError, EncoderError

codes_dir = os.path.join(os.path.dirname(os.path.abspath(__file__)), "codes")

# name -> (N, K, Z)
standard_codes = {
    'ccsds_128_64': (128, 64, 16),
    'ccsds_256_128': (256, 128, 32),
    'nr5g_132_66': (132, 66, 11),
    'nr5g_264_132': (264, 132, 22),
    'wifi_648_540': (648, 540, 27),
}

_code_cache = {}


class BaseMatrix(object):
    """Exponent matrix of a QC code.

    Each cell holds a tuple of distinct circulant offsets; an empty tuple is
    the all-zero block, more than one offset a sum of circulants.
    """

    def __init__(self, cells, Z=None):
        cells = [[tuple(sorted(int(o) for o in cell)) for cell in row] for row in cells]
        if not cells or not cells[0]:
            raise BaseMatrixError("base matrix must have at least one cell")
        n = len(cells[0])
        for i, row in enumerate(cells):
            if len(row) != n:
                raise BaseMatrixError("row {} has {} cells, expected {}".format(i, len(row), n))
            for j, cell in enumerate(row):
                if len(set(cell)) != len(cell):
                    raise BaseMatrixError("duplicate offset in cell ({}, {})".format(i, j))
                if any(o < 0 or (Z is not None and o >= Z) for o in cell):
                    raise BaseMatrixError("offset out of range in cell ({}, {})".format(i, j))
        self.cells = tuple(tuple(row) for row in cells)
        self.m = len(cells)
        self.n = n
        self.Z = Z

    def __eq__(self, other):
        if not isinstance(other, BaseMatrix):
            return NotImplemented
        return self.cells == other.cells and self.Z == other.Z

    def __hash__(self):
        return hash((self.cells, self.Z))

    def __repr__(self):
        return '<BaseMatrix(m={m}, n={n}, Z={Z})>'.format(m=self.m, n=self.n, Z=self.Z)


def parse_base_matrix(text):
    """Parse "m n Z" followed by m lines of n cells ("-" or "o1,o2,...")."""
    if not isinstance(text, str):
        text = text.read()
    header = None
    cells = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split('#', 1)[0].strip()
        if not line:
            continue
        if header is None:
            try:
                header = [int(x) for x in line.split()]
            except ValueError:
                raise BaseMatrixError("line {}: malformed header".format(lineno))
            if len(header) != 3 or min(header) < 1:
                raise BaseMatrixError("line {}: expected 'm n Z'".format(lineno))
            continue
        row = []
        for tok in line.split():
            if tok == '-':
                row.append(())
                continue
            try:
                row.append(tuple(int(x) for x in tok.split(',')))
            except ValueError:
                raise BaseMatrixError("line {}: malformed cell '{}'".format(lineno, tok))
        if len(row) != header[1]:
            raise BaseMatrixError("line {}: expected {} cells, got {}".format(lineno, header[1], len(row)))
        cells.append(row)
    if header is None:
        raise BaseMatrixError("empty base matrix description")
    m, n, Z = header
    if len(cells) != m:
        raise BaseMatrixError("expected {} rows, got {}".format(m, len(cells)))
    return BaseMatrix(cells, Z=Z)


def lift(base, Z=None):
    """Expand base into a binary matrix of (m*Z) x (n*Z).

    Offset s in cell (i, j) puts a one at (i*Z + r, j*Z + (r + s) % Z) for
    every r, i.e. the identity shifted right by s.
    """
    if Z is None:
        Z = base.Z
    if Z is None or Z < 1:
        raise BaseMatrixError("lifting factor must be a positive integer")
    rows = []
    for i, brow in enumerate(base.cells):
        for r in range(Z):
            row = []
            for j, cell in enumerate(brow):
                for off in cell:
                    if off >= Z:
                        raise BaseMatrixError("offset {} in cell ({}, {}) exceeds Z={}".format(off, i, j, Z))
                    row.append(j * Z + (r + off) % Z)
            rows.append(row)
    return gf2.BinaryMatrix(base.m * Z, base.n * Z, rows)


def block_offsets(H, Z, i, j):
    """Recover the circulant offsets of block (i, j) from a lifted matrix."""
    if H.M % Z or H.N % Z:
        raise DimensionError("{} is not made of {}x{} blocks".format(H, Z, Z))
    return tuple(sorted(c - j * Z for c in H.rows[i * Z] if j * Z <= c < (j + 1) * Z))


class Encoder(object):
    """Systematic encoder from the reduced row echelon form of H.

    info_positions lists the codeword positions carrying the K information
    bits in order; parity_positions the pivot columns of the elimination.
    """

    def __init__(self, N, info_positions, parity_positions, parity_matrix):
        self.N = N
        self.info_positions = np.asarray(info_positions, dtype=np.int64)
        self.parity_positions = np.asarray(parity_positions, dtype=np.int64)
        self.parity_matrix = np.asarray(parity_matrix, dtype=np.uint8)
        self.K = self.info_positions.size

    def encode(self, info):
        info = np.asarray(info).astype(np.uint8).ravel()
        if info.size != self.K:
            raise DimensionError("information word of length {}, expected {}".format(info.size, self.K))
        c = np.zeros(self.N, dtype=np.uint8)
        c[self.info_positions] = info & 1
        if self.parity_positions.size:
            parity = self.parity_matrix.astype(np.int64) @ (info & 1).astype(np.int64)
            c[self.parity_positions] = parity & 1
        return c


def build_encoder(code_or_H, K=None):
    """Gaussian elimination scanning columns right to left.

    For codes with a parity part on the right this leaves the information
    bits in the first K positions.
    """
    H = getattr(code_or_H, 'H', code_or_H)
    if K is None:
        K = getattr(code_or_H, 'K', None)
    A = H.to_dense().copy()
    pivots = []
    r = 0
    for c in range(H.N - 1, -1, -1):
        if r == H.M:
            break
        hits = np.flatnonzero(A[r:, c])
        if hits.size == 0:
            continue
        p = r + hits[0]
        if p != r:
            A[[r, p]] = A[[p, r]]
        others = np.flatnonzero(A[:, c])
        others = others[others != r]
        A[others] ^= A[r]
        pivots.append(c)
        r += 1
    pivot_set = set(pivots)
    info = [c for c in range(H.N) if c not in pivot_set]
    if K is not None and len(info) != K:
        raise EncoderError("elimination leaves {} information positions, code says K={}".format(len(info), K))
    qcaed.log.debug("Encoder for {}: rank {}, K {}".format(H, r, len(info)))
    return Encoder(H.N, info, pivots, A[:r][:, info])


def encode(code, info):
    return code.encoder.encode(info)


class QcCode(object):
    def __init__(self, name, base, Z=None):
        self.name = name
        self.base = base
        self.Z = Z if Z is not None else base.Z
        self.H = lift(base, self.Z)
        self.rank = gf2.rank(self.H)
        self.K = self.H.N - self.rank
        self.encoder = build_encoder(self.H, self.K)

    @property
    def N(self):
        return self.H.N

    @property
    def M(self):
        return self.H.M

    @property
    def n(self):
        return self.base.n

    @property
    def rate(self):
        return float(self.K) / self.N

    def encode(self, info):
        return self.encoder.encode(info)

    def __repr__(self):
        return '<QcCode(name={name}, N={N}, K={K}, Z={Z})>'.format(
            name=self.name, N=self.N, K=self.K, Z=self.Z)


def list_standard_codes():
    return sorted(standard_codes)


def load_standard_code(name):
    if name in _code_cache:
        return _code_cache[name]
    if name not in standard_codes:
        raise CodeConstructionError("unknown code '{}', choose one of {}".format(
            name, ', '.join(list_standard_codes())))
    path = os.path.join(codes_dir, "{}.txt".format(name))
    try:
        with open(path, 'r') as f:
            base = parse_base_matrix(f)
    except (IOError, OSError) as e:
        raise CodeConstructionError("cannot read base matrix for {}: {}".format(name, e))
    except BaseMatrixError as e:
        raise CodeConstructionError("corrupt base matrix for {}: {}".format(name, e))

    N, K, Z = standard_codes[name]
    if base.Z != Z:
        raise CodeConstructionError("{}: data file has Z={}, expected {}".format(name, base.Z, Z))
    code = QcCode(name, base)
    if (code.N, code.K) != (N, K):
        raise CodeConstructionError("{}: lifted code is ({}, {}), expected ({}, {})".format(
            name, code.N, code.K, N, K))
    qcaed.log.info("Loaded {}".format(code))
    _code_cache[name] = code
    return code
