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
import functools
import math

import numpy as np

import qcaed
from qcaed.channel import hard_decision
from qcaed.errors import DimensionError

SCHEDULES = ('flooding', 'layered')

# tanh(19.07) rounds to 1.0 in double precision, so atanh needs its own clamp
TANH_ARG_MAX = 19.07
ATANH_MAX = 1.0 - 1e-15


class DecoderConfig(collections.namedtuple(
        'DecoderConfig', ['max_iter', 'schedule', 'llr_clip', 'early_stop'])):

    def __new__(cls, max_iter=32, schedule='flooding', llr_clip=64.0, early_stop=True):
        max_iter = int(max_iter)
        llr_clip = float(llr_clip)
        if max_iter < 1:
            raise ValueError("max_iter must be at least 1")
        if not llr_clip > 0:
            raise ValueError("llr_clip must be positive")
        if schedule not in SCHEDULES:
            raise ValueError("unknown schedule '{}', expected one of {}".format(schedule, SCHEDULES))
        return super(DecoderConfig, cls).__new__(cls, max_iter, schedule, llr_clip, bool(early_stop))


class DecodeOutcome(object):
    __slots__ = ('hard_bits', 'total_llr', 'iterations_used', 'converged', 'valid')

    def __init__(self, hard_bits, total_llr, iterations_used, converged, valid=None):
        self.hard_bits = hard_bits
        self.total_llr = total_llr
        self.iterations_used = iterations_used
        self.converged = converged
        self.valid = valid

    def __repr__(self):
        return '<DecodeOutcome(iterations={it}, converged={conv}, valid={valid})>'.format(
            it=self.iterations_used, conv=self.converged, valid=self.valid)


def vn_update(lch, incoming, exclude, clip=64.0):
    """Variable-node rule: channel LLR plus all incoming but one."""
    total = float(lch)
    for k, msg in enumerate(incoming):
        if k != exclude:
            total += msg
    return max(-clip, min(clip, total))


def _tanh_half(x):
    return math.tanh(max(-TANH_ARG_MAX, min(TANH_ARG_MAX, 0.5 * x)))


def cn_update(incoming, exclude):
    """Check-node rule 2 atanh(prod tanh(L/2)) over all inputs but one."""
    if len(incoming) < 2:
        raise ValueError("a check node needs at least two incoming messages")
    prod = 1.0
    for k, msg in enumerate(incoming):
        if k != exclude:
            prod *= _tanh_half(msg)
    return 2.0 * math.atanh(max(-ATANH_MAX, min(ATANH_MAX, prod)))


def _excluded_products(t):
    """For each entry along the last axis, the product of all the others.

    Values are multiplied in ascending order so the result only depends on
    the multiset of a node's inputs, not on the order of its neighbours.
    """
    order = np.argsort(t, axis=-1, kind='stable')
    ts = np.take_along_axis(t, order, axis=-1)
    pre = np.ones_like(ts)
    suf = np.ones_like(ts)
    if ts.shape[-1] > 1:
        pre[..., 1:] = np.cumprod(ts[..., :-1], axis=-1)
        suf[..., :-1] = np.cumprod(ts[..., :0:-1], axis=-1)[..., ::-1]
    out = np.empty_like(ts)
    np.put_along_axis(out, order, pre * suf, axis=-1)
    return out


def _sorted_sum(v):
    s = np.sort(v, axis=-1)
    acc = np.zeros(s.shape[:-1], dtype=s.dtype)
    for k in range(s.shape[-1]):
        acc = acc + s[..., k]
    return acc


def _tanh_half_vec(v):
    return np.tanh(np.clip(0.5 * v, -TANH_ARG_MAX, TANH_ARG_MAX))


def _c2v_from_products(p, clip):
    return np.clip(2.0 * np.arctanh(np.clip(p, -ATANH_MAX, ATANH_MAX)), -clip, clip)


def clip_channel(lch, clip):
    """Clip channel LLRs to +-clip, keeping infinite ones.

    An infinite LLR marks a known bit: its total stays infinite, so no
    amount of check node evidence flips it, while the messages it sends
    are clipped like any other.
    """
    lch = np.asarray(lch, dtype=np.float64)
    return np.where(np.isinf(lch), lch, np.clip(lch, -clip, clip))


class BPDecoder(object):
    """Sum-product decoder bound to one parity-check matrix.

    Decoding state lives in local arrays, so one instance can serve
    several threads; H itself is never modified.
    """

    def __init__(self, H, cfg=None):
        self.H = H
        self.cfg = cfg if cfg is not None else DecoderConfig()
        rows = H.rows
        self.n_edges = sum(len(r) for r in rows)
        E = self.n_edges

        # edges are numbered row by row in ascending column order
        self.edge_col = np.fromiter((c for r in rows for c in r), dtype=np.int64, count=E)
        self.row_start = np.zeros(H.M + 1, dtype=np.int64)
        self.row_start[1:] = np.cumsum([len(r) for r in rows])

        dc = max([len(r) for r in rows] + [1])
        self.cn_edge = np.full((H.M, dc), E, dtype=np.int64)
        self.cn_mask = np.zeros((H.M, dc), dtype=bool)
        self.cn_col = np.full((H.M, dc), H.N, dtype=np.int64)
        for j, r in enumerate(rows):
            self.cn_edge[j, :len(r)] = np.arange(self.row_start[j], self.row_start[j + 1])
            self.cn_mask[j, :len(r)] = True
            self.cn_col[j, :len(r)] = r

        col_edges = [[] for _ in range(H.N)]
        for e, c in enumerate(self.edge_col):
            col_edges[c].append(e)
        dv = max([len(c) for c in col_edges] + [1])
        self.vn_edge = np.full((H.N, dv), E, dtype=np.int64)
        for c, es in enumerate(col_edges):
            self.vn_edge[c, :len(es)] = es

    def __repr__(self):
        return '<BPDecoder(H={}, cfg={})>'.format(self.H, tuple(self.cfg))

    def syndrome_ok(self, hard):
        """Per row of hard (B x N): True if every check is satisfied."""
        padded = np.concatenate([hard, np.zeros((hard.shape[0], 1), dtype=hard.dtype)], axis=1)
        return ~np.any(padded[:, self.cn_col].sum(axis=-1) & 1, axis=-1)

    def decode(self, lch):
        return self.decode_batch(np.asarray(lch, dtype=np.float64)[None, :])[0]

    def decode_batch(self, lch):
        lch = np.atleast_2d(np.asarray(lch, dtype=np.float64))
        if lch.shape[1] != self.H.N:
            raise DimensionError("LLR vector of length {} for a matrix with N={}".format(
                lch.shape[1], self.H.N))
        if self.cfg.schedule == 'layered':
            return self._run(lch, self._layered_init, self._layered_iteration)
        return self._run(lch, self._flooding_init, self._flooding_iteration)

    def _run(self, lch, init, iteration):
        cfg = self.cfg
        B = lch.shape[0]
        results = [None] * B
        active = np.arange(B)
        lch = clip_channel(lch, cfg.llr_clip)
        state = init(lch)
        for it in range(1, cfg.max_iter + 1):
            state, total = iteration(lch, state)
            hard = hard_decision(total)
            ok = self.syndrome_ok(hard)
            last = it == cfg.max_iter
            if last:
                finished = np.ones(len(active), dtype=bool)
            elif cfg.early_stop:
                finished = ok
            else:
                finished = np.zeros(len(active), dtype=bool)
            for k in np.flatnonzero(finished):
                results[active[k]] = DecodeOutcome(hard[k].copy(), total[k].copy(), it, bool(ok[k]))
            if finished.all():
                break
            keep = ~finished
            active = active[keep]
            lch = lch[keep]
            state = tuple(s[keep] for s in state)
        qcaed.log.debug("Decoded batch of {} on {}: iterations {}".format(
            B, self.H, [r.iterations_used for r in results]))
        return results

    def _flooding_init(self, lch):
        v2c = np.zeros((lch.shape[0], self.n_edges + 1))
        v2c[:, :self.n_edges] = np.clip(lch[:, self.edge_col], -self.cfg.llr_clip, self.cfg.llr_clip)
        return (v2c,)

    def _flooding_iteration(self, lch, state):
        clip = self.cfg.llr_clip
        v2c, = state
        E = self.n_edges

        t = _tanh_half_vec(v2c[:, self.cn_edge])
        t = np.where(self.cn_mask, t, 1.0)
        c2v = np.zeros_like(v2c)
        c2v_dense = _c2v_from_products(_excluded_products(t), clip)
        c2v[:, :E] = c2v_dense[:, self.cn_mask]

        total = lch + _sorted_sum(c2v[:, self.vn_edge])
        v2c = np.empty_like(c2v)
        v2c[:, :E] = np.clip(total[:, self.edge_col] - c2v[:, :E], -clip, clip)
        v2c[:, E] = 0.0
        return (v2c,), np.clip(total, -clip, clip)

    def _layered_init(self, lch):
        return (lch.copy(), np.zeros((lch.shape[0], self.n_edges)))

    def _layered_iteration(self, lch, state):
        clip = self.cfg.llr_clip
        total, c2v = state
        total = total.copy()
        c2v = c2v.copy()
        for j in range(self.H.M):
            a, b = self.row_start[j], self.row_start[j + 1]
            if a == b:
                continue
            cols = self.edge_col[a:b]
            v = np.clip(total[:, cols] - c2v[:, a:b], -clip, clip)
            new = _c2v_from_products(_excluded_products(_tanh_half_vec(v)), clip)
            total[:, cols] = np.where(np.isinf(lch[:, cols]), total[:, cols], np.clip(v + new, -clip, clip))
            c2v[:, a:b] = new
        return (total, c2v), np.clip(total, -clip, clip)


@functools.lru_cache(maxsize=32)
def get_decoder(H, cfg):
    return BPDecoder(H, cfg)


def decode(H, lch, cfg=None):
    if cfg is None:
        cfg = DecoderConfig()
    return get_decoder(H, cfg).decode(lch)
