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


class ChannelParams(object):
    """BI-AWGN operating point with unit-energy BPSK symbols."""

    def __init__(self, ebno_db, rate, sigma=None):
        self.ebno_db = float(ebno_db)
        self.rate = float(rate)
        self.sigma = ebno_to_sigma(ebno_db, rate) if sigma is None else float(sigma)
        if not self.sigma > 0:
            raise ValueError("noise standard deviation must be positive")

    @property
    def variance(self):
        return self.sigma * self.sigma

    def __repr__(self):
        return '<ChannelParams(ebno_db={:.4f}, rate={:.4f}, sigma={:.6f})>'.format(
            self.ebno_db, self.rate, self.sigma)


def ebno_to_sigma(ebno_db, rate):
    if not rate > 0 or rate > 1:
        raise ValueError("code rate must lie in (0, 1], got {}".format(rate))
    return math.sqrt(1.0 / (2.0 * rate * 10.0 ** (ebno_db / 10.0)))


def frame_rng(seed, frame):
    """Generator for one frame; depends only on (seed, frame)."""
    return np.random.default_rng(np.random.SeedSequence([int(seed) & 0xFFFFFFFFFFFFFFFF, int(frame)]))


def frame_rngs(seed, frame):
    """Independent payload and noise generators for one frame.

    The noise stream does not depend on the payload mode, so all-zero and
    random-codeword runs see the same noise realizations.
    """
    data, noise = np.random.SeedSequence([int(seed) & 0xFFFFFFFFFFFFFFFF, int(frame)]).spawn(2)
    return np.random.default_rng(data), np.random.default_rng(noise)


def modulate(bits):
    # 0 -> +1, 1 -> -1
    return 1.0 - 2.0 * (np.asarray(bits).astype(np.float64))


def hard_decision(values):
    # ties go to bit 0
    return (np.asarray(values) < 0).astype(np.uint8)


def transmit(x, params, rng):
    x = np.asarray(x, dtype=np.float64)
    return x + params.sigma * rng.standard_normal(x.shape)


def llr(y, params):
    return 2.0 * np.asarray(y, dtype=np.float64) / params.variance
