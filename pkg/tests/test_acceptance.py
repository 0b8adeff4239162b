"""Long statistical checks of the decoders against each other.

Run with ``pytest --runslow``; a full run takes the better part of an hour.
"""
import math

import numpy as np
import pytest

import qcaed
from qcaed import channel, sim
from qcaed.aed import EnsembleConfig, aed_decode
from qcaed.cli import default_workers
from qcaed.sim import RunConfig

pytestmark = pytest.mark.slow

BUDGET = dict(min_block_errors=100, max_frames=400000, seed=1)


def point(code, ebno_db, **kw):
    values = dict(code=code, ebno=(ebno_db,), workers=default_workers())
    values.update(BUDGET)
    values.update(kw)
    return sim.run_point(RunConfig(**values), ebno_db)


def overlaps(a, b):
    return a.ci_low <= b.ci_high and b.ci_low <= a.ci_high


@pytest.fixture(scope='module')
def nr5g_waterfall():
    """Eb/N0 where plain BP-32 on the (132,66) code is closest to BLER 1e-3."""
    best = None
    for ebno_db in (2.5, 3.0, 3.5, 4.0, 4.5):
        res = point('nr5g_132_66', ebno_db, min_block_errors=50, max_frames=100000)
        if res.block_errors and (best is None or
                                 abs(math.log10(res.bler) + 3) < abs(math.log10(best.bler) + 3)):
            best = res
    assert best is not None
    bp = point('nr5g_132_66', best.ebno_db)
    return best.ebno_db, bp


def test_unbroken_ensemble_is_useless():
    code = qcaed.load_standard_code('ccsds_128_64')
    cfg = EnsembleConfig.quasi_cyclic(code)
    params = channel.ChannelParams(3.5, code.rate)
    for k in range(10000):
        _, noise = channel.frame_rngs(1, k)
        y = channel.transmit(np.ones(code.N), params, noise)
        res = aed_decode(cfg, y, channel.llr(y, params))
        ref = res.per_branch[0].hard_bits
        for b in res.per_branch[1:]:
            assert np.array_equal(b.hard_bits, ref)


def test_aed_gain_5g(nr5g_waterfall):
    ebno_db, bp = nr5g_waterfall
    aed = point('nr5g_132_66', ebno_db, decoder='aed', break_method='undercomplete', break_params='idx=0')
    assert aed.block_errors >= 100 and bp.block_errors >= 100
    assert aed.bler <= 0.5 * bp.bler
    assert aed.ci_high < bp.ci_low


def test_three_methods_agree(nr5g_waterfall):
    ebno_db, _ = nr5g_waterfall
    results = [point('nr5g_132_66', ebno_db, decoder='aed', break_method=m, break_params=p)
               for m, p in (('row-add', 'src=0;dst=1'),
                            ('overcomplete', 'count=4;draws=100;seed=0'),
                            ('undercomplete', 'idx=0'))]
    for i in range(3):
        for j in range(i + 1, 3):
            assert overlaps(results[i], results[j])


@pytest.mark.parametrize("method, params", [
    ('row-add', 'src=0;dst=1'),
    ('overcomplete', 'count=4;draws=100;seed=0'),
    ('undercomplete', 'idx=0'),
])
def test_single_modified_matrix_is_not_better(nr5g_waterfall, method, params):
    ebno_db, bp = nr5g_waterfall
    single = point('nr5g_132_66', ebno_db, break_method=method, break_params=params)
    assert single.ci_high >= bp.ci_low


def test_aed_beats_bp_on_ccsds():
    bp = point('ccsds_128_64', 3.5)
    aed = point('ccsds_128_64', 3.5, decoder='aed', break_method='undercomplete', break_params='idx=0')
    assert aed.bler < bp.bler
    assert aed.ci_high < bp.ci_low


def test_aed_close_to_sbp_on_ccsds():
    aed = point('ccsds_128_64', 3.0, decoder='aed', break_method='undercomplete', break_params='idx=0')
    sbp = point('ccsds_128_64', 3.0, decoder='sbp', ensemble_s=4)
    assert aed.block_errors >= 100 and sbp.block_errors >= 100
    ratio = aed.bler / sbp.bler
    assert 1 / 1.5 <= ratio <= 1.5


def test_aed_latency_below_sbp():
    fixed = dict(min_block_errors=10 ** 9, max_frames=3000)
    aed = point('ccsds_128_64', 4.0, decoder='aed', break_method='undercomplete', break_params='idx=0', **fixed)
    sbp = point('ccsds_128_64', 4.0, decoder='sbp', ensemble_s=4, sbp_stop_after=3, **fixed)
    assert aed.avg_max_iterations * 4 < sbp.avg_iterations
    assert sbp.avg_converged < 3


def test_payload_shortcut_matches_random_codewords():
    common = dict(decoder='aed', break_method='undercomplete', break_params='idx=0')
    zero = point('ccsds_128_64', 3.0, payload='all_zero', **common)
    rand = point('ccsds_128_64', 3.0, payload='random_encoded', **common)
    assert overlaps(zero, rand)


def test_bler_falls_over_the_waterfall():
    cfg = RunConfig(code='ccsds_128_64', ebno=(1.5, 2.5, 3.5), workers=default_workers(), **BUDGET)
    results = sim.run_sweep(cfg)
    for a, b in zip(results, results[1:]):
        assert b.ci_low <= a.ci_high
        assert b.bler <= a.bler * 1.2
