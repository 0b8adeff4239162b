import numpy as np
import pytest

from qcaed import channel
from qcaed.channel import ChannelParams


def test_sigma_at_zero_db_half_rate():
    assert channel.ebno_to_sigma(0.0, 0.5) == pytest.approx(1.0)


def test_sigma_at_3db():
    assert ChannelParams(3.0103, 0.5).variance == pytest.approx(0.5, abs=1e-4)


@pytest.mark.parametrize("rate", [0.0, -0.5, 1.5])
def test_bad_rate(rate):
    with pytest.raises(ValueError):
        channel.ebno_to_sigma(1.0, rate)


def test_explicit_sigma():
    assert ChannelParams(1.0, 0.5, sigma=0.25).sigma == 0.25
    with pytest.raises(ValueError):
        ChannelParams(1.0, 0.5, sigma=0.0)


def test_modulate():
    assert channel.modulate([0, 1]).tolist() == [1.0, -1.0]
    assert (channel.modulate(np.zeros(8, dtype=np.uint8)) == 1.0).all()


def test_hard_decision_ties_to_zero():
    assert channel.hard_decision([0.5, -0.1, 0.0, -0.0]).tolist() == [0, 1, 0, 0]


def test_llr():
    params = ChannelParams(0.0, 0.5, sigma=np.sqrt(0.5))
    assert channel.llr([0.0, 1.0, -1.0], params) == pytest.approx([0.0, 4.0, -4.0])


def test_transmit_with_tiny_sigma():
    x = channel.modulate([0, 1, 1, 0])
    y = channel.transmit(x, ChannelParams(0.0, 0.5, sigma=1e-12), channel.frame_rng(1, 0))
    assert y == pytest.approx(x)


def test_frame_rng_is_deterministic():
    a = channel.frame_rng(7, 3).standard_normal(5)
    b = channel.frame_rng(7, 3).standard_normal(5)
    c = channel.frame_rng(7, 4).standard_normal(5)
    d = channel.frame_rng(8, 3).standard_normal(5)
    assert a.tolist() == b.tolist()
    assert a.tolist() != c.tolist()
    assert a.tolist() != d.tolist()


def test_noise_does_not_depend_on_payload_draws():
    data, noise = channel.frame_rngs(1, 5)
    data.integers(0, 2, 100)
    first = noise.standard_normal(4)
    _, noise = channel.frame_rngs(1, 5)
    assert noise.standard_normal(4).tolist() == first.tolist()


def test_noise_statistics():
    params = ChannelParams(2.0, 0.5)
    y = channel.transmit(np.ones(200000), params, channel.frame_rng(3, 0))
    assert np.mean(y) == pytest.approx(1.0, abs=0.01)
    assert np.std(y) == pytest.approx(params.sigma, rel=0.01)



def test_llr_consistency():
    params = ChannelParams(1.0, 0.5)
    y = channel.transmit(channel.modulate(np.zeros(10 ** 6, dtype=np.uint8)), params, channel.frame_rng(9, 0))
    lch = channel.llr(y, params)
    assert np.mean(lch) == pytest.approx(2.0 / params.variance, rel=0.01)
    assert np.var(lch) == pytest.approx(4.0 / params.variance, rel=0.01)
    assert (np.sign(lch) == np.sign(y)).all()
