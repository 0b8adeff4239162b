import numpy as np
import pytest

from qcaed import aed, autom, bpdec, channel, gf2
from qcaed.aed import EnsembleConfig, aed_decode, select_ml
from qcaed.bpdec import BPDecoder, DecodeOutcome, DecoderConfig
from qcaed.errors import DimensionError, PermutationError
from qcaed.symbreak import make_decoding_matrix


def frame(code, ebno_db, seed, k, random_payload=True):
    params = channel.ChannelParams(ebno_db, code.rate)
    data, noise = channel.frame_rngs(seed, k)
    if random_payload:
        c = code.encode(data.integers(0, 2, code.K))
    else:
        c = np.zeros(code.N, dtype=np.uint8)
    y = channel.transmit(channel.modulate(c), params, noise)
    return c, y, channel.llr(y, params)


def test_select_ml_single_candidate():
    assert select_ml([[0, 1, 1]], [0.3, -1.0, 2.0]) == 0


def test_select_ml_prefers_exact_match():
    zero = np.zeros(6, dtype=np.uint8)
    flipped = zero.copy()
    flipped[2] = 1
    assert select_ml([flipped, zero], channel.modulate(zero)) == 1


def test_select_ml_ties_go_to_lowest_index():
    assert select_ml([[1, 0], [0, 1]], [0.5, 0.5]) == 0


def test_select_ml_matches_brute_force(rng):
    for _ in range(1000):
        n = int(rng.integers(2, 20))
        cands = rng.integers(0, 2, (int(rng.integers(1, 6)), n))
        y = rng.normal(size=n)
        dist = ((channel.modulate(cands) - y) ** 2).sum(axis=1)
        best = np.flatnonzero(dist == dist.min())[0]
        assert select_ml(cands, y) == best


def test_select_ml_errors():
    with pytest.raises(ValueError):
        select_ml(np.zeros((0, 4)), np.zeros(4))
    with pytest.raises(DimensionError):
        select_ml([[0, 1]], [0.0, 1.0, 2.0])


def test_pick_candidate_falls_back_to_all():
    outs = [DecodeOutcome(np.array([1, 1]), None, 1, False),
            DecodeOutcome(np.array([0, 0]), None, 1, False)]
    assert aed.pick_candidate(outs, np.array([1.0, 1.0]), [False, False]) == (1, False)
    assert aed.pick_candidate(outs, np.array([1.0, 1.0]), [True, False]) == (0, True)


def test_ensemble_config_checks_automorphisms(hamming):
    bad = autom.Permutation([1, 0, 2, 3, 4, 5, 6])
    with pytest.raises(PermutationError):
        EnsembleConfig([autom.identity(7), bad], H_orig=hamming)
    with pytest.raises(PermutationError):
        EnsembleConfig([], H_orig=hamming)
    with pytest.raises(DimensionError):
        EnsembleConfig([autom.identity(6)], H_orig=hamming)


def test_quasi_cyclic_ensemble(ccsds):
    cfg = EnsembleConfig.quasi_cyclic(ccsds)
    assert cfg.L == 16
    assert cfg.Htilde is ccsds.H
    assert EnsembleConfig.quasi_cyclic(ccsds, L=4).perms == autom.qc_group(16, 8)[:4]
    with pytest.raises(PermutationError):
        EnsembleConfig.quasi_cyclic(ccsds, L=17)
    with pytest.raises(PermutationError):
        EnsembleConfig.quasi_cyclic(ccsds, L=0)


def test_explicit_qc_perms_pass_the_check(ccsds):
    cfg = EnsembleConfig(autom.qc_group(16, 8)[:3], H_orig=ccsds.H)
    assert cfg.L == 3


def test_noiseless_frame(nr5g):
    Ht = make_decoding_matrix(nr5g.H, 'undercomplete', {'idx': 0})
    cfg = EnsembleConfig.quasi_cyclic(nr5g, Ht)
    c = nr5g.encode(np.arange(nr5g.K) % 3 == 0)
    y = channel.modulate(c)
    res = aed_decode(cfg, y, 30.0 * y)
    assert res.any_valid
    assert len(res.per_branch) == 11
    for b in res.per_branch:
        assert b.valid
        assert b.hard_bits.tolist() == c.tolist()
    assert res.selected.hard_bits.tolist() == c.tolist()
    assert res.max_iterations == 1
    assert res.avg_iterations == 1.0
    assert res.converged_count == 11


def test_unbroken_ensemble_branches_agree(ccsds):
    cfg = EnsembleConfig.quasi_cyclic(ccsds)
    for k in range(30):
        c, y, lch = frame(ccsds, 2.5, 11, k)
        res = aed_decode(cfg, y, lch)
        first = res.per_branch[0]
        for b in res.per_branch[1:]:
            assert b.hard_bits.tolist() == first.hard_bits.tolist()
            assert b.iterations_used == first.iterations_used
        assert res.candidate_index == 0 or not first.valid


def test_broken_ensemble_branches_differ(nr5g):
    Ht = make_decoding_matrix(nr5g.H, 'undercomplete', {'idx': 0})
    cfg = EnsembleConfig.quasi_cyclic(nr5g, Ht)
    differ = 0
    for k in range(40):
        c, y, lch = frame(nr5g, 1.5, 5, k)
        res = aed_decode(cfg, y, lch)
        its = set(b.iterations_used for b in res.per_branch)
        words = set(tuple(b.hard_bits.tolist()) for b in res.per_branch)
        differ += len(its) > 1 or len(words) > 1
    assert differ > 0


def test_selected_candidate_is_valid_when_any_is(nr5g):
    Ht = make_decoding_matrix(nr5g.H, 'undercomplete', {'idx': 0})
    cfg = EnsembleConfig.quasi_cyclic(nr5g, Ht, DecoderConfig(max_iter=16))
    for k in range(40):
        c, y, lch = frame(nr5g, 2.0, 9, k)
        res = aed_decode(cfg, y, lch)
        for b in res.per_branch:
            assert b.valid == (not gf2.syndrome(nr5g.H, b.hard_bits).any())
        if res.any_valid:
            assert res.selected.valid
        valid = [b for b in res.per_branch if b.valid]
        corr = [float(channel.modulate(b.hard_bits) @ y) for b in valid]
        if valid:
            assert float(channel.modulate(res.selected.hard_bits) @ y) == pytest.approx(max(corr))


def test_ensemble_with_layered_decoders(ccsds):
    Ht = make_decoding_matrix(ccsds.H, 'undercomplete', {'idx': 0})
    cfg = EnsembleConfig.quasi_cyclic(ccsds, Ht, DecoderConfig(max_iter=16, schedule='layered'), L=4)
    c, y, lch = frame(ccsds, 4.0, 2, 0)
    res = aed_decode(cfg, y, lch)
    assert len(res.per_branch) == 4
    assert res.max_iterations <= 16


def test_frame_length_check(ccsds):
    cfg = EnsembleConfig.quasi_cyclic(ccsds, L=2)
    with pytest.raises(DimensionError):
        aed_decode(cfg, np.zeros(10), np.zeros(10))


def test_single_identity_branch_is_plain_decoding(nr5g):
    Ht = make_decoding_matrix(nr5g.H, 'undercomplete', {'idx': 0}).H
    dcfg = DecoderConfig(max_iter=20)
    cfg = EnsembleConfig([autom.identity(nr5g.N)], dcfg, Ht, nr5g.H)
    for k in range(20):
        c, y, lch = frame(nr5g, 1.5, 13, k)
        res = aed_decode(cfg, y, lch)
        plain = bpdec.decode(Ht, lch, dcfg)
        assert res.candidate_index == 0
        assert res.selected.hard_bits.tolist() == plain.hard_bits.tolist()
        assert res.selected.total_llr.tolist() == plain.total_llr.tolist()
        assert res.selected.iterations_used == plain.iterations_used
        assert res.selected.valid == (not gf2.syndrome(nr5g.H, plain.hard_bits).any())


def test_ensemble_corrects_frames_plain_bp_misses(nr5g):
    Ht = make_decoding_matrix(nr5g.H, 'undercomplete', {'idx': 0})
    cfg = EnsembleConfig.quasi_cyclic(nr5g, Ht)
    frames = [frame(nr5g, 1.5, 17, k) for k in range(300)]
    plain = BPDecoder(nr5g.H).decode_batch(np.array([f[2] for f in frames]))
    missed = [f for f, out in zip(frames, plain) if out.hard_bits.tolist() != f[0].tolist()]
    assert missed
    corrected = 0
    for c, y, lch in missed:
        corrected += aed_decode(cfg, y, lch).selected.hard_bits.tolist() == c.tolist()
    assert corrected > 0
