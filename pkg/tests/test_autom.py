import numpy as np
import pytest

from qcaed import autom
from qcaed.autom import Permutation, apply, compose, inverse, qc_perm
from qcaed.errors import PermutationError


def test_zero_shift_is_identity():
    assert qc_perm(0, 4, 2) == autom.identity(8)
    assert qc_perm(0, 4, 2).is_identity()


def test_shift_wraps_inside_blocks():
    p = qc_perm(1, 4, 2)
    assert p[3] == 0
    assert p[7] == 4
    assert p[0] == 1
    assert list(p) == [1, 2, 3, 0, 5, 6, 7, 4]


def test_shift_range():
    with pytest.raises(PermutationError):
        qc_perm(4, 4, 2)
    with pytest.raises(PermutationError):
        qc_perm(-1, 4, 2)


def test_not_a_bijection():
    with pytest.raises(PermutationError):
        Permutation([0, 0, 1])


def test_apply_convention():
    assert apply(qc_perm(1, 3, 1), ['a', 'b', 'c']).tolist() == ['c', 'a', 'b']
    assert apply(autom.identity(3), [5, 6, 7]).tolist() == [5, 6, 7]


def test_apply_on_batches():
    p = qc_perm(2, 3, 2)
    v = np.arange(12).reshape(2, 6)
    out = apply(p, v)
    assert out[0].tolist() == apply(p, v[0]).tolist()
    assert out[1].tolist() == apply(p, v[1]).tolist()


def test_apply_size_check():
    with pytest.raises(PermutationError):
        apply(qc_perm(1, 3, 1), [1, 2])


def test_inverse_and_compose(rng):
    p = Permutation(rng.permutation(10))
    q = Permutation(rng.permutation(10))
    v = rng.normal(size=10)
    assert compose(p, inverse(p)).is_identity()
    assert compose(inverse(p), p).is_identity()
    assert apply(compose(p, q), v).tolist() == apply(p, apply(q, v)).tolist()
    assert apply(inverse(p), apply(p, v)).tolist() == v.tolist()


def test_shifts_form_a_cyclic_group():
    Z, n = 5, 3
    for a in range(Z):
        for b in range(Z):
            assert compose(qc_perm(a, Z, n), qc_perm(b, Z, n)) == qc_perm((a + b) % Z, Z, n)
    assert len(autom.qc_group(Z, n)) == Z


def test_hashable():
    assert len({qc_perm(1, 4, 2), qc_perm(1, 4, 2), qc_perm(2, 4, 2)}) == 2


def test_identity_is_automorphism(hamming):
    assert autom.is_automorphism(hamming, autom.identity(7))


def test_qc_shifts_are_automorphisms(std_code):
    for d in (1, std_code.Z - 1, std_code.Z // 2):
        assert autom.is_automorphism(std_code.H, qc_perm(d, std_code.Z, std_code.n))


def test_random_transpositions_are_not_automorphisms(ccsds, rng):
    misses = 0
    for _ in range(20):
        i, j = rng.choice(ccsds.N, size=2, replace=False)
        m = list(range(ccsds.N))
        m[i], m[j] = m[j], m[i]
        misses += not autom.is_automorphism(ccsds.H, Permutation(m))
    # a transposition of two positions with identical columns would pass
    assert misses >= 19
