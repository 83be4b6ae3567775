# test_quadform.py
import itertools
from fractions import Fraction

import numpy as np
import pytest

from quadform import (
    HalfIntegralMatrix,
    UnimodularMatrix,
    act,
    assemble_block,
    block_discriminant_identity,
    block_split,
    content,
    coset_excess,
    cosets,
    det_gram,
    discriminant,
    evaluate,
    invariant_factors,
    is_fundamental,
    is_locally_normalized,
    is_positive_definite,
    is_primitive_mu,
    local_normalize,
    local_normalize_odd,
    max_mu_denominator,
    mu_denominator,
    mu_value,
    reduce_mod,
    same_coset,
    trace,
    transvection_word,
)
from utils import PreconditionError, UnsupportedCaseError

A2 = HalfIntegralMatrix(((2, 1), (1, 2)))
D15 = HalfIntegralMatrix(((2, 1), (1, 8)))
I2 = HalfIntegralMatrix.identity(2)
I3 = HalfIntegralMatrix.identity(3)


# ---------- конструкторы ----------


def test_gram_validation():
    with pytest.raises(PreconditionError):
        HalfIntegralMatrix(((1, 0), (0, 2)))  # нечётная диагональ
    with pytest.raises(PreconditionError):
        HalfIntegralMatrix(((2, 1), (0, 2)))  # несимметрична
    with pytest.raises(PreconditionError):
        HalfIntegralMatrix(())


def test_from_half_matches_gram():
    T = HalfIntegralMatrix.from_half([[1, Fraction(1, 2)], [Fraction(1, 2), 1]])
    assert T == A2
    with pytest.raises(PreconditionError):
        HalfIntegralMatrix.from_half([[1, Fraction(1, 3)], [Fraction(1, 3), 1]])


def test_unimodular_needs_unit_det():
    assert UnimodularMatrix(((1, 1), (0, 1))).det == 1
    with pytest.raises(PreconditionError):
        UnimodularMatrix(((2, 0), (0, 1)))


# ---------- инварианты ----------


def test_content():
    assert content(I2) == 1
    assert content(HalfIntegralMatrix(((4, 0), (0, 4)))) == 2
    assert content(A2) == 1


def test_discriminant():
    assert discriminant(I2) == 4
    assert discriminant(A2) == 3
    assert discriminant(I3) == 4
    assert discriminant(D15) == 15
    assert discriminant(HalfIntegralMatrix.scalar(7)) == 7


def test_fundamental():
    assert is_fundamental(A2)
    assert is_fundamental(D15)
    assert not is_fundamental(I2)
    assert not is_fundamental(HalfIntegralMatrix.scalar(9))


def test_evaluate_and_trace():
    assert evaluate(A2, (1, 1)) == 3
    assert evaluate(A2, (1, -1)) == 1
    assert trace(D15) == 5
    with pytest.raises(PreconditionError):
        evaluate(A2, (1, 1, 1))


def test_act_preserves_discriminant():
    U = UnimodularMatrix(((1, 1), (0, 1)))
    moved = act(D15, U)
    assert discriminant(moved) == discriminant(D15)
    assert is_positive_definite(moved)


# ---------- блоки ----------


def test_block_split_identity3():
    t, r, lower = block_split(I3)
    assert (t, r, lower) == (1, (0, 0), I2)


def test_block_split_a2():
    t, r, lower = block_split(A2)
    assert (t, r, lower) == (1, (1,), HalfIntegralMatrix.scalar(1))


def test_assemble_is_inverse_of_split():
    T = HalfIntegralMatrix(((4, 1, 0), (1, 2, 1), (0, 1, 2)))
    assert assemble_block(*block_split(T)) == T
    with pytest.raises(PreconditionError):
        block_split(HalfIntegralMatrix.scalar(3))


@pytest.mark.parametrize("ell", [1, 2, 3, 5])
@pytest.mark.parametrize("mu", [(0, 0), (1, 0), (0, 1), (1, 1), (2, 1)])
def test_block_discriminant_identity(ell, mu):
    lhs, rhs = block_discriminant_identity(ell, mu, A2)
    assert lhs == rhs


# ---------- T^{-1}[μ/2] ----------


def test_mu_value_scalar():
    T = HalfIntegralMatrix.scalar(5)
    assert mu_value(T, (1,)) == Fraction(1, 20)
    assert mu_denominator(T, (1,)) == 20
    assert max_mu_denominator(T) == 20
    assert is_primitive_mu(T, (1,))
    assert not is_primitive_mu(T, (2,))


def test_mu_value_a2():
    assert mu_value(A2, (1, 0)) == Fraction(1, 3)
    assert max_mu_denominator(A2) == 3


def _small_fundamental(max_disc: int):
    for t in range(1, max_disc + 1):
        T = HalfIntegralMatrix.scalar(t)
        if is_fundamental(T):
            yield T
    for a, b, c in itertools.product(range(1, 6), range(-3, 4), range(1, 6)):
        T = HalfIntegralMatrix(((2 * a, b), (b, 2 * c)))
        if is_positive_definite(T) and is_fundamental(T) and discriminant(T) <= max_disc:
            yield T
    for a, c in itertools.product(range(1, 6), range(1, 4)):
        for r0, r1 in itertools.product(range(-1, 2), repeat=2):
            T = HalfIntegralMatrix(((2 * a, r0, r1), (r0, 2 * c, 1), (r1, 1, 2)))
            if is_positive_definite(T) and is_fundamental(T) and discriminant(T) <= max_disc:
                yield T


def _check_denominators(T: HalfIntegralMatrix) -> None:
    D = max_mu_denominator(T)
    dens = [mu_denominator(T, mu) for mu in cosets(T)]
    assert all(D % q == 0 for q in dens)
    assert max(dens) == D


def test_denominator_bound_small():
    for T in [HalfIntegralMatrix.scalar(3), A2, D15]:
        _check_denominators(T)
    assert mu_denominator(HalfIntegralMatrix.scalar(7), (1,)) == 28


@pytest.mark.slow
def test_denominator_bound_sweep():
    seen = 0
    for T in _small_fundamental(100):
        _check_denominators(T)
        seen += 1
    assert seen > 50


# ---------- смежные классы ----------


@pytest.mark.parametrize("p", [2, 3, 5, 7])
def test_cosets_scalar(p):
    T = HalfIntegralMatrix.scalar(p)
    assert cosets(T) == [(x,) for x in range(2 * p)]


def test_cosets_a2_representatives():
    reps = cosets(A2)
    assert reps == [(0, 0), (0, 1), (0, 2)]
    assert reduce_mod(A2, (1, 0)) == (0, 1)
    # столбцы gram лежат в решётке
    assert reduce_mod(A2, (2, 1)) == (0, 0)
    assert same_coset(A2, (1, 0), (0, 1))
    assert not same_coset(A2, (0, 1), (0, 2))


def test_cosets_cover_every_class_once():
    for T in [I2, A2, D15, I3]:
        reps = cosets(T)
        assert len(reps) == abs(int(discriminant(T) * (2 if T.n % 2 else 1)))
        box = itertools.product(range(-3, 4), repeat=T.n)
        assert {reduce_mod(T, x) for x in box} <= set(reps)


def test_cosets_need_positive_definite():
    with pytest.raises(PreconditionError):
        cosets(HalfIntegralMatrix(((2, 3), (3, 2))))


def test_invariant_factors():
    assert invariant_factors(A2) == (1, 3)
    assert invariant_factors(HalfIntegralMatrix.scalar(3)) == (6,)
    assert invariant_factors(HalfIntegralMatrix(((2, 0), (0, 6)))) == (2, 6)
    assert invariant_factors(I3) == (2, 2, 2)
    with pytest.raises(PreconditionError):
        invariant_factors(HalfIntegralMatrix(((2, 2), (2, 2))))


@pytest.mark.parametrize(
    "gram",
    [
        ((2, 1), (1, 8)),
        ((4, 2), (2, 6)),
        ((4, 1, 0), (1, 2, 1), (0, 1, 2)),
        ((6, 3, 1), (3, 4, 0), (1, 0, 8)),
    ],
)
def test_cosets_count_matches_smith_form(gram):
    T = HalfIntegralMatrix(gram)
    factors = invariant_factors(T)
    assert all(b % a == 0 for a, b in zip(factors, factors[1:]))
    assert len(cosets(T)) == abs(det_gram(T)) == int(np.prod(factors))
    # представители канонические
    assert all(reduce_mod(T, mu) == mu for mu in cosets(T))


# ---------- кратчайший представитель класса ----------


def _excess_by_box(T, mu, radius=4):
    box = itertools.product(range(-radius, radius + 1), repeat=T.n)
    return max(-(sum(a * b for a, b in zip(x, mu)) + evaluate(T, x)) for x in box)


def test_coset_excess_scalar_three():
    T = HalfIntegralMatrix.scalar(3)
    # 5 ≡ -1 mod 6: 25/12 - 1/12 = 2
    assert coset_excess(T, (5,)) == 2
    assert coset_excess(T, (1,)) == 0
    assert coset_excess(T, (3,)) == 0
    assert coset_excess(T, (0,)) == 0


@pytest.mark.parametrize(
    "T", [A2, D15, I3, HalfIntegralMatrix(((2, 1), (1, 18))), HalfIntegralMatrix.scalar(9)], ids=str
)
def test_coset_excess_matches_box_search(T):
    for mu in cosets(T):
        assert coset_excess(T, mu) == _excess_by_box(T, mu), mu


def test_coset_excess_needs_positive_definite():
    with pytest.raises(PreconditionError):
        coset_excess(HalfIntegralMatrix(((2, 3), (3, 2))), (0, 1))


# ---------- локальная нормализация ----------


def test_local_normalize_a2():
    U = local_normalize_odd(A2, 3, 3)
    assert U.det == 1
    assert is_locally_normalized(A2, U, 3, 3)


def test_local_normalize_already_diagonal():
    T = HalfIntegralMatrix(((2, 0), (0, 6)))
    U = local_normalize_odd(T, 3, 2)
    assert U.entries == ((1, 0), (0, 1))


def test_local_normalize_d15():
    U = local_normalize_odd(D15, 5, 2)
    assert is_locally_normalized(D15, U, 5, 2)
    assert local_normalize_odd(D15, 3, 2).det == 1


def test_local_normalize_size3():
    T = HalfIntegralMatrix(((4, 1, 0), (1, 2, 1), (0, 1, 2)))  # d = 5
    U = local_normalize_odd(T, 5, 3)
    assert is_locally_normalized(T, U, 5, 3)


def test_local_normalize_rejections():
    with pytest.raises(UnsupportedCaseError):
        local_normalize_odd(A2, 2, 2)
    with pytest.raises(UnsupportedCaseError):
        local_normalize_odd(HalfIntegralMatrix(((2, 0), (0, 18))), 3, 2)
    with pytest.raises(PreconditionError):
        local_normalize_odd(A2, 5, 2)  # 5 не делит det
    with pytest.raises(PreconditionError):
        local_normalize_odd(A2, 3, 1)


def test_local_normalize_all_primes_crt():
    ln = local_normalize(D15, f=2)
    assert set(ln.per_prime) == {3, 5}
    assert ln.modulus == 9 * 25
    for p in (3, 5):
        assert is_locally_normalized(D15, ln.combined, p, 2)
    assert ln.combined != ((1, 0), (0, 1))
    assert UnimodularMatrix(ln.combined).det == 1


def _binary_fundamental_grams():
    for a in range(1, 12):
        for c in range(1, 12):
            for b in range(-6, 7):
                T = HalfIntegralMatrix(((2 * a, b), (b, 2 * c)))
                if is_positive_definite(T) and is_fundamental(T):
                    yield T


def test_local_normalize_lands_in_sl2_for_binary_forms():
    grams = list(_binary_fundamental_grams())
    assert HalfIntegralMatrix(((6, -3), (-3, 2))) in grams
    assert HalfIntegralMatrix(((6, -3), (-3, 4))) in grams
    for T in grams:
        ln = local_normalize(T)
        assert UnimodularMatrix(ln.combined).det == 1, T
        for p, U in ln.per_prime.items():
            q = p * p
            assert is_locally_normalized(T, ln.combined, p, 2), (T, p)
            assert all(
                (x - y) % q == 0 for row, urow in zip(ln.combined, U.entries) for x, y in zip(row, urow)
            ), (T, p)


def test_local_normalize_size3_in_sl3():
    T = HalfIntegralMatrix(((4, 1, 0), (1, 2, 1), (0, 1, 2)))
    ln = local_normalize(T, f=3)
    assert UnimodularMatrix(ln.combined).det == 1
    assert is_locally_normalized(T, ln.combined, 5, 3)


@pytest.mark.parametrize(
    "entries",
    [
        ((1, 0), (0, 1)),
        ((-1, 0), (0, -1)),
        ((0, 1), (-1, 0)),
        ((2, 3), (1, 2)),
        ((5, -7), (-2, 3)),
        ((0, 0, 1), (0, -1, 0), (1, 0, 0)),
        ((2, 1, 0), (3, 2, 4), (0, 0, 1)),
    ],
)
def test_transvection_word_reproduces_matrix(entries):
    U = UnimodularMatrix(entries)
    n = U.n
    out = np.eye(n, dtype=object)
    for i, j, c in transvection_word(U):
        E = np.eye(n, dtype=object)
        E[i, j] = c
        out = out.dot(E)
    assert tuple(tuple(int(v) for v in row) for row in out) == U.entries


def test_transvection_word_needs_det_one():
    with pytest.raises(PreconditionError):
        transvection_word(UnimodularMatrix(((0, 1), (1, 0))))
