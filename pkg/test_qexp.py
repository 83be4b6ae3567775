# test_qexp.py
from fractions import Fraction

import pytest

from exactarith import CycNumber, root_of_unity
from qexp import (
    QExpansion,
    from_terms,
    odd_squarefree_support,
    rescale_down,
    sieve_chain,
    sieve_coprime,
    sieve_relation_check,
)
from synthetic import sieve_fixtures
from utils import PreconditionError

# ---------- QExpansion ----------


def test_zero_coefficients_are_dropped():
    f = from_terms({1: 1, 2: 0, 3: Fraction(-1, 2)}, bound=5)
    assert f.support() == [1, 3]
    assert f.coefficient(2) == 0
    assert f.coefficient(3) == Fraction(-1, 2)


def test_rational_cyclotomic_coefficient_becomes_fraction():
    f = QExpansion(Fraction(0), {0: CycNumber.from_rational(3, 5)}, bound=1)
    assert isinstance(f.coefficient(0), Fraction)
    g = QExpansion(Fraction(0), {0: root_of_unity(1, 3)}, bound=1)
    assert isinstance(g.coefficient(0), CycNumber)


def test_truncation_is_enforced():
    f = from_terms({1: 1}, bound=3)
    with pytest.raises(PreconditionError):
        f.coefficient(3)
    with pytest.raises(PreconditionError):
        QExpansion(Fraction(0), {5: Fraction(1)}, bound=3)
    with pytest.raises(PreconditionError):
        QExpansion(Fraction(0), {}, bound=0, level=0)


def test_addition_uses_smaller_bound():
    f = from_terms({1: 1, 4: 2}, bound=6)
    g = from_terms({1: -1, 2: 5}, bound=3)
    s = f + g
    assert s.bound == 3
    assert s.coeffs == {2: Fraction(5)}
    with pytest.raises(PreconditionError):
        f + QExpansion(Fraction(1, 4), {}, bound=6)


def test_scale_exponents_and_shift():
    f = QExpansion(Fraction(-1, 4), {1: Fraction(2)}, bound=3)
    g = f.scale_exponents(4)
    assert g.offset == -1
    assert g.coeffs == {4: Fraction(2)}
    assert g.bound == 9
    h = g.integral_shift()
    assert h.offset == 0
    assert h.coeffs == {3: Fraction(2)}
    with pytest.raises(PreconditionError):
        f.integral_shift()


def test_scale_multiplies_coefficients():
    f = from_terms({1: 2, 3: -1}, bound=4)
    assert f.scale(Fraction(1, 2)).coeffs == {1: Fraction(1), 3: Fraction(-1, 2)}


# ---------- sieve / rescale ----------


def test_sieve_coprime_removes_multiples():
    f = from_terms({1: 1, 3: 1, 5: 1}, bound=6)
    g = sieve_coprime(f, 3)
    assert g.coeffs == {1: Fraction(1), 5: Fraction(1)}
    assert g.level == 9


def test_rescale_down():
    f = from_terms({3: 1, 6: 1}, bound=7, level=36)
    g = rescale_down(f, 3)
    assert g.coeffs == {1: Fraction(1), 2: Fraction(1)}
    assert g.level == 12
    assert g.character.endswith("*eps:3")
    assert g.bound == 3


def test_rescale_down_rejections():
    with pytest.raises(PreconditionError):
        rescale_down(from_terms({1: 1, 2: 1}, level=36), 3)
    with pytest.raises(PreconditionError):
        rescale_down(from_terms({3: 1}, level=4), 3)
    with pytest.raises(PreconditionError, match="odd prime"):
        rescale_down(from_terms({2: 1, 4: 1}, level=8), 2)
    with pytest.raises(PreconditionError):
        sieve_coprime(from_terms({3: 1}), 4)
    with pytest.raises(PreconditionError):
        sieve_coprime(QExpansion(Fraction(1, 2), {0: Fraction(1)}, bound=1), 3)


def test_sieve_chain_picks_sieve_branch():
    f = from_terms({1: 1, 3: 1, 9: 1}, bound=10)
    res = sieve_chain(f, [3])
    assert [s.branch for s in res.steps] == ["sieve"]
    assert res.expansion.coeffs == {1: Fraction(1)}
    assert res.ell == 1


def test_sieve_chain_never_rescales_at_two():
    f = from_terms({2: 1, 4: 3}, bound=5, level=8)
    res = sieve_chain(f, [2])
    assert [s.branch for s in res.steps] == ["sieve"]
    assert res.expansion.is_zero()
    assert res.ell == 1
    assert res.steps[-1].level == 32


def test_sieve_chain_picks_rescale_branch():
    f = from_terms({3: 1, 9: 1}, bound=10, level=9)
    res = sieve_chain(f, [3])
    assert [s.branch for s in res.steps] == ["rescale"]
    assert res.expansion.coeffs == {1: Fraction(1), 3: Fraction(1)}
    assert res.ell == 3
    assert sieve_relation_check(f, res)


@pytest.mark.parametrize("fx", sieve_fixtures(), ids=lambda fx: fx.name)
def test_sieve_fixtures(fx):
    res = sieve_chain(fx.expansion, fx.primes)
    assert tuple(s.branch for s in res.steps) == fx.branches
    assert res.expansion.coeffs == fx.result
    assert res.ell == fx.ell
    assert sieve_relation_check(fx.expansion, res)


def test_sieve_fixture_levels():
    by_name = {fx.name: fx for fx in sieve_fixtures()}
    res = sieve_chain(by_name["rescale-then-sieve"].expansion, (3, 5))
    assert [s.level for s in res.steps] == [12, 300]
    res = sieve_chain(by_name["double-rescale"].expansion, (3, 3, 5))
    assert [s.level for s in res.steps] == [12, 4, 100]
    assert res.steps[-1].character.count("eps:3") == 2


def test_relation_check_catches_tampering():
    fx = sieve_fixtures()[0]
    res = sieve_chain(fx.expansion, fx.primes)
    bad = type(res)(res.expansion.with_meta(coeffs={1: Fraction(5), 3: Fraction(2)}), res.steps, res.ell)
    assert not sieve_relation_check(fx.expansion, bad)


# ---------- нечётный бесквадратный носитель ----------


def test_odd_squarefree_support():
    assert odd_squarefree_support(from_terms({2: 1, 4: 1})) == []
    assert odd_squarefree_support(from_terms({3: 1, 9: 1, 15: 1})) == [3, 15]
    assert odd_squarefree_support(from_terms({3: 1, 15: 1, 35: 1}), coprime_to=3) == [35]
    assert odd_squarefree_support(from_terms({0: 1, 1: 1})) == [1]
