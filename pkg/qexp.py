# qexp.py — формальные q-разложения со сдвигом показателя и учётом уровня/характера
from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Dict, List, Optional, Sequence, Union

from sympy import isprime

from exactarith import CycNumber
from utils import PreconditionError, is_odd_squarefree

Coefficient = Union[Fraction, CycNumber]


def _is_zero(c: Coefficient) -> bool:
    return c.is_zero() if isinstance(c, CycNumber) else c == 0


def normalize_coefficient(c: Coefficient | int) -> Coefficient:
    """Рациональный CycNumber -> Fraction; int -> Fraction."""
    if isinstance(c, CycNumber):
        return c.as_rational() if c.is_rational() else c
    return Fraction(c)


@dataclass(frozen=True)
class QExpansion:
    """
    Σ_{0 <= ℓ < bound} coeffs[ℓ]·q^{ℓ + offset}.
    weight2 — удвоенный вес; level, character — только учёт, модулярность не проверяется.
    """

    offset: Fraction = Fraction(0)
    coeffs: Dict[int, Coefficient] = field(default_factory=dict)
    bound: int = 0
    weight2: int = 0
    level: int = 1
    character: str = "trivial:1"

    def __post_init__(self) -> None:
        object.__setattr__(self, "offset", Fraction(self.offset))
        if self.bound < 0:
            raise PreconditionError(f"bound must be nonnegative, got {self.bound}")
        if self.level < 1:
            raise PreconditionError(f"level must be positive, got {self.level}")
        clean: Dict[int, Coefficient] = {}
        for ell, c in sorted(self.coeffs.items()):
            if ell < 0 or ell >= self.bound:
                raise PreconditionError(f"exponent index {ell} outside [0, {self.bound})")
            c = normalize_coefficient(c)
            if not _is_zero(c):
                clean[ell] = c
        object.__setattr__(self, "coeffs", clean)

    # --- чтение ---

    def coefficient(self, ell: int) -> Coefficient:
        if ell < 0 or ell >= self.bound:
            raise PreconditionError(f"coefficient {ell} is beyond the truncation {self.bound}")
        return self.coeffs.get(ell, Fraction(0))

    def support(self) -> List[int]:
        return sorted(self.coeffs)

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_integral(self) -> bool:
        return self.offset.denominator == 1

    def with_meta(self, **changes: object) -> "QExpansion":
        return dataclasses.replace(self, **changes)  # type: ignore[arg-type]

    # --- арифметика ---

    def __add__(self, other: "QExpansion") -> "QExpansion":
        if self.offset != other.offset:
            raise PreconditionError(f"offsets differ: {self.offset} vs {other.offset}")
        bound = min(self.bound, other.bound)
        out: Dict[int, Coefficient] = {}
        for src in (self.coeffs, other.coeffs):
            for ell, c in src.items():
                if ell < bound:
                    out[ell] = out[ell] + c if ell in out else c  # type: ignore[operator]
        return dataclasses.replace(self, coeffs=out, bound=bound)

    def scale(self, c: Fraction | int | CycNumber) -> "QExpansion":
        return dataclasses.replace(self, coeffs={k: v * c for k, v in self.coeffs.items()})  # type: ignore[operator]

    def scale_exponents(self, k: int) -> "QExpansion":
        """f(kτ): показатели и сдвиг умножаются на k."""
        if k < 1:
            raise PreconditionError(f"scale factor must be positive, got {k}")
        bound = (self.bound - 1) * k + 1 if self.bound else 0
        return dataclasses.replace(
            self,
            offset=self.offset * k,
            coeffs={ell * k: c for ell, c in self.coeffs.items()},
            bound=bound,
        )

    def integral_shift(self) -> "QExpansion":
        """Целый сдвиг переносится в индексы: offset 0, показатель = ℓ + offset."""
        if not self.is_integral():
            raise PreconditionError(f"offset {self.offset} is not an integer")
        s = int(self.offset)
        if s == 0:
            return self
        coeffs = {ell + s: c for ell, c in self.coeffs.items()}
        if any(e < 0 for e in coeffs):
            raise PreconditionError("negative exponent after shift")
        return dataclasses.replace(self, offset=Fraction(0), coeffs=coeffs, bound=max(self.bound + s, 0))


def from_terms(terms: Dict[int, Fraction | int], bound: Optional[int] = None, **meta: object) -> QExpansion:
    """Удобный конструктор целого q-ряда: {n: a_n}."""
    b = bound if bound is not None else (max(terms) + 1 if terms else 0)
    return QExpansion(Fraction(0), {n: Fraction(c) for n, c in terms.items()}, b, **meta)  # type: ignore[arg-type]


# ---- Операторы просеивания -------------------------------------------------------


def _require_prime(p: int) -> None:
    if p < 2 or not isprime(p):
        raise PreconditionError(f"{p} is not a prime")


def _require_integral(f: QExpansion) -> None:
    if f.offset != 0:
        raise PreconditionError(f"expected integer exponents, got offset {f.offset}")


def sieve_coprime(f: QExpansion, p: int) -> QExpansion:
    """Σ_{(n,p)=1} a_f(n) q^n; уровень умножается на p²."""
    _require_integral(f)
    _require_prime(p)
    kept = {n: c for n, c in f.coeffs.items() if n % p}
    return dataclasses.replace(f, coeffs=kept, level=f.level * p * p)


def rescale_down(f: QExpansion, p: int) -> QExpansion:
    """f(τ/p): все показатели делятся на p; уровень / p, характер · ε_p."""
    _require_integral(f)
    _require_prime(p)
    if p == 2:
        raise PreconditionError("rescale_down needs an odd prime: eps_p is defined for odd p only")
    bad = [n for n in f.coeffs if n % p]
    if bad:
        raise PreconditionError(f"exponent {bad[0]} is not divisible by {p}")
    if f.level % p:
        raise PreconditionError(f"{p} does not divide the level {f.level}")
    bound = -(-f.bound // p)
    return dataclasses.replace(
        f,
        coeffs={n // p: c for n, c in f.coeffs.items()},
        bound=bound,
        level=f.level // p,
        character=f"{f.character}*eps:{p}",
    )


@dataclass(frozen=True)
class SieveStep:
    prime: int
    branch: str  # "sieve" | "rescale"
    level: int
    character: str
    ell: int  # накопленный множитель: a_g(n) = a_{g0}(ell·n)


@dataclass(frozen=True)
class SieveResult:
    expansion: QExpansion
    steps: List[SieveStep]
    ell: int


def sieve_chain(f: QExpansion, primes: Sequence[int]) -> SieveResult:
    """
    По каждому p: rescale_down, если p нечётно и все выжившие показатели делятся на p
    (и разложение ненулевое), иначе sieve_coprime.
    """
    _require_integral(f)
    g, ell = f, 1
    steps: List[SieveStep] = []
    for p in primes:
        if p != 2 and g.coeffs and all(n % p == 0 for n in g.coeffs):
            g = rescale_down(g, p)
            ell *= p
            branch = "rescale"
        else:
            g = sieve_coprime(g, p)
            branch = "sieve"
        steps.append(SieveStep(p, branch, g.level, g.character, ell))
    return SieveResult(g, steps, ell)


def sieve_relation_check(f0: QExpansion, result: SieveResult) -> bool:
    """a_{g_t}(n) ∈ {0, a_{g0}(ℓn)}, и ноль только там, где n отсеян."""
    g, ell = result.expansion, result.ell
    for n in range(g.bound):
        m = ell * n
        if m >= f0.bound:
            break
        a_g, a_f = g.coefficient(n), f0.coefficient(m)
        killed = any(_killed_by(step, n, result) for step in result.steps if step.branch == "sieve")
        if killed:
            if not _is_zero(a_g):
                return False
        elif a_g != a_f:
            return False
    return True


def _killed_by(step: SieveStep, n: int, result: SieveResult) -> bool:
    # показатель текущего шага = (ℓ_итог / ℓ_шага)·n
    scale = result.ell // step.ell
    return (scale * n) % step.prime == 0


def odd_squarefree_support(f: QExpansion, coprime_to: int = 1) -> List[int]:
    """Показатели n с a_f(n) ≠ 0, n нечётно, бесквадратно и (n, coprime_to) = 1."""
    _require_integral(f)
    return [n for n in f.support() if n > 0 and is_odd_squarefree(n) and gcd(n, coprime_to) == 1]
