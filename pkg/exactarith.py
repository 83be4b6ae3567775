# exactarith.py — точная арифметика в круговых полях Q(ζ_m) + вложение в C
"""
Элемент Q(ζ_m) хранится вектором рациональных координат в базисе
1, ζ_m, …, ζ_m^{φ(m)-1} после редукции по m-му круговому многочлену.
Равенство — сравнение векторов на общем порядке lcm(m1, m2).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Iterable, Mapping, Sequence, Tuple, Union

import mpmath
from sympy import Poly, QQ, cyclotomic_poly, symbols, totient

from utils import ArithmeticDomainError, BranchCutError

Rational = Union[int, Fraction]

_X = symbols("x")


# ---- Таблицы редукции ---------------------------------------------------------


@lru_cache(maxsize=None)
def phi(m: int) -> int:
    return int(totient(m))


@lru_cache(maxsize=None)
def _cyclotomic_coeffs(m: int) -> Tuple[int, ...]:
    """Коэффициенты Φ_m от младшего к старшему (многочлен монический)."""
    poly = Poly(cyclotomic_poly(m, _X), _X)
    return tuple(int(c) for c in reversed(poly.all_coeffs()))


@lru_cache(maxsize=None)
def _power_table(m: int) -> Tuple[Tuple[int, ...], ...]:
    """x^k mod Φ_m для k = 0..m-1 (целые векторы длины φ(m))."""
    deg = phi(m)
    cyc = _cyclotomic_coeffs(m)
    rows = []
    cur = [0] * deg
    cur[0] = 1
    for _ in range(m):
        rows.append(tuple(cur))
        # умножаем на x и заменяем x^deg = -(c_0 + ... + c_{deg-1} x^{deg-1})
        top = cur[-1]
        nxt = [0] + cur[:-1]
        if top:
            for j in range(deg):
                nxt[j] -= top * cyc[j]
        cur = nxt
    return tuple(rows)


def _reduce_raw(m: int, raw: Sequence[int]) -> list[int]:
    """Σ raw[k] ζ^k (k любые, берутся по модулю m) -> координаты в базисе."""
    deg = phi(m)
    table = _power_table(m)
    out = [0] * deg
    for k, c in enumerate(raw):
        if not c:
            continue
        row = table[k % m]
        for j in range(deg):
            if row[j]:
                out[j] += c * row[j]
    return out


def mul_int_vectors(m: int, x: Sequence[int], y: Sequence[int]) -> list[int]:
    """Произведение в Z[ζ_m] для целых координатных векторов."""
    raw = [0] * (len(x) + len(y) - 1)
    for i, a in enumerate(x):
        if a:
            for j, b in enumerate(y):
                if b:
                    raw[i + j] += a * b
    return _reduce_raw(m, raw)


def _as_fraction(x: Rational) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


# ---- CycNumber ------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class CycNumber:
    order: int
    coeffs: Tuple[Fraction, ...]

    def __post_init__(self) -> None:
        if self.order < 1:
            raise ValueError(f"order must be positive, got {self.order}")
        if len(self.coeffs) != phi(self.order):
            raise ValueError(
                f"expected {phi(self.order)} coordinates for order {self.order}, "
                f"got {len(self.coeffs)}"
            )

    # --- конструкторы ---

    @classmethod
    def from_rational(cls, q: Rational, order: int = 1) -> "CycNumber":
        coeffs = [Fraction(0)] * phi(order)
        coeffs[0] = _as_fraction(q)
        return cls(order, tuple(coeffs))

    @classmethod
    def zero(cls, order: int = 1) -> "CycNumber":
        return cls.from_rational(0, order)

    @classmethod
    def from_exponents(
        cls, order: int, counts: Mapping[int, Rational] | Sequence[Rational]
    ) -> "CycNumber":
        """Σ counts[k]·ζ_order^k — одна редукция на всю сумму."""
        items = counts.items() if isinstance(counts, Mapping) else enumerate(counts)
        num = [Fraction(0)] * order
        for k, c in items:
            if c:
                num[k % order] += _as_fraction(c)
        den = 1
        for c in num:
            den = den * c.denominator // gcd(den, c.denominator)
        raw = [int(c * den) for c in num]
        red = _reduce_raw(order, raw)
        return cls(order, tuple(Fraction(c, den) for c in red))

    # --- представления ---

    def int_form(self) -> Tuple[Tuple[int, ...], int]:
        """(целые координаты, общий знаменатель)."""
        den = 1
        for c in self.coeffs:
            den = den * c.denominator // gcd(den, c.denominator)
        return tuple(int(c * den) for c in self.coeffs), den

    def lift(self, order: int) -> "CycNumber":
        if order == self.order:
            return self
        if order % self.order:
            raise ValueError(f"cannot lift order {self.order} to {order}")
        step = order // self.order
        raw: dict[int, Fraction] = {}
        for j, c in enumerate(self.coeffs):
            if c:
                raw[j * step] = c
        return CycNumber.from_exponents(order, raw)

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def is_rational(self) -> bool:
        return not any(self.coeffs[1:])

    def as_rational(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return self.coeffs[0]

    # --- арифметика ---

    def _coerce(self, other: "CycNumber | Rational") -> "CycNumber":
        if isinstance(other, CycNumber):
            return other
        if isinstance(other, (int, Fraction)):
            return CycNumber.from_rational(other)
        return NotImplemented  # type: ignore[return-value]

    @staticmethod
    def _common(x: "CycNumber", y: "CycNumber") -> Tuple["CycNumber", "CycNumber"]:
        if x.order == y.order:
            return x, y
        m = x.order * y.order // gcd(x.order, y.order)
        return x.lift(m), y.lift(m)

    def __add__(self, other: "CycNumber | Rational") -> "CycNumber":
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        x, y = self._common(self, o)
        return CycNumber(x.order, tuple(a + b for a, b in zip(x.coeffs, y.coeffs)))

    __radd__ = __add__

    def __neg__(self) -> "CycNumber":
        return CycNumber(self.order, tuple(-c for c in self.coeffs))

    def __sub__(self, other: "CycNumber | Rational") -> "CycNumber":
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other: Rational) -> "CycNumber":
        return (-self) + other

    def __mul__(self, other: "CycNumber | Rational") -> "CycNumber":
        if isinstance(other, (int, Fraction)):
            q = _as_fraction(other)
            return CycNumber(self.order, tuple(c * q for c in self.coeffs))
        if not isinstance(other, CycNumber):
            return NotImplemented
        x, y = self._common(self, other)
        xi, xd = x.int_form()
        yi, yd = y.int_form()
        red = mul_int_vectors(x.order, xi, yi)
        den = xd * yd
        return CycNumber(x.order, tuple(Fraction(c, den) for c in red))

    __rmul__ = __mul__

    def inv(self) -> "CycNumber":
        if self.is_zero():
            raise ArithmeticDomainError("inverse of zero in a cyclotomic field")
        if self.is_rational():
            return CycNumber.from_rational(1 / self.coeffs[0], self.order)
        # расширенный алгоритм Евклида по модулю Φ_m над Q
        f = Poly(list(reversed(self.coeffs)), _X, domain=QQ)
        g = Poly(list(reversed(_cyclotomic_coeffs(self.order))), _X, domain=QQ)
        h = f.invert(g)
        low = list(reversed(h.all_coeffs()))
        out = [Fraction(0)] * phi(self.order)
        for j, c in enumerate(low):
            out[j] = Fraction(int(c.p), int(c.q))
        return CycNumber(self.order, tuple(out))

    def __truediv__(self, other: "CycNumber | Rational") -> "CycNumber":
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ArithmeticDomainError("division by zero")
            return self * (1 / _as_fraction(other))
        return self * other.inv()

    def __pow__(self, k: int) -> "CycNumber":
        if k < 0:
            return self.inv() ** (-k)
        out = CycNumber.from_rational(1, self.order)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def conj(self) -> "CycNumber":
        """Комплексное сопряжение: ζ -> ζ^{-1}."""
        return CycNumber.from_exponents(
            self.order, {(-j) % self.order: c for j, c in enumerate(self.coeffs) if c}
        )

    def norm_squared(self) -> "CycNumber":
        return self * self.conj()

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            return self.is_rational() and self.coeffs[0] == other
        if not isinstance(other, CycNumber):
            return NotImplemented
        x, y = self._common(self, other)
        return x.coeffs == y.coeffs

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return f"CycNumber({self})"

    def __str__(self) -> str:
        parts: list[str] = []
        for j, c in enumerate(self.coeffs):
            if not c:
                continue
            mag = abs(c)
            txt = str(mag.numerator) if mag.denominator == 1 else f"{mag.numerator}/{mag.denominator}"
            if j == 0:
                term = txt
            else:
                z = f"z{self.order}" if j == 1 else f"z{self.order}^{j}"
                term = z if mag == 1 else f"{txt}*{z}"
            parts.append(("-" if c < 0 else "+") + term)
        if not parts:
            return "0"
        head = parts[0]
        out = ("-" if head[0] == "-" else "") + head[1:]
        for p in parts[1:]:
            out += f" {p[0]} {p[1:]}"
        return out


def root_of_unity(num: int, den: int) -> CycNumber:
    """exp(2πi·num/den) как канонический элемент; порядок делит den."""
    if den < 1:
        raise ValueError(f"den must be positive, got {den}")
    g = gcd(num, den)
    order = den // g
    k = (num // g) % order
    return CycNumber(order, tuple(Fraction(c) for c in _power_table(order)[k]))


def cyc_sum(values: Iterable[CycNumber], order: int = 1) -> CycNumber:
    out = CycNumber.zero(order)
    for v in values:
        out = out + v
    return out


# ---- Комплексные приближения -----------------------------------------------------

_ULP = 2.0**-53


@dataclass(frozen=True)
class ComplexApprox:
    re: float
    im: float
    err_bound: float = 0.0

    def __post_init__(self) -> None:
        if not math.isfinite(self.err_bound) or self.err_bound < 0:
            raise ValueError(f"bad error bound {self.err_bound}")

    @classmethod
    def exact(cls, z: complex, err: float = 0.0) -> "ComplexApprox":
        z = complex(z)
        return cls(z.real, z.imag, err)

    @property
    def value(self) -> complex:
        return complex(self.re, self.im)

    def __abs__(self) -> float:
        return abs(self.value)

    def _rounding(self, z: complex) -> float:
        return abs(z) * 2 * _ULP

    def __add__(self, other: "ComplexApprox") -> "ComplexApprox":
        z = self.value + other.value
        return ComplexApprox.exact(z, self.err_bound + other.err_bound + self._rounding(z))

    def __sub__(self, other: "ComplexApprox") -> "ComplexApprox":
        z = self.value - other.value
        return ComplexApprox.exact(z, self.err_bound + other.err_bound + self._rounding(z))

    def __mul__(self, other: "ComplexApprox | complex | float") -> "ComplexApprox":
        if not isinstance(other, ComplexApprox):
            other = ComplexApprox.exact(complex(other))
        z = self.value * other.value
        err = (
            abs(self) * other.err_bound
            + abs(other) * self.err_bound
            + self.err_bound * other.err_bound
            + self._rounding(z)
        )
        return ComplexApprox.exact(z, err)

    __rmul__ = __mul__

    def conj(self) -> "ComplexApprox":
        return ComplexApprox(self.re, -self.im, self.err_bound)

    def close_to(self, other: "ComplexApprox", tol: float) -> bool:
        return abs(self.value - other.value) <= tol + self.err_bound + other.err_bound


def embed(x: CycNumber, precision: int = 53) -> ComplexApprox:
    """Главное вложение ζ_m -> e^{2πi/m}; |результат - истина| <= err_bound."""
    if precision < 53:
        raise ValueError("precision must be at least 53 bits")
    with mpmath.workprec(precision):
        total = mpmath.mpc(0)
        for j, c in enumerate(x.coeffs):
            if c:
                term = mpmath.mpf(c.numerator) / c.denominator
                total += term * mpmath.expjpi(mpmath.mpf(2 * j) / x.order)
        re, im = float(total.real), float(total.imag)
    weight = sum(abs(float(c)) for c in x.coeffs)
    err = weight * (len(x.coeffs) + 2) * 2.0 ** (1 - precision)
    err += (abs(re) + abs(im)) * _ULP
    return ComplexApprox(re, im, err)


def principal_sqrt(z: ComplexApprox) -> ComplexApprox:
    """Главная ветвь: Re(√z) >= 0, разрез по отрицательной полуоси."""
    if z.re <= z.err_bound and abs(z.im) <= z.err_bound:
        raise BranchCutError(f"{z.value} is within {z.err_bound} of the branch cut")
    w = complex(mpmath.sqrt(mpmath.mpc(z.re, z.im)))
    # |√a - √b| = |a-b|/|√a+√b|; обе ветви в правой полуплоскости
    radius = max(abs(z) - z.err_bound, 0.0)
    prop = z.err_bound / math.sqrt(radius) if radius > 0 else math.sqrt(z.err_bound)
    return ComplexApprox.exact(w, prop + abs(w) * 2 * _ULP)
