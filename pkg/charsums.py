# charsums.py — характеры Дирихле и обобщённые квадратичные суммы Гаусса
"""
Характер mod N хранится «углами» на фиксированных образующих (Z/N)^x:
χ(g_k) = exp(2πi·angle_k). Разложение — по КТО на примарные компоненты:
  p^e (p нечётно) — первообразный корень;
  4 — образующая -1;
  2^e, e >= 3 — образующие -1 и 5.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Callable, Dict, Optional, Tuple

from sympy import factorint, jacobi_symbol, primitive_root

from exactarith import ComplexApprox, CycNumber, root_of_unity
from utils import (
    FormatError,
    PreconditionError,
    divisors,
    inverse_mod,
    require_odd_prime,
    units,
)

# ---- Строение (Z/N)^x --------------------------------------------------------------


@dataclass(frozen=True)
class _Component:
    q: int  # примарный модуль
    gens: Tuple[int, ...]  # образующие по модулю q
    orders: Tuple[int, ...]
    log: Dict[int, Tuple[int, ...]]  # вычет mod q -> показатели


def _component(p: int, e: int) -> _Component:
    q = p**e
    if p != 2:
        gens: Tuple[int, ...] = (int(primitive_root(q)),)
        orders: Tuple[int, ...] = (q - q // p,)
    elif e == 1:
        gens, orders = (), ()
    elif e == 2:
        gens, orders = (q - 1,), (2,)
    else:
        gens, orders = (q - 1, 5), (2, q // 4)
    log: Dict[int, Tuple[int, ...]] = {}
    for exps in itertools.product(*(range(o) for o in orders)):
        v = 1
        for g, k in zip(gens, exps):
            v = v * pow(g, k, q) % q
        log[v % q] = exps
    return _Component(q, gens, orders, log)


@lru_cache(maxsize=None)
def _structure(N: int) -> Tuple[_Component, ...]:
    return tuple(_component(p, e) for p, e in sorted(factorint(N).items()))


@lru_cache(maxsize=None)
def generators(N: int) -> Tuple[Tuple[int, int], ...]:
    """Глобальные образующие (g mod N, порядок) в фиксированном порядке."""
    out = []
    for comp in _structure(N):
        rest = N // comp.q
        for g, o in zip(comp.gens, comp.orders):
            # g mod q, 1 mod N/q
            lift = g + comp.q * ((1 - g) * inverse_mod(comp.q, rest) % rest) if rest > 1 else g
            out.append((lift % N, o))
    return tuple(out)


def _exponents(N: int, a: int) -> Tuple[int, ...]:
    out: Tuple[int, ...] = ()
    for comp in _structure(N):
        out += comp.log[a % comp.q]
    return out


# ---- Символы Кронекера/Шимуры ----------------------------------------------------


def kronecker_symbol(a: int, n: int) -> int:
    """Символ Кронекера (a/n) для любых целых."""
    if n == 0:
        return 1 if abs(a) == 1 else 0
    sign = 1
    if n < 0:
        n = -n
        if a < 0:
            sign = -1
    v = 0
    while n % 2 == 0:
        n //= 2
        v += 1
    if v:
        if a % 2 == 0:
            return 0
        if a % 8 in (3, 5) and v % 2:
            sign = -sign
    if n == 1:
        return sign
    return sign * int(jacobi_symbol(a % n, n))


def shimura_symbol(c: int, d: int) -> int:
    """(c/d) для нечётного d в соглашении полуцелого веса: (0/±1) = 1."""
    if d % 2 == 0:
        raise PreconditionError(f"d = {d} must be odd")
    if gcd(c, d) != 1:
        return 0
    base = int(jacobi_symbol(c % abs(d), abs(d))) if abs(d) > 1 else 1
    if d < 0 and c < 0:
        return -base
    return base


def epsilon_d(d: int) -> CycNumber:
    """ε_d = 1 при d ≡ 1 (4), i при d ≡ 3 (4)."""
    if d % 2 == 0:
        raise PreconditionError(f"d = {d} must be odd")
    return CycNumber.from_rational(1) if d % 4 == 1 else root_of_unity(1, 4)


# ---- Характеры ------------------------------------------------------------------


@dataclass(frozen=True)
class DirichletCharacter:
    modulus: int
    angles: Tuple[Fraction, ...]
    label: str = field(default="", compare=False)

    def __post_init__(self) -> None:
        if self.modulus < 1:
            raise PreconditionError(f"modulus must be positive, got {self.modulus}")
        gens = generators(self.modulus)
        if len(self.angles) != len(gens):
            raise PreconditionError(
                f"modulus {self.modulus} has {len(gens)} generators, got {len(self.angles)} angles"
            )
        norm = []
        for a, (_, o) in zip(self.angles, gens):
            a = Fraction(a) % 1
            if (a * o).denominator != 1:
                raise PreconditionError(f"angle {a} is incompatible with generator order {o}")
            norm.append(a)
        object.__setattr__(self, "angles", tuple(norm))
        if not self.label:
            object.__setattr__(self, "label", self._default_label())

    # --- конструкторы ---

    @classmethod
    def from_angle_function(
        cls, N: int, angle: Callable[[int], Fraction], label: str = ""
    ) -> "DirichletCharacter":
        return cls(N, tuple(Fraction(angle(g)) % 1 for g, _ in generators(N)), label)

    @classmethod
    def trivial(cls, N: int = 1) -> "DirichletCharacter":
        return cls(N, tuple(Fraction(0) for _ in generators(N)), f"trivial:{N}")

    @classmethod
    def kronecker(cls, D: int, N: Optional[int] = None) -> "DirichletCharacter":
        """a ↦ (D/a); D — дискриминант (D ≡ 0, 1 mod 4), модуль |D| по умолчанию."""
        if D % 4 not in (0, 1):
            raise PreconditionError(f"{D} is not a discriminant")
        N = abs(D) if N is None else N
        if N % abs(D):
            raise PreconditionError(f"modulus {N} is not a multiple of {abs(D)}")
        return cls.from_angle_function(
            N, lambda a: Fraction(0) if kronecker_symbol(D, a) == 1 else Fraction(1, 2), f"kronecker:{D}"
        )

    @classmethod
    def legendre(cls, p: int) -> "DirichletCharacter":
        require_odd_prime(p)
        return cls.from_angle_function(
            p, lambda a: Fraction(0) if jacobi_symbol(a % p, p) == 1 else Fraction(1, 2), f"legendre:{p}"
        )

    # --- значения ---

    def angle(self, a: int) -> Optional[Fraction]:
        """arg χ(a)/2π в [0, 1); None при gcd(a, N) > 1."""
        if gcd(a, self.modulus) != 1:
            return None
        exps = _exponents(self.modulus, a)
        return sum((k * t for k, t in zip(exps, self.angles)), Fraction(0)) % 1

    def __call__(self, a: int) -> CycNumber:
        t = self.angle(a)
        if t is None:
            return CycNumber.zero()
        return root_of_unity(t.numerator, t.denominator)

    def real_value(self, a: int) -> int:
        """Для вещественных характеров: 0 или ±1."""
        t = self.angle(a)
        if t is None:
            return 0
        if t == 0:
            return 1
        if t == Fraction(1, 2):
            return -1
        raise PreconditionError(f"character {self.label} is not real at {a}")

    # --- структура ---

    def order(self) -> int:
        out = 1
        for a in self.angles:
            out = out * a.denominator // gcd(out, a.denominator)
        return out

    def is_trivial(self) -> bool:
        return not any(self.angles)

    def conductor(self) -> int:
        N = self.modulus
        for d in divisors(N):
            if all(self.angle(a) == 0 for a in units(N) if a % d == 1 % d):
                return d
        return N

    def is_primitive(self) -> bool:
        return self.conductor() == self.modulus

    def parity(self) -> int:
        if self.modulus <= 2:
            return 1
        return 1 if self.angle(self.modulus - 1) == 0 else -1

    def induce(self, M: int) -> "DirichletCharacter":
        if M % self.modulus:
            raise PreconditionError(f"{M} is not a multiple of {self.modulus}")
        return DirichletCharacter.from_angle_function(
            M, lambda a: self.angle(a % self.modulus) or Fraction(0), self.label
        )

    def __mul__(self, other: "DirichletCharacter") -> "DirichletCharacter":
        M = self.modulus * other.modulus // gcd(self.modulus, other.modulus)
        return DirichletCharacter.from_angle_function(
            M,
            lambda a: (self.angle(a) or Fraction(0)) + (other.angle(a) or Fraction(0)),
            f"{self.label}*{other.label}",
        )

    def inverse(self) -> "DirichletCharacter":
        return DirichletCharacter(self.modulus, tuple(-a for a in self.angles), f"({self.label})^-1")

    def _default_label(self) -> str:
        body = ",".join(f"{a.numerator}/{a.denominator}" for a in self.angles)
        return f"chi:{self.modulus}:{body}"


def epsilon_p(p: int) -> DirichletCharacter:
    """Квадратичный характер поля Q(√p): Кронекер от p (p ≡ 1 mod 4) или 4p."""
    require_odd_prime(p)
    D = p if p % 4 == 1 else 4 * p
    ch = DirichletCharacter.kronecker(D)
    return DirichletCharacter(ch.modulus, ch.angles, f"eps:{p}")


def parse_character(spec: str) -> DirichletCharacter:
    """
    Текстовые метки:
      trivial:N | legendre:p | kronecker:D | eps:p | chi:N:a1/o1,a2/o2,...
    Произведение — через '*'.
    """
    s = "".join(spec.split())
    if not s:
        raise FormatError("empty character spec")
    if "*" in s:
        parts = [parse_character(x) for x in s.split("*")]
        out = parts[0]
        for ch in parts[1:]:
            out = out * ch
        return out
    kind, _, rest = s.partition(":")
    try:
        if kind == "trivial":
            return DirichletCharacter.trivial(int(rest or "1"))
        if kind == "legendre":
            return DirichletCharacter.legendre(int(rest))
        if kind == "kronecker":
            return DirichletCharacter.kronecker(int(rest))
        if kind == "eps":
            return epsilon_p(int(rest))
        if kind == "chi":
            mod, _, body = rest.partition(":")
            angles = tuple(Fraction(x) for x in body.split(",")) if body else ()
            return DirichletCharacter(int(mod), angles)
    except (ValueError, ZeroDivisionError) as e:
        raise FormatError(f"bad character spec {spec!r}: {e}") from e
    raise FormatError(f"unknown character kind {kind!r} in {spec!r}")


# ---- Суммы Гаусса ---------------------------------------------------------------


def gauss_sum(a: int, b: int, c: int) -> CycNumber:
    """G(a,b,c) = Σ_{t mod c} exp(2πi(at² + bt)/c), прямым суммированием."""
    if c < 1:
        raise PreconditionError(f"c must be positive, got {c}")
    counts: Dict[int, int] = {}
    for t in range(c):
        k = (a * t * t + b * t) % c
        counts[k] = counts.get(k, 0) + 1
    return CycNumber.from_exponents(c, counts)


def gauss_sum_closed_form(a: int, c: int) -> ComplexApprox:
    """Классическая формула для G(a,0,c) при gcd(a,c) = 1 (как комплексное число)."""
    if c < 1 or gcd(a, c) != 1:
        raise PreconditionError(f"closed form needs gcd(a, c) = 1, got a={a}, c={c}")
    root = math.sqrt(c)
    if c % 2:
        eps = 1 if c % 4 == 1 else 1j
        val = int(jacobi_symbol(a % c, c)) * eps * root if c > 1 else 1
    elif c % 4 == 2:
        val = 0
    else:
        a_pos = a % c
        eps_inv = 1 if a_pos % 4 == 1 else -1j
        val = (1 + 1j) * eps_inv * int(jacobi_symbol(c, a_pos)) * root
    return ComplexApprox.exact(complex(val), 4 * root * 2.0**-52)


def gauss_square_norm_check(a: int, c: int) -> bool:
    """|G(a,0,c)|² = c точно, через G·conj(G) в круговом поле."""
    g = gauss_sum(a, 0, c)
    return g.norm_squared() == c


def gauss_factor_sides(p: int, N: int, mu: int, eta: int) -> Tuple[CycNumber, CycNumber]:
    require_odd_prime(p)
    if gcd(N, 2 * p) != 1:
        raise PreconditionError(f"gcd(N, 2p) must be 1, got N={N}, p={p}")
    lhs = gauss_sum(-p * N, 2 * (mu - eta), 4 * p)
    if (mu - eta) % p:
        rhs = CycNumber.zero()
    else:
        rhs = gauss_sum(-N, 2 * (mu - eta) // p, 4) * p
    return lhs, rhs


def gauss_factor_check(p: int, N: int, mu: int, eta: int) -> bool:
    """G(-pN, 2(μ-η), 4p) = 0 или p·G(-N, 2(μ-η)/p, 4)."""
    lhs, rhs = gauss_factor_sides(p, N, mu, eta)
    return lhs == rhs


def complete_square_sides(
    m: int, N: int, d: int, s: int, r: int, literal: bool = False
) -> Tuple[CycNumber, CycNumber]:
    """
    ½·G(-Nm, 2(s-r)m, 4d) против ½·G(-Nm, 0, 4d)·exp(m·N̄·(s-r)²/4d).
    literal=True — вариант G(-Nm,0,4d)·exp(-m·N̄·(s-r)²/4d) без ½.
    """
    c = 4 * d
    if d < 1:
        raise PreconditionError(f"d must be positive, got {d}")
    if gcd(N, c) != 1 or gcd(m, c) != 1:
        raise PreconditionError(f"N and m must be invertible modulo {c}, got N={N}, m={m}")
    n_bar = inverse_mod(N, c)
    delta = s - r
    lhs = gauss_sum(-N * m, 2 * delta * m, c) * Fraction(1, 2)
    base = gauss_sum(-N * m, 0, c)
    if literal:
        rhs = base * root_of_unity(-m * n_bar * delta * delta, c)
    else:
        rhs = base * Fraction(1, 2) * root_of_unity(m * n_bar * delta * delta, c)
    return lhs, rhs


def complete_square_check(
    m: int, N: int, d: int, s: int, r: int, literal: bool = False
) -> bool:
    lhs, rhs = complete_square_sides(m, N, d, s, r, literal)
    return lhs == rhs
