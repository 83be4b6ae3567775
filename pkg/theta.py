# theta.py — тета-ряды Θ_{μ,T}, законы преобразования и коцикл полуцелого веса
"""
Θ_{μ,T}(τ, z) = Σ_{r ≡ μ mod 2T Z^n} q^{T^{-1}[r/2]} ζ^r,
r = μ + gram·ℓ, x = ℓ + gram^{-1}μ:
  слагаемое = exp 2πi(τ·½xᵀ·gram·x + zᵀ·gram·x).
Суммирование по кубу |ℓ|_∞ <= B, хвост оценивается через λ_min(gram).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

import numpy as np

from charsums import epsilon_d, shimura_symbol
from exactarith import ComplexApprox, embed, principal_sqrt
from quadform import HalfIntegralMatrix, cosets, det_gram, inverse_gram, mu_value
from utils import PreconditionError

_EPS = float(np.finfo(float).eps)
DEFAULT_TAIL = 1e-10
MAX_RADIUS = 400

ComplexVector = Sequence[complex] | complex | None


def _vector(z: ComplexVector, n: int) -> np.ndarray:
    if z is None:
        return np.zeros(n, dtype=complex)
    arr = np.atleast_1d(np.asarray(z, dtype=complex))
    if arr.shape != (n,):
        raise PreconditionError(f"z must have {n} components, got shape {arr.shape}")
    return arr


def _check_tau(tau: complex) -> complex:
    tau = complex(tau)
    if tau.imag <= 0:
        raise PreconditionError(f"Im(tau) must be positive, got {tau}")
    return tau


def _shift(T: HalfIntegralMatrix, mu: Sequence[int]) -> np.ndarray:
    inv = inverse_gram(T)
    return np.array([float(sum(inv[i][j] * mu[j] for j in range(T.n))) for i in range(T.n)])


# ---- Оценка хвоста ------------------------------------------------------------------


def tail_bound(T: HalfIntegralMatrix, mu: Sequence[int], tau: complex, z: ComplexVector, radius: int) -> float:
    """
    Σ_{|ℓ|_∞ > B} |слагаемое| <= Σ_{k > B} 2n(2k+1)^{n-1}·exp(-2π(½vλρ² - βρ)),
    ρ = k - |gram^{-1}μ|_∞, v = Im τ, λ = λ_min(gram), β = |gram·Im z|.
    inf, если оболочка B+1 ещё не в зоне монотонного убывания.
    """
    tau = _check_tau(tau)
    n = T.n
    gram = np.array(T.gram, dtype=float)
    lam = float(np.linalg.eigvalsh(gram).min())
    if lam <= 0:
        raise PreconditionError(f"index {T} is not positive definite")
    v = tau.imag
    beta = float(np.linalg.norm(gram @ _vector(z, n).imag))
    cmax = float(np.abs(_shift(T, mu)).max())
    total = 0.0
    for k in range(radius + 1, radius + 1 + 10 * MAX_RADIUS):
        rho = k - cmax
        if rho <= 0 or v * lam * rho < beta:
            return math.inf
        expo = -2 * math.pi * (0.5 * v * lam * rho * rho - beta * rho)
        term = 2 * n * (2 * k + 1) ** (n - 1) * math.exp(expo)
        total += term
        if term <= 1e-30 * max(total, 1e-300):
            break
    return total


def radius_for_tail(
    T: HalfIntegralMatrix, mu: Sequence[int], tau: complex, z: ComplexVector = None, target: float = DEFAULT_TAIL
) -> int:
    """Наименьший радиус B, при котором оценка хвоста не превосходит target."""
    for B in range(1, MAX_RADIUS + 1):
        if tail_bound(T, mu, tau, z, B) <= target:
            return B
    raise PreconditionError(f"no radius up to {MAX_RADIUS} reaches tail {target} at tau={tau}")


# ---- Вычисление ---------------------------------------------------------------------


def theta_eval(
    T: HalfIntegralMatrix,
    mu: Sequence[int],
    tau: complex,
    z: ComplexVector = None,
    radius: Optional[int] = None,
    target: float = DEFAULT_TAIL,
) -> ComplexApprox:
    tau = _check_tau(tau)
    n = T.n
    zv = _vector(z, n)
    B = radius if radius is not None else radius_for_tail(T, mu, tau, zv, target)
    gram = np.array(T.gram, dtype=float)
    grid = np.array(list(itertools.product(range(-B, B + 1), repeat=n)), dtype=float)
    x = grid + _shift(T, mu)
    quad = 0.5 * np.einsum("ki,ij,kj->k", x, gram, x)
    lin = (x @ gram) @ zv
    arg = 2j * np.pi * (tau * quad + lin)
    terms = np.exp(arg)
    total = complex(terms.sum())
    mags = np.abs(terms)
    # ошибка exp пропорциональна |аргументу|; плюс накопление суммы
    rounding = float(np.sum(mags * (np.abs(arg) + n + 4)) * _EPS + mags.sum() * len(terms) * _EPS)
    tail = tail_bound(T, mu, tau, zv, B)
    if not math.isfinite(tail):
        raise PreconditionError(f"radius {B} is too small for a tail bound at tau={tau}")
    return ComplexApprox.exact(total, rounding + tail)


def _e(x: float | Fraction) -> complex:
    return complex(np.exp(2j * np.pi * float(x)))


def _quad_z(T: HalfIntegralMatrix, zv: np.ndarray) -> complex:
    """T[z] = ½ zᵀ·gram·z."""
    gram = np.array(T.gram, dtype=float)
    return complex(0.5 * zv @ gram @ zv)


# ---- Действие SL_2(Z) ------------------------------------------------------------------


def slash_theta(
    T: HalfIntegralMatrix,
    mu: Sequence[int],
    g: Tuple[int, int, int, int],
    tau: complex,
    z: ComplexVector = None,
    target: float = DEFAULT_TAIL,
) -> ComplexApprox:
    """(Θ_μ |_{n/2,T} g)(τ,z) = √(cτ+d)^{-n}·e(-c·T[z]/(cτ+d))·Θ_μ(gτ, z/(cτ+d))."""
    a, b, c, d = g
    if a * d - b * c != 1:
        raise PreconditionError(f"{g} is not in SL_2(Z)")
    tau = _check_tau(tau)
    zv = _vector(z, T.n)
    j = c * tau + d
    new_tau = (a * tau + b) / j
    th = theta_eval(T, mu, new_tau, zv / j, target=target)
    root = principal_sqrt(ComplexApprox.exact(j))
    factor = root.value ** (-T.n) * np.exp(-2j * np.pi * c * _quad_z(T, zv) / j)
    # относительная ошибка корня переносится на множитель
    rel = T.n * root.err_bound / max(abs(root.value), 1e-300)
    fac = ComplexApprox.exact(complex(factor), abs(factor) * (rel + 8 * _EPS))
    return fac * th


@dataclass(frozen=True)
class LawCheck:
    lhs: ComplexApprox
    rhs: ComplexApprox
    tol: float

    @property
    def deviation(self) -> float:
        return abs(self.lhs.value - self.rhs.value)

    @property
    def err_bound(self) -> float:
        return self.lhs.err_bound + self.rhs.err_bound

    @property
    def passed(self) -> bool:
        # погрешность вычисления сама должна укладываться в tol
        return self.lhs.close_to(self.rhs, self.tol) and self.err_bound <= self.tol


def theta_T_law(
    T: HalfIntegralMatrix,
    mu: Sequence[int],
    tau: complex,
    z: ComplexVector = None,
    tol: float = 1e-8,
    phase: Optional[Fraction | float] = None,
) -> LawCheck:
    """Θ_μ(τ+1, z) = exp(T^{-1}[μ/2])·Θ_μ(τ, z); phase подменяет показатель."""
    lhs = slash_theta(T, mu, (1, 1, 0, 1), tau, z)
    expo = mu_value(T, mu) if phase is None else phase
    rhs = theta_eval(T, mu, tau, z) * _e(expo)
    return LawCheck(lhs, rhs, tol)


def theta_T_law_check(T, mu, tau, z=None, tol: float = 1e-8, phase=None) -> bool:  # type: ignore[no-untyped-def]
    return theta_T_law(T, mu, tau, z, tol, phase).passed


def theta_S_law(
    T: HalfIntegralMatrix,
    mu: Sequence[int],
    tau: complex,
    z: ComplexVector = None,
    tol: float = 1e-8,
) -> LawCheck:
    """Θ_μ|S = det(gram)^{-1/2}·e^{-πin/4}·Σ_ν exp(-νᵀ·gram^{-1}·μ)·Θ_ν."""
    lhs = slash_theta(T, mu, (0, -1, 1, 0), tau, z)
    inv = inverse_gram(T)
    n = T.n
    acc = ComplexApprox.exact(0)
    for nu in cosets(T):
        pairing = sum(nu[i] * inv[i][j] * mu[j] for i in range(n) for j in range(n))
        acc = acc + theta_eval(T, nu, tau, z) * _e(-pairing)
    scale = det_gram(T) ** -0.5 * complex(np.exp(-1j * np.pi * n / 4))
    rhs = acc * ComplexApprox.exact(scale, abs(scale) * 4 * _EPS)
    return LawCheck(lhs, rhs, tol)


def theta_S_law_check(T, mu, tau, z=None, tol: float = 1e-8) -> bool:  # type: ignore[no-untyped-def]
    return theta_S_law(T, mu, tau, z, tol).passed


# ---- Коцикл полуцелого веса -------------------------------------------------------------


def half_integral_cocycle(g: Tuple[int, int, int, int], tau: complex) -> ComplexApprox:
    """j(g, τ) = (c/d)·ε_d^{-1}·√(cτ+d) для g ∈ Γ_0(4)."""
    a, b, c, d = g
    if a * d - b * c != 1:
        raise PreconditionError(f"{g} is not in SL_2(Z)")
    if c % 4:
        raise PreconditionError(f"{g} is not in Gamma_0(4)")
    tau = _check_tau(tau)
    sign = shimura_symbol(c, d)
    eps_inv = embed(epsilon_d(d).inv())
    root = principal_sqrt(ComplexApprox.exact(c * tau + d))
    return eps_inv * root * sign


# ---- Фикстуры ----------------------------------------------------------------------------


@dataclass(frozen=True)
class ThetaPoint:
    mu: Tuple[int, ...]
    tau: complex
    z: Tuple[complex, ...]


@dataclass(frozen=True)
class ThetaFixture:
    name: str
    index: HalfIntegralMatrix
    points: List[ThetaPoint]


def fixtures_from_config(payload: dict) -> List[ThetaFixture]:
    """{"fixtures": [{"name", "gram", "points": [{"mu", "tau": [re, im], "z": [[re, im], ...]}]}]}."""
    out = []
    for item in payload.get("fixtures", []):
        index = HalfIntegralMatrix(item["gram"])
        pts = [
            ThetaPoint(
                tuple(int(v) for v in p["mu"]),
                complex(*p["tau"]),
                tuple(complex(*c) for c in p["z"]),
            )
            for p in item.get("points", [])
        ]
        out.append(ThetaFixture(str(item["name"]), index, pts))
    return out
