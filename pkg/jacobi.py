# jacobi.py — данные форм Якоби и Зигеля, тета-разложение, скрученное отображение
# Эйхлера-Загира, срезы Тейлора, поиск фундаментальных коэффициентов
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial, gcd
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from sympy import isprime

from charsums import DirichletCharacter
from exactarith import CycNumber
from qexp import Coefficient, QExpansion, odd_squarefree_support, sieve_coprime
from quadform import (
    HalfIntegralMatrix,
    IntVector,
    assemble_block,
    block_split,
    coset_excess,
    cosets,
    discriminant,
    evaluate,
    is_fundamental,
    is_positive_definite,
    is_positive_semidefinite,
    is_primitive_mu,
    max_mu_denominator,
    mu_value,
    reduce_mod,
    trace,
)
from utils import DataConflictError, PreconditionError, prime_divisors

JacobiKey = Tuple[int, IntVector]


# ---- Данные формы Якоби -----------------------------------------------------------------


def canonical_key(T: HalfIntegralMatrix, n: int, r: Sequence[int]) -> JacobiKey:
    """
    (n, r) -> (ℓ, μ): μ — канонический представитель r mod gram·Z^n,
    n - T^{-1}[r/2] = ℓ - T^{-1}[μ/2].
    """
    if len(r) != T.n:
        raise PreconditionError(f"r has {len(r)} components, index has size {T.n}")
    mu = reduce_mod(T, r)
    ell = n - mu_value(T, r) + mu_value(T, mu)
    if ell.denominator != 1:
        raise PreconditionError(f"non-integral shift for n={n}, r={tuple(r)}")
    return int(ell), mu


@dataclass
class JacobiFormData:
    weight: int
    index: HalfIntegralMatrix
    level: int = 1
    character: DirichletCharacter = field(default_factory=DirichletCharacter.trivial)
    maxn: int = 0
    coeffs: Dict[JacobiKey, Fraction] = field(default_factory=dict)
    records: List[Tuple[int, IntVector, Fraction]] = field(default_factory=list)
    representatives: Dict[JacobiKey, Tuple[int, IntVector]] = field(default_factory=dict)

    def add(self, n: int, r: Sequence[int], coeff: Fraction | int) -> None:
        c = Fraction(coeff)
        r = tuple(int(v) for v in r)
        if n < 0 or n >= self.maxn:
            raise PreconditionError(f"n = {n} outside the truncation [0, {self.maxn})")
        if c and n - mu_value(self.index, r) < 0:
            raise PreconditionError(f"c({n}, {r}) != 0 but the block matrix is not positive semi-definite")
        key = canonical_key(self.index, n, r)
        if key in self.coeffs and self.coeffs[key] != c:
            n0, r0 = self.representatives[key]
            raise DataConflictError(
                f"c({n},{r}) = {c} conflicts with c({n0},{r0}) = {self.coeffs[key]} (same class)"
            )
        if key not in self.coeffs:
            self.coeffs[key] = c
            self.representatives[key] = (n, r)
        self.records.append((n, r, c))

    def coefficient(self, n: int, r: Sequence[int]) -> Fraction:
        return self.coeffs.get(canonical_key(self.index, n, r), Fraction(0))

    def is_zero(self) -> bool:
        return not any(self.coeffs.values())


def jacobi_from_records(
    weight: int,
    index: HalfIntegralMatrix,
    maxn: int,
    records: Iterable[Tuple[int, Sequence[int], Fraction | int]],
    level: int = 1,
    character: Optional[DirichletCharacter] = None,
) -> JacobiFormData:
    phi = JacobiFormData(weight, index, level, character or DirichletCharacter.trivial(), maxn)
    for n, r, c in records:
        phi.add(n, r, c)
    return phi


def jacobi_from_components(
    index: HalfIntegralMatrix,
    weight: int,
    components: Mapping[IntVector, Mapping[int, Fraction | int]],
    maxn: int,
    level: int = 1,
    character: Optional[DirichletCharacter] = None,
    spread: int = 1,
) -> JacobiFormData:
    """Данные по заданным h_μ: каждое c(ℓ, μ) записано в нескольких r = μ + gram·x, |x|_∞ <= spread."""
    phi = JacobiFormData(weight, index, level, character or DirichletCharacter.trivial(), maxn)
    n_dim = index.n
    shifts = sorted(itertools.product(range(-spread, spread + 1), repeat=n_dim), key=lambda x: (sum(map(abs, x)), x))
    for mu, series in components.items():
        mu = tuple(mu)
        if reduce_mod(index, mu) != mu:
            raise PreconditionError(f"{mu} is not a canonical coset representative")
        for ell, c in sorted(series.items()):
            for x in shifts:
                r = tuple(mu[i] + sum(index.gram[i][j] * x[j] for j in range(n_dim)) for i in range(n_dim))
                n = ell + sum(a * b for a, b in zip(x, mu)) + evaluate(index, x)
                if n.denominator == 1 and 0 <= n < maxn:
                    phi.add(int(n), r, c)
    return phi


# ---- Тета-разложение --------------------------------------------------------------------


def theta_decompose(phi: JacobiFormData) -> Dict[IntVector, QExpansion]:
    """
    h_μ = Σ_ℓ c(ℓ, μ) q^{ℓ - T^{-1}[μ/2]} для всех μ ∈ Z^n / gram·Z^n.
    c(ℓ, μ) известен при ℓ < maxn + coset_excess(T, μ): кратчайший r ≡ μ даёт наименьшее n.
    """
    T = phi.index
    by_mu: Dict[IntVector, Dict[int, Coefficient]] = {}
    for (ell, mu), c in phi.coeffs.items():
        by_mu.setdefault(mu, {})[ell] = c
    out: Dict[IntVector, QExpansion] = {}
    for mu in cosets(T):
        out[mu] = QExpansion(
            offset=-mu_value(T, mu),
            coeffs=by_mu.get(mu, {}),
            bound=phi.maxn + coset_excess(T, mu),
            weight2=2 * phi.weight - T.n,
            level=phi.level,
            character=phi.character.label,
        )
    return out


def recompose_coefficient(
    components: Mapping[IntVector, QExpansion], T: HalfIntegralMatrix, n: int, r: Sequence[int]
) -> Coefficient:
    ell, mu = canonical_key(T, n, r)
    return components[mu].coefficient(ell)


def recompose_check(phi: JacobiFormData, components: Mapping[IntVector, QExpansion]) -> bool:
    """Каждая исходная запись c(n, r) восстанавливается из h_μ."""
    return all(recompose_coefficient(components, phi.index, n, r) == c for n, r, c in phi.records)


def primitive_components(phi: JacobiFormData) -> List[IntVector]:
    comps = theta_decompose(phi)
    return [mu for mu, h in comps.items() if not h.is_zero() and is_primitive_mu(phi.index, mu)]


# ---- Скрученное отображение Эйхлера-Загира --------------------------------------------------


def scalar_prime_index(T: HalfIntegralMatrix) -> int:
    if T.n != 1:
        raise PreconditionError(f"index {T} is not scalar")
    p = T.gram[0][0] // 2
    if p % 2 == 0 or not isprime(p):
        raise PreconditionError(f"index {p} is not an odd prime")
    return p


def ez_bound(p: int, maxn: int) -> int:
    """n известно, если (n + μ²)/4p < maxn для всех μ <= 2p - 1."""
    return max(0, 4 * p * maxn - (2 * p - 1) ** 2)


def ez_twist(phi: JacobiFormData, eps: DirichletCharacter, chi_p: str = "chi_p") -> QExpansion:
    """
    h_ε(τ) = Σ_μ ε(μ)·h_μ(4pτ); коэффициент при q^n:
    Σ_{μ mod 2p, μ² ≡ -n (4p)} ε(μ)·c((n + μ²)/4p, μ).
    chi_p — метка внешнего характера по модулю 4p, только для учёта.
    """
    p = scalar_prime_index(phi.index)
    if gcd(2 * p, phi.level) != 1:
        raise PreconditionError(f"gcd(2p, N) must be 1, got p={p}, N={phi.level}")
    cond = eps.conductor()
    if cond not in (1, p):
        raise PreconditionError(f"conductor of eps must be 1 or {p}, got {cond}")
    bound = ez_bound(p, phi.maxn)
    coeffs: Dict[int, Coefficient] = {}
    for n in range(bound):
        total = CycNumber.zero()
        for mu in range(2 * p):
            if (mu * mu + n) % (4 * p):
                continue
            c = phi.coeffs.get(((n + mu * mu) // (4 * p), (mu,)), Fraction(0))
            if c:
                total = total + eps(mu) * c
        if not total.is_zero():
            coeffs[n] = total
    return QExpansion(
        offset=Fraction(0),
        coeffs=coeffs,
        bound=bound,
        weight2=2 * phi.weight - 1,
        level=4 * p * phi.level * cond,
        character=f"{eps.label}*{phi.character.label}*({chi_p})^-1",
    )


def ez_parity_predicts_zero(phi: JacobiFormData, eps: DirichletCharacter) -> bool:
    """ε(-1) ≠ χ(-1)(-1)^k."""
    return eps.parity() != phi.character.parity() * (-1) ** phi.weight


# ---- Данные формы Зигеля -------------------------------------------------------------------


@dataclass
class SiegelFormData:
    genus: int
    maxtrace: int
    level: int = 1
    character: DirichletCharacter = field(default_factory=DirichletCharacter.trivial)
    weight: Optional[int] = None
    coeffs: Dict[HalfIntegralMatrix, Fraction] = field(default_factory=dict)

    def add(self, T: HalfIntegralMatrix, coeff: Fraction | int) -> None:
        c = Fraction(coeff)
        if T.n != self.genus:
            raise PreconditionError(f"{T} has size {T.n}, genus is {self.genus}")
        if not is_positive_semidefinite(T):
            raise PreconditionError(f"{T} is not positive semi-definite")
        if trace(T) > self.maxtrace:
            raise PreconditionError(f"trace of {T} exceeds maxtrace {self.maxtrace}")
        if T in self.coeffs and self.coeffs[T] != c:
            raise DataConflictError(f"a_F({T}) given twice: {self.coeffs[T]} and {c}")
        self.coeffs[T] = c

    def coefficient(self, T: HalfIntegralMatrix) -> Fraction:
        return self.coeffs.get(T, Fraction(0))

    def nonzero(self) -> List[Tuple[HalfIntegralMatrix, Fraction]]:
        return [(T, c) for T, c in sorted(self.coeffs.items(), key=lambda kv: kv[0].gram) if c]


def fourier_jacobi_extract(F: SiegelFormData, lower: HalfIntegralMatrix) -> JacobiFormData:
    """φ_𝔗: c(n, r) = a_F([[n, r/2], [rᵀ/2, 𝔗]])."""
    if F.genus < 2:
        raise PreconditionError("Fourier-Jacobi extraction needs genus at least 2")
    if lower.n != F.genus - 1:
        raise PreconditionError(f"block of size {lower.n} does not fit genus {F.genus}")
    if not is_positive_definite(lower):
        raise PreconditionError(f"{lower} is not positive definite")
    maxn = max(F.maxtrace - trace(lower) + 1, 0)
    phi = JacobiFormData(F.weight or 0, lower, F.level, F.character, maxn)
    for T, c in sorted(F.coeffs.items(), key=lambda kv: kv[0].gram):
        t, r, blk = block_split(T)
        if blk == lower:
            phi.add(t, r, c)
    return phi


# ---- Срезы Тейлора --------------------------------------------------------------------------


def _monomial(r: Sequence[int], lam: Sequence[int]) -> Fraction:
    out = Fraction(1)
    for ri, li in zip(r, lam):
        out *= Fraction(ri, 2) ** li
    return out


def taylor_slice_coeff(F: SiegelFormData, lower: HalfIntegralMatrix, lam: Sequence[int]) -> QExpansion:
    """
    m-й коэффициент: Σ_{t₂} a_F([[m, t₂], [t₂ᵀ, 𝔗]])·t₂^λ по положительно определённым блокам.
    Множитель (4πi)^{ν(λ)}/λ! вынесен.
    """
    if lower.n != F.genus - 1:
        raise PreconditionError(f"block of size {lower.n} does not fit genus {F.genus}")
    if len(lam) != lower.n or any(v < 0 for v in lam):
        raise PreconditionError(f"multi-index {tuple(lam)} does not match size {lower.n}")
    if not is_positive_definite(lower):
        raise PreconditionError(f"{lower} is not positive definite")
    bound = max(F.maxtrace - trace(lower) + 1, 0)
    coeffs: Dict[int, Fraction] = {}
    for T, c in F.coeffs.items():
        t, r, blk = block_split(T)
        if blk != lower or not c or not is_positive_definite(T):
            continue
        coeffs[t] = coeffs.get(t, Fraction(0)) + c * _monomial(r, lam)
    nu = sum(lam)
    weight2 = 2 * (F.weight + nu) if F.weight is not None else 0
    return QExpansion(Fraction(0), coeffs, bound, weight2, F.level, F.character.label)


def taylor_scalar_denominator(lam: Sequence[int]) -> int:
    """λ! = Π λ_i!."""
    out = 1
    for v in lam:
        out *= factorial(v)
    return out


@dataclass(frozen=True)
class TaylorSlice:
    nu: int
    slices: Dict[Tuple[int, ...], QExpansion]


def taylor_slice(F: SiegelFormData, lower: HalfIntegralMatrix, max_degree: int) -> Optional[TaylorSlice]:
    """Наименьшая полная степень ν0 <= max_degree с ненулевым срезом и все такие λ."""
    for nu in range(max_degree + 1):
        found: Dict[Tuple[int, ...], QExpansion] = {}
        for lam in itertools.product(range(nu + 1), repeat=lower.n):
            if sum(lam) != nu:
                continue
            f = taylor_slice_coeff(F, lower, lam)
            if not f.is_zero():
                found[lam] = f
        if found:
            return TaylorSlice(nu, found)
    return None


# ---- Поиск фундаментальных коэффициентов ------------------------------------------------------


@dataclass(frozen=True)
class HuntResult:
    found: List[HalfIntegralMatrix]
    reason: str  # "found" | "no fundamental coefficient within bound" | "coprimality filter"

    @property
    def inconclusive(self) -> bool:
        return not self.found


def _hunt_order(T: HalfIntegralMatrix) -> Tuple[int, int, Tuple[Tuple[int, ...], ...]]:
    return discriminant(T), trace(T), T.gram


def hunt_fundamental(F: SiegelFormData, require_coprime_to: int = 1) -> HuntResult:
    fundamentals = [T for T, c in F.coeffs.items() if c and is_fundamental(T)]
    found = sorted(
        (T for T in fundamentals if gcd(discriminant(T), require_coprime_to) == 1), key=_hunt_order
    )
    if found:
        return HuntResult(found, "found")
    if fundamentals:
        return HuntResult([], "coprimality filter")
    return HuntResult([], "no fundamental coefficient within bound")


@dataclass(frozen=True)
class HuntStep:
    stage: str
    detail: str


@dataclass(frozen=True)
class ExplainResult:
    steps: List[HuntStep]
    located: Optional[HalfIntegralMatrix]


def explain_hunt(F: SiegelFormData, require_coprime_to: int = 1) -> ExplainResult:
    """
    extract -> decompose -> primitive -> rescale (τ ↦ Dτ) -> sieve (p | 2N)
    -> odd square-free support -> T.
    Показатель m в g соответствует d_T блочной матрицы (тождество для дискриминанта блока).
    """
    steps: List[HuntStep] = []
    N = require_coprime_to
    primes = sorted(set(prime_divisors(2 * N)))
    lowers = sorted(
        {block_split(T)[2] for T, c in F.coeffs.items() if c and F.genus >= 2},
        key=lambda L: (abs(discriminant(L)), L.gram),
    )
    for lower in lowers:
        if not is_positive_definite(lower):
            continue
        phi = fourier_jacobi_extract(F, lower)
        steps.append(HuntStep("extract", f"block={lower} records={len(phi.records)} maxn={phi.maxn}"))
        comps = theta_decompose(phi)
        nonzero = [mu for mu, h in comps.items() if not h.is_zero()]
        steps.append(HuntStep("decompose", f"nonzero components {len(nonzero)} of {len(comps)}"))
        prim = [mu for mu in nonzero if is_primitive_mu(lower, mu)]
        steps.append(HuntStep("primitive", f"primitive mu: {prim}"))
        D = max_mu_denominator(lower)
        for mu in prim:
            g = comps[mu].scale_exponents(D).integral_shift().with_meta(level=F.level * D)
            steps.append(HuntStep("rescale", f"mu={mu} tau -> {D}*tau support={g.support()[:8]}"))
            for p in primes:
                g = sieve_coprime(g, p)
            steps.append(HuntStep("sieve", f"primes={primes} level={g.level} support={g.support()[:8]}"))
            support = odd_squarefree_support(g, N)
            steps.append(HuntStep("support", f"odd square-free exponents: {support[:8]}"))
            mv = mu_value(lower, mu)
            for m in support:
                ell = Fraction(m, D) + mv
                if ell.denominator != 1:
                    continue
                n, r = phi.representatives[(int(ell), mu)]
                T = assemble_block(n, r, lower)
                if is_fundamental(T) and gcd(discriminant(T), N) == 1 and F.coefficient(T):
                    steps.append(HuntStep("located", f"T={T} disc={discriminant(T)} a_F={F.coefficient(T)}"))
                    return ExplainResult(steps, T)
    steps.append(HuntStep("exhausted", "no candidate within the stored coefficients"))
    return ExplainResult(steps, None)
