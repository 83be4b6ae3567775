# epsmat.py — матрицы ε(s, r), точный ранг над круговыми полями, лемма о ранге
"""
Три варианта матриц:
  lemma — E_{a,d}(s0) = (exp(a(s-r)²/d))_{r,s}, строки (Z/d)^x, столбцы s mod d, s² ≡ s0² (d);
  odd   — ½·G(-Nm, 2(s-r)m, 4d), строки (Z/2d)^x, столбцы s mod 2d, s² ≡ s0² (4d);
  even  — G(-Nm', 0, d)·exp(-Nm'(s-r)²/d), строки (Z/d)^x, столбцы как в lemma.
Ожидаемый ранг во всех трёх — 2^t, t = #{p | d : p ∤ s0}.
Общая матрица (ε(μ, η)) строится по Z^n / 2T·Z^n без сведения к скаляру и
сверяется со скалярной формулой через нормализующий U ∈ SL_n(Z).
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from math import gcd
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from sympy import Matrix, isprime, primitive_root

from charsums import gauss_sum
from exactarith import CycNumber, mul_int_vectors, phi, root_of_unity
from quadform import (
    HalfIntegralMatrix,
    IntVector,
    act,
    cosets,
    det_gram,
    discriminant,
    inverse_gram,
    is_fundamental,
    is_positive_definite,
    is_primitive_mu,
    local_normalize,
    mu_value,
    reduce_mod,
)
from utils import (
    InvariantError,
    PreconditionError,
    UnsupportedCaseError,
    inverse_mod,
    is_odd_squarefree,
    lcm_all,
    odd_squarefree_upto,
    prime_divisors,
    units,
)

CASES = ("lemma", "odd", "even")

CycMatrix = Sequence[Sequence[CycNumber]]


# ---- Элементы ------------------------------------------------------------------


def _require_coprime(x: int, n: int, name: str) -> None:
    if gcd(x, n) != 1:
        raise PreconditionError(f"{name} = {x} must be coprime to {n}")


def epsilon_entry_odd(m: int, N: int, d: int, s: int, r: int) -> CycNumber:
    """½·G(-Nm, 2(s-r)m, 4d)."""
    if d < 1:
        raise PreconditionError(f"d must be positive, got {d}")
    _require_coprime(m, 4 * d, "m")
    _require_coprime(N, 4 * d, "N")
    return gauss_sum(-N * m, 2 * (s - r) * m, 4 * d) * Fraction(1, 2)


def epsilon_entry_even(m2: int, N: int, d: int, s: int, r: int) -> CycNumber:
    """G(-Nm', 0, d)·exp(-Nm'(s-r)²/d)."""
    if d < 1:
        raise PreconditionError(f"d must be positive, got {d}")
    _require_coprime(m2, d, "m2")
    _require_coprime(N, d, "N")
    return gauss_sum(-N * m2, 0, d) * root_of_unity(-N * m2 * (s - r) ** 2, d)


# ---- Матрица --------------------------------------------------------------------


@dataclass(frozen=True)
class EpsilonMatrix:
    a: int
    d: int
    s0: int
    case: str
    rows: Tuple[int, ...]
    cols: Tuple[int, ...]
    order: int
    N: int = 1
    # lemma: элемент (i, j) = ζ_order^{exponents[i][j]}
    exponents: Optional[Tuple[Tuple[int, ...], ...]] = None
    values: Optional[Tuple[Tuple[CycNumber, ...], ...]] = field(default=None, compare=False)

    @cached_property
    def entries(self) -> Tuple[Tuple[CycNumber, ...], ...]:
        if self.values is not None:
            return self.values
        assert self.exponents is not None
        return tuple(tuple(root_of_unity(k, self.order) for k in row) for row in self.exponents)

    @property
    def shape(self) -> Tuple[int, int]:
        return len(self.rows), len(self.cols)

    @property
    def t(self) -> int:
        return sum(1 for p in prime_divisors(self.d) if self.s0 % p)

    @property
    def expected_rank(self) -> int:
        return 2**self.t


def _require_odd_squarefree(d: int) -> None:
    if d < 1 or not is_odd_squarefree(d):
        raise PreconditionError(f"d = {d} must be a positive odd square-free integer")


def _columns(s0: int, span: int, modulus: int) -> Tuple[int, ...]:
    return tuple(s for s in range(span) if (s * s - s0 * s0) % modulus == 0)


def build_E(a: int, d: int, s0: int) -> EpsilonMatrix:
    _require_odd_squarefree(d)
    _require_coprime(a, d, "a")
    rows = tuple(units(d))
    cols = _columns(s0, d, d)
    exps = tuple(tuple(a * (s - r) ** 2 % d for s in cols) for r in rows)
    return EpsilonMatrix(a, d, s0 % d, "lemma", rows, cols, d, exponents=exps)


def build_odd(m: int, N: int, d: int, s0: int) -> EpsilonMatrix:
    _require_odd_squarefree(d)
    _require_coprime(m, 4 * d, "m")
    _require_coprime(N, 4 * d, "N")
    rows = tuple(units(2 * d))
    cols = _columns(s0, 2 * d, 4 * d)
    cache: Dict[int, CycNumber] = {}

    def entry(delta: int) -> CycNumber:
        key = delta % (2 * d)
        if key not in cache:
            cache[key] = epsilon_entry_odd(m, N, d, key, 0)
        return cache[key]

    vals = tuple(tuple(entry(s - r) for s in cols) for r in rows)
    return EpsilonMatrix(m, d, s0 % (2 * d), "odd", rows, cols, 4 * d, N, values=vals)


def build_even(m2: int, N: int, d: int, s0: int) -> EpsilonMatrix:
    _require_odd_squarefree(d)
    _require_coprime(m2, d, "m2")
    _require_coprime(N, d, "N")
    rows = tuple(units(d))
    cols = _columns(s0, d, d)
    cache: Dict[int, CycNumber] = {}

    def entry(delta: int) -> CycNumber:
        key = delta % d
        if key not in cache:
            cache[key] = epsilon_entry_even(m2, N, d, key, 0)
        return cache[key]

    vals = tuple(tuple(entry(s - r) for s in cols) for r in rows)
    return EpsilonMatrix(m2, d, s0 % d, "even", rows, cols, d, N, values=vals)


def build(case: str, a: int, d: int, s0: int, N: int = 1) -> EpsilonMatrix:
    if case == "lemma":
        return build_E(a, d, s0)
    if case == "odd":
        return build_odd(a, N, d, s0)
    if case == "even":
        return build_even(a, N, d, s0)
    raise PreconditionError(f"unknown case {case!r}, expected one of {CASES}")


# ---- Точный ранг -----------------------------------------------------------------


def _content_normalize(row: List[List[int]]) -> List[List[int]]:
    g = 0
    for vec in row:
        for v in vec:
            g = gcd(g, v)
            if g == 1:
                return row
    if g > 1:
        return [[v // g for v in vec] for vec in row]
    return row


def rank_exact(M: CycMatrix) -> int:
    """
    Ранг над Q(ζ_m) дробесвободным исключением в Z[ζ_m]:
    row_i <- p·row_i - a·row_piv, затем деление строки на целое содержимое.
    Пивот — первая ненулевая строка (детерминированно).
    """
    if not M or not M[0]:
        return 0
    order = lcm_all(x.order for row in M for x in row)
    rows: List[List[List[int]]] = []
    for row in M:
        lifted = [x.lift(order) for x in row]
        den = lcm_all(c.denominator for x in lifted for c in x.coeffs)
        rows.append(_content_normalize([[int(c * den) for c in x.coeffs] for x in lifted]))

    n_rows, n_cols = len(rows), len(rows[0])
    rank = 0
    for c in range(n_cols):
        piv = next((i for i in range(rank, n_rows) if any(rows[i][c])), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        prow = rows[rank]
        p = prow[c]
        for i in range(rank + 1, n_rows):
            a = rows[i][c]
            if not any(a):
                continue
            new = [list(v) for v in rows[i]]
            for j in range(c, n_cols):
                left = mul_int_vectors(order, p, rows[i][j])
                right = mul_int_vectors(order, a, prow[j])
                new[j] = [x - y for x, y in zip(left, right)]
            rows[i] = _content_normalize(new)
        rank += 1
        if rank == n_rows:
            break
    return rank


# ---- Модульный сертификат ранга ---------------------------------------------------

_CERT_FLOOR = 10**6


@lru_cache(maxsize=None)
def certificate_primes(order: int, count: int = 3) -> Tuple[Tuple[int, int], ...]:
    """(ℓ, ω): ℓ ≡ 1 mod order, ω — первообразный корень степени order в F_ℓ."""
    out = []
    k = _CERT_FLOOR // order + 1
    while len(out) < count:
        ell = k * order + 1
        if isprime(ell):
            g = int(primitive_root(ell))
            out.append((ell, pow(g, (ell - 1) // order, ell)))
        k += 1
    return tuple(out)


def _rank_mod(rows: List[List[int]], ell: int) -> int:
    rows = [list(r) for r in rows]
    if not rows:
        return 0
    n_rows, n_cols = len(rows), len(rows[0])
    rank = 0
    for c in range(n_cols):
        piv = next((i for i in range(rank, n_rows) if rows[i][c]), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = pow(rows[rank][c], -1, ell)
        prow = [v * inv % ell for v in rows[rank]]
        rows[rank] = prow
        for i in range(rank + 1, n_rows):
            f = rows[i][c]
            if f:
                rows[i] = [(x - f * y) % ell for x, y in zip(rows[i], prow)]
        rank += 1
    return rank


def _reduce_entry(x: CycNumber, order: int, ell: int, omega: int) -> int:
    step = order // x.order
    total = 0
    for j, c in enumerate(x.coeffs):
        if c:
            if c.denominator % ell == 0:
                raise ZeroDivisionError
            total += c.numerator * pow(c.denominator, -1, ell) * pow(omega, j * step, ell)
    return total % ell


def _matrix_mod(E: EpsilonMatrix | CycMatrix, ell: int, omega: int) -> List[List[int]]:
    if isinstance(E, EpsilonMatrix) and E.exponents is not None:
        powers = [pow(omega, k, ell) for k in range(E.order)]
        return [[powers[k] for k in row] for row in E.exponents]
    M = E.entries if isinstance(E, EpsilonMatrix) else E
    order = _order_of(E)
    return [[_reduce_entry(x, order, ell, omega) for x in row] for row in M]


def _order_of(E: EpsilonMatrix | CycMatrix) -> int:
    if isinstance(E, EpsilonMatrix):
        return E.order
    return lcm_all(x.order for row in E for x in row)


def rank_certified(E: EpsilonMatrix | CycMatrix) -> Tuple[int, str]:
    """
    (ранг, метод). Гомоморфизм Z[ζ][1/den] -> F_ℓ, ζ ↦ ω, не повышает ранг:
    полный столбцовый ранг по модулю ℓ доказывает полный ранг над Q(ζ).
    Иначе — rank_exact.
    """
    M = E.entries if isinstance(E, EpsilonMatrix) and E.exponents is None else E
    n_rows = len(E.rows) if isinstance(E, EpsilonMatrix) else len(M)
    n_cols = len(E.cols) if isinstance(E, EpsilonMatrix) else (len(M[0]) if M else 0)
    if n_rows == 0 or n_cols == 0:
        return 0, "exact"
    full = min(n_rows, n_cols)
    order = _order_of(E)
    for ell, omega in certificate_primes(order):
        try:
            mod_rows = _matrix_mod(E, ell, omega)
        except ZeroDivisionError:
            continue
        if _rank_mod(mod_rows, ell) == full:
            return full, "certified"
    entries = E.entries if isinstance(E, EpsilonMatrix) else M
    return rank_exact(entries), "exact"


# ---- Тензорное разложение ---------------------------------------------------------


def kron(A: CycMatrix, B: CycMatrix) -> List[List[CycNumber]]:
    """(A ⊗ B)[(i,k),(j,l)] = A[i][j]·B[k][l], строки i·|B| + k."""
    return [[x * y for x in arow for y in brow] for arow in A for brow in B]


def rank_product_check(A: CycMatrix, B: CycMatrix) -> bool:
    return rank_exact(kron(A, B)) == rank_exact(A) * rank_exact(B)


@dataclass(frozen=True)
class TensorSplit:
    left: EpsilonMatrix  # E_{a·p, d'}(s0')
    right: EpsilonMatrix  # E_{a·d', p}(s0'')
    row_map: Tuple[Tuple[int, int], ...]  # строка E -> (строка left, строка right)
    col_map: Tuple[Tuple[int, int], ...]


def tensor_split(a: int, d: int, s0: int, p_split: int) -> TensorSplit:
    _require_odd_squarefree(d)
    if d % p_split or not isprime(p_split):
        raise PreconditionError(f"{p_split} is not a prime divisor of {d}")
    _require_coprime(a, d, "a")
    p = p_split
    dd = d // p
    p_inv = inverse_mod(p, dd)
    dd_inv = inverse_mod(dd, p)
    left = build_E(a * p, dd, s0 * p_inv % dd if dd > 1 else 0)
    right = build_E(a * dd, p, s0 * dd_inv % p)

    def split(x: int) -> Tuple[int, int]:
        # x = p·x' + d'·x'' (mod d)
        return (x * p_inv % dd if dd > 1 else 0), x * dd_inv % p

    row_map = tuple(
        (left.rows.index(split(r)[0]), right.rows.index(split(r)[1])) for r in build_E(a, d, s0).rows
    )
    col_map = tuple(
        (left.cols.index(split(s)[0]), right.cols.index(split(s)[1])) for s in _columns(s0, d, d)
    )
    return TensorSplit(left, right, row_map, col_map)


def tensor_split_check(a: int, d: int, s0: int, p_split: int) -> bool:
    """E_{a,d}(s0) = E_{ap,d'}(s0') ⊗ E_{ad',p}(s0'') после перестановки индексов."""
    E = build_E(a, d, s0)
    try:
        ts = tensor_split(a, d, s0, p_split)
    except ValueError as e:
        if isinstance(e, PreconditionError):
            raise
        return False  # индекс не нашёлся: перестановки нет
    nl, nr = ts.left.shape, ts.right.shape
    if len(set(ts.row_map)) != len(ts.row_map) or len(ts.row_map) != nl[0] * nr[0]:
        return False
    if len(set(ts.col_map)) != len(ts.col_map) or len(ts.col_map) != nl[1] * nr[1]:
        return False
    assert E.exponents is not None and ts.left.exponents is not None and ts.right.exponents is not None
    for i, (i1, i2) in enumerate(ts.row_map):
        for j, (j1, j2) in enumerate(ts.col_map):
            lhs = Fraction(E.exponents[i][j], d)
            rhs = Fraction(ts.left.exponents[i1][j1], ts.left.order) + Fraction(
                ts.right.exponents[i2][j2], ts.right.order
            )
            if (lhs - rhs).denominator != 1:
                return False
    return True


def prime_minor_matrix(a: int, p: int, s0: int, r1: int, r2: int) -> List[List[CycNumber]]:
    """2×2 подматрица E_{a,p}(s0) на строках r1, r2 (p ∤ s0: столбцы s0, -s0)."""
    if s0 % p == 0:
        raise PreconditionError(f"{p} divides s0 = {s0}; the matrix is a single column")
    cols = sorted({s0 % p, -s0 % p})
    return [[root_of_unity(a * (s - r) ** 2, p) for s in cols] for r in (r1, r2)]


# ---- Проверка леммы и перебор -----------------------------------------------------


@dataclass(frozen=True)
class RankReport:
    case: str
    a: int
    d: int
    s0: int
    rows: int
    cols: int
    rank: int
    expected: int
    passed: bool
    method: str
    note: str = ""

    def as_row(self) -> Dict[str, object]:
        return {
            "case": self.case,
            "a": self.a,
            "d": self.d,
            "s0": self.s0,
            "rows": self.rows,
            "cols": self.cols,
            "rank": self.rank,
            "expected": self.expected,
            "method": self.method,
            "status": "error" if self.method == "error" else ("pass" if self.passed else "fail"),
            "note": self.note,
        }


def verify_rank(case: str, a: int, d: int, s0: int, N: int = 1, method: str = "certified") -> RankReport:
    E = build(case, a, d, s0, N)
    if method == "exact":
        rank, used = rank_exact(E.entries), "exact"
    else:
        rank, used = rank_certified(E)
    n_rows, n_cols = E.shape
    note = "" if n_rows >= n_cols else "rows<cols"
    passed = rank == E.expected_rank and n_rows >= n_cols
    return RankReport(case, a, d, E.s0, n_rows, n_cols, rank, E.expected_rank, passed, used, note)


def verify_rank_lemma(a: int, d: int, s0: int, method: str = "certified") -> RankReport:
    """rank E_{a,d}(s0) = 2^t."""
    return verify_rank("lemma", a, d, s0, method=method)


def sweep_triples(dmax: int, case: str = "lemma") -> Iterator[Tuple[str, int, int, int]]:
    """Канонический порядок: d, затем a (или m), затем s0."""
    if case not in CASES:
        raise PreconditionError(f"unknown case {case!r}, expected one of {CASES}")
    for d in odd_squarefree_upto(dmax):
        if case == "odd":
            for m in units(4 * d):
                for s0 in range(2 * d):
                    yield case, m, d, s0
        else:
            for a in units(d):
                for s0 in range(d):
                    yield case, a, d, s0


def _run_triple(triple: Tuple[str, int, int, int]) -> RankReport:
    case, a, d, s0 = triple
    try:
        return verify_rank(case, a, d, s0)
    except ValueError as e:
        return RankReport(case, a, d, s0, 0, 0, -1, 0, False, "error", str(e))


def sweep(dmax: int, case: str = "lemma", jobs: int = 1) -> List[RankReport]:
    if dmax < 1:
        raise PreconditionError(f"dmax must be at least 1, got {dmax}")
    triples = list(sweep_triples(dmax, case))
    if jobs <= 1:
        return [_run_triple(t) for t in triples]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        # map сохраняет порядок входа
        return list(pool.map(_run_triple, triples, chunksize=64))


def row_count_odd(d: int) -> int:
    """Π_{p | 2d} (p - 1) = φ(2d)."""
    return phi(2 * d)


# ---- ε(μ, η) по всей группе Z^n / gram·Z^n ----------------------------------------


def _require_general(T: HalfIntegralMatrix, N: int) -> None:
    if not is_positive_definite(T):
        raise PreconditionError(f"{T} is not positive definite")
    if not is_fundamental(T):
        raise PreconditionError(f"disc({T}) = {discriminant(T)} is not odd square-free")
    _require_coprime(N, 2 * det_gram(T), "N")


@lru_cache(maxsize=None)
def _epsilon_by_difference(T: HalfIntegralMatrix, N: int) -> Dict[IntVector, CycNumber]:
    """ε зависит только от класса μ - η: одна сумма на класс."""
    inv = inverse_gram(T)
    order = 2 * det_gram(T)
    nus = cosets(T)
    quad = [N * mu_value(T, nu) for nu in nus]
    out: Dict[IntVector, CycNumber] = {}
    for delta in nus:
        counts: Dict[int, int] = {}
        for nu, qv in zip(nus, quad):
            x = sum(delta[i] * inv[i][j] * nu[j] for i in range(T.n) for j in range(T.n)) - qv
            k = x * order
            if k.denominator != 1:
                raise InvariantError(f"exponent {x} has denominator beyond {order}")
            counts[int(k) % order] = counts.get(int(k) % order, 0) + 1
        out[delta] = CycNumber.from_exponents(order, counts)
    return out


def epsilon_general(T: HalfIntegralMatrix, N: int, mu: Sequence[int], eta: Sequence[int]) -> CycNumber:
    """ε(μ, η) = Σ_ν exp(ᵗ(μ - η - Nν/2)·gram^{-1}·ν), ν по Z^n / gram·Z^n."""
    _require_general(T, N)
    delta = reduce_mod(T, [a - b for a, b in zip(mu, eta)])
    return _epsilon_by_difference(T, N)[delta]


def equivalent_mus(T: HalfIntegralMatrix, mu0: Sequence[int]) -> List[IntVector]:
    """μ ~ μ0: T^{-1}[μ/2] - T^{-1}[μ0/2] ∈ Z."""
    base = mu_value(T, mu0)
    return [mu for mu in cosets(T) if (mu_value(T, mu) - base).denominator == 1]


@dataclass(frozen=True)
class GeneralEpsilonMatrix:
    """(ε(μ, η))_{η, μ}: строки — примитивные η, столбцы — μ ~ μ0."""

    index: HalfIntegralMatrix
    N: int
    mu0: IntVector
    rows: Tuple[IntVector, ...]
    cols: Tuple[IntVector, ...]
    entries: Tuple[Tuple[CycNumber, ...], ...]

    @property
    def shape(self) -> Tuple[int, int]:
        return len(self.rows), len(self.cols)

    @property
    def expected_rank(self) -> int:
        return len(self.cols)

    @property
    def primitive(self) -> bool:
        return is_primitive_mu(self.index, self.mu0)


def build_general(T: HalfIntegralMatrix, N: int, mu0: Sequence[int]) -> GeneralEpsilonMatrix:
    _require_general(T, N)
    mu0 = tuple(mu0)
    if reduce_mod(T, mu0) != mu0:
        raise PreconditionError(f"{mu0} is not a canonical coset representative")
    table = _epsilon_by_difference(T, N)
    rows = tuple(eta for eta in cosets(T) if is_primitive_mu(T, eta))
    cols = tuple(equivalent_mus(T, mu0))
    vals = tuple(
        tuple(table[reduce_mod(T, [a - b for a, b in zip(mu, eta)])] for mu in cols) for eta in rows
    )
    return GeneralEpsilonMatrix(T, N, mu0, rows, cols, vals)


def class_representatives(T: HalfIntegralMatrix) -> List[IntVector]:
    """Первый μ каждого класса ~ в порядке cosets."""
    seen: Dict[Fraction, IntVector] = {}
    for mu in cosets(T):
        seen.setdefault(mu_value(T, mu) % 1, mu)
    return list(seen.values())


# ---- Сведение к скаляру ------------------------------------------------------------


@dataclass(frozen=True)
class ScalarReduction:
    """
    gram̃ = Uᵀ·gram·U, U ∈ SL_n(Z) из local_normalize; e_n порождает Z^n / gram̃·Z^n,
    и Uᵀμ ≡ s·e_n. Тогда ε(μ, η) = ½·G(-Nm, 2(s - r)m, 2D), m = adj(gram̃)_{nn}, D = det gram̃.
    """

    index: HalfIntegralMatrix
    U: Tuple[Tuple[int, ...], ...]
    reduced: HalfIntegralMatrix
    m: int
    order: int
    position: Dict[IntVector, int]

    def scalar(self, mu: Sequence[int]) -> int:
        n = self.index.n
        mu_t = [sum(self.U[i][j] * mu[i] for i in range(n)) for j in range(n)]
        return self.position[reduce_mod(self.reduced, mu_t)]


def scalar_reduction(T: HalfIntegralMatrix, f: int = 2) -> ScalarReduction:
    if not is_fundamental(T):
        raise PreconditionError(f"disc({T}) = {discriminant(T)} is not odd square-free")
    U = local_normalize(T, f).combined
    reduced = act(T, U)
    n = T.n
    D = det_gram(reduced)
    m = int(Matrix(reduced.gram).adjugate()[n - 1, n - 1])
    position: Dict[IntVector, int] = {}
    for s in range(D):
        key = reduce_mod(reduced, [0] * (n - 1) + [s])
        if key in position:
            # нужна ещё 2-адическая нормализация
            raise UnsupportedCaseError(f"e_{n} does not generate Z^{n}/gram·Z^{n} after normalizing {T}")
        position[key] = s
    return ScalarReduction(T, U, reduced, m, D, position)


def epsilon_scalar(m: int, N: int, D: int, s: int, r: int) -> CycNumber:
    """½·G(-Nm, 2(s - r)m, 2D); при D = 2d это epsilon_entry_odd."""
    if D < 1:
        raise PreconditionError(f"D must be positive, got {D}")
    return gauss_sum(-N * m, 2 * (s - r) * m, 2 * D) * Fraction(1, 2)


def epsilon_reduction_check(T: HalfIntegralMatrix, N: int = 1) -> bool:
    """ε(μ, η) по всей группе совпадает со скалярной формулой при всех μ, η."""
    _require_general(T, N)
    red = scalar_reduction(T)
    table = _epsilon_by_difference(T, N)
    scalar: Dict[int, CycNumber] = {}
    reps = cosets(T)
    pos = {mu: red.scalar(mu) for mu in reps}
    for mu in reps:
        for eta in reps:
            delta = (pos[mu] - pos[eta]) % red.order
            if delta not in scalar:
                scalar[delta] = epsilon_scalar(red.m, N, red.order, delta, 0)
            if table[reduce_mod(T, [a - b for a, b in zip(mu, eta)])] != scalar[delta]:
                return False
    return True
