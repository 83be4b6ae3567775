# quadform.py — полуцелые симметричные матрицы Λ_n (храним 2T)
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Dict, List, Sequence, Tuple

import numpy as np
from sympy import ZZ, Matrix, isprime
from sympy.matrices.normalforms import hermite_normal_form, smith_normal_form

from utils import (
    InvariantError,
    PreconditionError,
    UnsupportedCaseError,
    crt_pair,
    inverse_mod,
    is_odd_squarefree,
    prime_divisors,
)

IntMatrix = Tuple[Tuple[int, ...], ...]
IntVector = Tuple[int, ...]


def _as_matrix(rows: Sequence[Sequence[int]]) -> IntMatrix:
    return tuple(tuple(int(v) for v in row) for row in rows)


def _det(rows: IntMatrix) -> int:
    if not rows:
        return 1
    return int(Matrix(rows).det(method="bareiss"))


# ---- Типы ----------------------------------------------------------------------


@dataclass(frozen=True)
class HalfIntegralMatrix:
    """T ∈ Λ_n через gram = 2T: симметрична, целая, чётная диагональ."""

    gram: IntMatrix

    def __post_init__(self) -> None:
        g = _as_matrix(self.gram)
        object.__setattr__(self, "gram", g)
        n = len(g)
        if n == 0 or any(len(row) != n for row in g):
            raise PreconditionError(f"gram must be a non-empty square matrix, got {g}")
        for i in range(n):
            if g[i][i] % 2:
                raise PreconditionError(f"gram diagonal must be even, got {g[i][i]} at {i}")
            for j in range(i):
                if g[i][j] != g[j][i]:
                    raise PreconditionError(f"gram is not symmetric at ({i},{j})")

    @property
    def n(self) -> int:
        return len(self.gram)

    @classmethod
    def scalar(cls, t: int) -> "HalfIntegralMatrix":
        return cls(((2 * t,),))

    @classmethod
    def identity(cls, n: int) -> "HalfIntegralMatrix":
        return cls(tuple(tuple(2 if i == j else 0 for j in range(n)) for i in range(n)))

    @classmethod
    def from_half(cls, rows: Sequence[Sequence[Fraction | int]]) -> "HalfIntegralMatrix":
        """Из самой T (полуцелые внедиагональные элементы)."""
        gram = []
        for row in rows:
            out = []
            for v in row:
                w = Fraction(v) * 2
                if w.denominator != 1:
                    raise PreconditionError(f"entry {v} is not half-integral")
                out.append(int(w))
            gram.append(tuple(out))
        return cls(tuple(gram))

    def scaled(self, c: int) -> "HalfIntegralMatrix":
        return HalfIntegralMatrix(tuple(tuple(c * v for v in row) for row in self.gram))

    def __str__(self) -> str:
        return "[" + ",".join("[" + ",".join(str(v) for v in row) + "]" for row in self.gram) + "]"


@dataclass(frozen=True)
class UnimodularMatrix:
    entries: IntMatrix

    def __post_init__(self) -> None:
        e = _as_matrix(self.entries)
        object.__setattr__(self, "entries", e)
        if any(len(row) != len(e) for row in e):
            raise PreconditionError("unimodular matrix must be square")
        if abs(_det(e)) != 1:
            raise PreconditionError(f"determinant of {e} is not ±1")

    @property
    def n(self) -> int:
        return len(self.entries)

    @property
    def det(self) -> int:
        return _det(self.entries)


# ---- Инварианты ----------------------------------------------------------------


def det_gram(T: HalfIntegralMatrix) -> int:
    return _det(T.gram)


def content(T: HalfIntegralMatrix) -> int:
    c = 0
    for i, row in enumerate(T.gram):
        for j, v in enumerate(row):
            c = gcd(c, v // 2 if i == j else v)
    if c == 0:
        raise PreconditionError("content of the zero matrix is undefined")
    return c


def discriminant(T: HalfIntegralMatrix) -> int:
    d = det_gram(T)
    if T.n % 2 == 0:
        return d
    if d % 2:
        # для полуцелой T нечётного размера det(2T) всегда чётен
        raise InvariantError(f"det(2T) = {d} is odd for odd size {T.n}")
    return d // 2


def is_fundamental(T: HalfIntegralMatrix) -> bool:
    return is_odd_squarefree(discriminant(T))


def is_positive_definite(T: HalfIntegralMatrix) -> bool:
    g = T.gram
    return all(_det(tuple(row[:k] for row in g[:k])) > 0 for k in range(1, T.n + 1))


def is_positive_semidefinite(T: HalfIntegralMatrix) -> bool:
    """Все главные миноры (не только угловые) неотрицательны."""
    g = T.gram
    for k in range(1, T.n + 1):
        for idx in itertools.combinations(range(T.n), k):
            if _det(tuple(tuple(g[i][j] for j in idx) for i in idx)) < 0:
                return False
    return True


def trace(T: HalfIntegralMatrix) -> int:
    return sum(T.gram[i][i] for i in range(T.n)) // 2


def _check_dim(T: HalfIntegralMatrix, x: Sequence[int]) -> None:
    if len(x) != T.n:
        raise PreconditionError(f"vector of length {len(x)} does not match size {T.n}")


def evaluate(T: HalfIntegralMatrix, x: Sequence[int]) -> Fraction:
    """T[x] = xᵀ T x = xᵀ·gram·x / 2."""
    _check_dim(T, x)
    g = T.gram
    total = sum(x[i] * g[i][j] * x[j] for i in range(T.n) for j in range(T.n))
    return Fraction(total, 2)


def act(T: HalfIntegralMatrix, U: UnimodularMatrix | Sequence[Sequence[int]]) -> HalfIntegralMatrix:
    """Uᵀ T U."""
    u = U.entries if isinstance(U, UnimodularMatrix) else _as_matrix(U)
    g = Matrix(T.gram)
    m = Matrix(u)
    return HalfIntegralMatrix(_as_matrix((m.T * g * m).tolist()))


# ---- Блоки ---------------------------------------------------------------------


def block_split(T: HalfIntegralMatrix) -> Tuple[int, IntVector, HalfIntegralMatrix]:
    """T = [[t, r/2], [rᵀ/2, 𝔗]]."""
    if T.n < 2:
        raise PreconditionError("block_split needs size at least 2")
    g = T.gram
    t = g[0][0] // 2
    r = tuple(g[0][1:])
    lower = HalfIntegralMatrix(tuple(row[1:] for row in g[1:]))
    return t, r, lower


def assemble_block(t: int, r: Sequence[int], lower: HalfIntegralMatrix) -> HalfIntegralMatrix:
    if len(r) != lower.n:
        raise PreconditionError(f"row of length {len(r)} does not match block size {lower.n}")
    top = (2 * t,) + tuple(r)
    rest = tuple((r[i],) + lower.gram[i] for i in range(lower.n))
    return HalfIntegralMatrix((top,) + rest)


# ---- Обратная матрица и T^{-1}[μ/2] ---------------------------------------------


@lru_cache(maxsize=None)
def inverse_gram(T: HalfIntegralMatrix) -> Tuple[Tuple[Fraction, ...], ...]:
    if det_gram(T) == 0:
        raise PreconditionError(f"gram {T} is singular")
    inv = Matrix(T.gram).inv()
    return tuple(
        tuple(Fraction(int(v.p), int(v.q)) for v in inv.row(i)) for i in range(T.n)
    )


def mu_value(T: HalfIntegralMatrix, mu: Sequence[int]) -> Fraction:
    """T^{-1}[μ/2] = μᵀ·gram^{-1}·μ / 2."""
    _check_dim(T, mu)
    inv = inverse_gram(T)
    total = sum(mu[i] * inv[i][j] * mu[j] for i in range(T.n) for j in range(T.n))
    return total / 2


def max_mu_denominator(T: HalfIntegralMatrix) -> int:
    d = discriminant(T)
    return d if T.n % 2 == 0 else 4 * d


def mu_denominator(T: HalfIntegralMatrix, mu: Sequence[int]) -> int:
    return mu_value(T, mu).denominator


def is_primitive_mu(T: HalfIntegralMatrix, mu: Sequence[int]) -> bool:
    return mu_denominator(T, mu) == max_mu_denominator(T)


def block_discriminant_identity(
    ell: int, mu: Sequence[int], lower: HalfIntegralMatrix
) -> Tuple[Fraction, Fraction]:
    """
    (disc блочной матрицы, D·(ℓ - 𝔗^{-1}[μ/2])), D = d_𝔗 или 4d_𝔗.
    Равенство двух компонент — проверяемое тождество.
    """
    big = assemble_block(ell, mu, lower)
    lhs = Fraction(discriminant(big))
    rhs = max_mu_denominator(lower) * (ell - mu_value(lower, mu))
    return lhs, rhs


# ---- Смежные классы Z^n / gram·Z^n ----------------------------------------------


@lru_cache(maxsize=None)
def _hermite_lower(T: HalfIntegralMatrix) -> IntMatrix:
    """
    Нижнетреугольный базис решётки gram·Z^n (по столбцам), диагональ > 0.
    HNF sympy верхнетреугольна; разворот координат J·W·J делает её нижней.
    """
    if det_gram(T) == 0:
        raise PreconditionError(f"gram {T} is singular")
    n = T.n
    flipped = Matrix(n, n, lambda i, j: T.gram[n - 1 - i][n - 1 - j])
    W = hermite_normal_form(flipped)
    lower = [[int(W[n - 1 - i, n - 1 - j]) for j in range(n)] for i in range(n)]
    return tuple(tuple(lower[i][j] for i in range(n)) for j in range(n))


def invariant_factors(T: HalfIntegralMatrix) -> IntVector:
    """Инвариантные множители Z^n / gram·Z^n (диагональ формы Смита, d_1 | d_2 | …)."""
    if det_gram(T) == 0:
        raise PreconditionError(f"gram {T} is singular")
    S = smith_normal_form(Matrix(T.gram), domain=ZZ)
    return tuple(sorted(abs(int(S[i, i])) for i in range(T.n)))


def reduce_mod(T: HalfIntegralMatrix, x: Sequence[int]) -> IntVector:
    """Канонический представитель класса x mod gram·Z^n: 0 <= x_i < H_ii."""
    _check_dim(T, x)
    cols = _hermite_lower(T)
    v = list(x)
    for i in range(T.n):
        h = cols[i]
        q = v[i] // h[i]
        if q:
            v = [a - q * b for a, b in zip(v, h)]
    return tuple(v)


def same_coset(T: HalfIntegralMatrix, x: Sequence[int], y: Sequence[int]) -> bool:
    return reduce_mod(T, x) == reduce_mod(T, y)


@lru_cache(maxsize=None)
def _cosets(T: HalfIntegralMatrix) -> Tuple[IntVector, ...]:
    cols = _hermite_lower(T)
    ranges = [range(cols[i][i]) for i in range(T.n)]
    return tuple(tuple(x) for x in itertools.product(*ranges))


def cosets(T: HalfIntegralMatrix) -> List[IntVector]:
    """|det(2T)| представителей в лексикографическом порядке."""
    if not is_positive_definite(T):
        raise PreconditionError(f"cosets need a positive definite index, got {T}")
    return list(_cosets(T))


@lru_cache(maxsize=None)
def coset_excess(T: HalfIntegralMatrix, mu: IntVector) -> int:
    """
    T^{-1}[μ/2] - min_{r ≡ μ} T^{-1}[r/2] = max_x -(xᵀμ + T[x]), r = μ + gram·x.
    Перебор x в шаре вокруг вещественного минимума x* = -gram^{-1}μ:
    T[x - x*] = xᵀμ + T[x] + T^{-1}[μ/2] и T[y] >= λ_min·|y|².
    """
    if not is_positive_definite(T):
        raise PreconditionError(f"coset excess needs a positive definite index, got {T}")
    _check_dim(T, mu)
    inv = inverse_gram(T)
    center = [-sum(inv[i][j] * mu[j] for j in range(T.n)) for i in range(T.n)]

    def shift(x: Sequence[int]) -> Fraction:
        return sum(a * b for a, b in zip(x, mu)) + evaluate(T, x)

    best = shift([round(c) for c in center])
    lam = float(np.linalg.eigvalsh(np.array(T.gram, dtype=float)).min()) / 2
    radius = math.isqrt(int(float(best + mu_value(T, mu)) / lam)) + 1
    ranges = [range(math.floor(c) - radius, math.ceil(c) + radius + 1) for c in center]
    for x in itertools.product(*ranges):
        best = min(best, shift(x))
    if best.denominator != 1 or best > 0:
        raise InvariantError(f"coset excess of {mu} for {T} is not a nonnegative integer: {-best}")
    return int(-best)


# ---- Локальная нормализация при нечётном p ---------------------------------------


def local_normalize_odd(T: HalfIntegralMatrix, p: int, f: int) -> UnimodularMatrix:
    """
    U с Uᵀ·gram·U ≡ diag(u_1, …, u_{n-1}, u_n·p) mod p^f, все u_i — единицы.
    Симметричная диагонализация над Z/p^f; det U = +1.
    """
    if p == 2:
        raise UnsupportedCaseError("2-adic normalization is not supported")
    if p < 2 or not isprime(p):
        raise PreconditionError(f"{p} is not a prime")
    if f < 2:
        raise PreconditionError(f"exponent f must be at least 2, got {f}")
    d = det_gram(T)
    if d % p:
        raise PreconditionError(f"{p} does not divide det(gram) = {d}")
    if d % (p * p) == 0:
        raise UnsupportedCaseError(f"{p}^2 divides det(gram) = {d}")

    n, q = T.n, p**f
    M = [[v % q for v in row] for row in T.gram]
    U = [[int(i == j) for j in range(n)] for i in range(n)]

    def swap(a: int, b: int) -> None:
        M[a], M[b] = M[b], M[a]
        for row in M:
            row[a], row[b] = row[b], row[a]
        for row in U:
            row[a], row[b] = row[b], row[a]

    def add_col(dst: int, src: int, c: int) -> None:
        # базисная замена e_dst += c·e_src (и строка, и столбец)
        for row in M:
            row[dst] = (row[dst] + c * row[src]) % q
        for k in range(n):
            M[dst][k] = (M[dst][k] + c * M[src][k]) % q
        for row in U:
            row[dst] += c * row[src]

    for k in range(n):
        piv = next((i for i in range(k, n) if M[i][i] % p), None)
        if piv is None:
            pair = next(
                ((i, j) for i in range(k, n) for j in range(k, n) if i != j and M[i][j] % p),
                None,
            )
            if pair is None:
                # остался блок, целиком делящийся на p; при p ∥ det он размера 1
                if k != n - 1:
                    raise InvariantError(f"no unit pivot at step {k} for p = {p}")
                break
            add_col(pair[0], pair[1], 1)
            piv = pair[0]
        if piv != k:
            swap(k, piv)
        inv = inverse_mod(M[k][k], q)
        for j in range(k + 1, n):
            if M[k][j]:
                add_col(j, k, (-M[k][j] * inv) % q)

    if _det(_as_matrix(U)) < 0:
        for row in U:
            row[-1] = -row[-1]
    result = UnimodularMatrix(_as_matrix(U))
    if not is_locally_normalized(T, result, p, f):
        raise InvariantError(f"local normalization at p = {p} failed for {T}")
    return result


def is_locally_normalized(
    T: HalfIntegralMatrix, U: UnimodularMatrix | Sequence[Sequence[int]], p: int, f: int
) -> bool:
    q = p**f
    M = act(T, U).gram
    n = len(M)
    for i in range(n):
        for j in range(n):
            if i != j and M[i][j] % q:
                return False
    diag = [M[i][i] % q for i in range(n)]
    if any(v % p == 0 for v in diag[:-1]):
        return False
    last = diag[-1]
    return last % p == 0 and (last // p) % p != 0


@dataclass(frozen=True)
class LocalNormalization:
    """Нормализации по всем нечётным p | d_T и их общий подъём в SL_n(Z)."""

    per_prime: Dict[int, UnimodularMatrix]
    modulus: int
    combined: IntMatrix


Transvection = Tuple[int, int, int]  # (i, j, c): строка_i += c·строка_j


def _apply_rows(A: List[List[int]], ops: List[Transvection], op: Transvection) -> None:
    i, j, c = op
    if c:
        A[i] = [a + c * b for a, b in zip(A[i], A[j])]
        ops.append(op)


def transvection_word(U: UnimodularMatrix) -> List[Transvection]:
    """
    U ∈ SL_n(Z) как произведение элементарных матриц E_ij(c) = I + c·e_ij:
    U = E(w_1)·E(w_2)·…·E(w_k). Столбцы обнуляются алгоритмом Евклида строками,
    пары -1 на диагонали снимаются через (E_ab(1)·E_ba(-1)·E_ab(1))² = -I.
    """
    if U.det != 1:
        raise PreconditionError(f"{U.entries} is not in SL_n(Z)")
    n = U.n
    A = [list(row) for row in U.entries]
    ops: List[Transvection] = []
    for k in range(n):
        for i in range(k + 1, n):
            while A[i][k]:
                if A[k][k] == 0:
                    _apply_rows(A, ops, (k, i, 1))
                    continue
                _apply_rows(A, ops, (i, k, -(A[i][k] // A[k][k])))
                if A[i][k]:
                    _apply_rows(A, ops, (k, i, -(A[k][k] // A[i][k])))
    for k in range(n - 1, -1, -1):
        for i in range(k):
            _apply_rows(A, ops, (i, k, -A[i][k] * A[k][k]))
    negative = [k for k in range(n) if A[k][k] == -1]
    if len(negative) % 2:
        raise InvariantError(f"odd number of -1 pivots while factoring {U.entries}")
    for a, b in zip(negative[::2], negative[1::2]):
        for _ in range(2):
            for op in ((a, b, 1), (b, a, -1), (a, b, 1)):
                _apply_rows(A, ops, op)
    if any(A[i][j] != int(i == j) for i in range(n) for j in range(n)):
        raise InvariantError(f"row reduction of {U.entries} did not reach the identity")
    # E_k…E_1·U = I, значит U = E_1^{-1}…E_k^{-1}
    return [(i, j, -c) for i, j, c in ops]


def _from_word(n: int, word: List[Transvection]) -> Matrix:
    out = Matrix.eye(n)
    for i, j, c in word:
        E = Matrix.eye(n)
        E[i, j] = c
        out = out * E
    return out


def local_normalize(T: HalfIntegralMatrix, f: int = 2) -> LocalNormalization:
    """
    Общий U ∈ SL_n(Z), нормализующий gram по модулю p^f сразу для всех нечётных p | d_T.
    Слово из трансвекций для U_p переносится с коэффициентами c' ≡ c (p^f), c' ≡ 0 (M/p^f):
    такой множитель ≡ U_p по модулю p^f и ≡ I по остальным.
    """
    primes = [p for p in prime_divisors(discriminant(T)) if p != 2]
    per_prime = {p: local_normalize_odd(T, p, f) for p in primes}
    modulus = math.prod(p**f for p in primes)
    combined = Matrix.eye(T.n)
    for p, U in per_prime.items():
        q = p**f
        word = [(i, j, crt_pair(c % q, q, 0, modulus // q)) for i, j, c in transvection_word(U)]
        combined = combined * _from_word(T.n, word)
    result = _as_matrix(combined.tolist())
    if _det(result) != 1 or not all(is_locally_normalized(T, result, p, f) for p in primes):
        raise InvariantError(f"combined normalization failed for {T}")
    return LocalNormalization(per_prime, modulus, result)
