# synthetic.py — синтетические и «посаженные» наборы данных для проверок
"""
Всё детерминировано по seed (numpy Generator).
Ничего не печатаем: функции возвращают данные, make_fixtures пишет файлы.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Dict, List, Optional, Tuple

import numpy as np

from charsums import DirichletCharacter
from datafiles import save_jacobi, save_qexp, save_siegel
from jacobi import JacobiFormData, SiegelFormData, jacobi_from_components
from qexp import QExpansion, from_terms
from quadform import HalfIntegralMatrix, IntVector, cosets, discriminant, is_positive_definite, mu_value
from utils import FIXTURES_DIR, PreconditionError

Components = Dict[IntVector, Dict[int, Fraction]]


def _rng(seed: int | np.random.Generator) -> np.random.Generator:
    return seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)


def _nonzero(rng: np.random.Generator, span: int = 5) -> Fraction:
    v = int(rng.integers(1, span + 1)) * (1 if rng.random() < 0.5 else -1)
    return Fraction(v)


# ---- Случайные формы Якоби --------------------------------------------------------


def random_index(rng: np.random.Generator, max_disc: int = 30, max_size: int = 2) -> HalfIntegralMatrix:
    """Положительно определённый индекс размера 1..max_size с 0 < d_T <= max_disc."""
    size = int(rng.integers(1, max_size + 1))
    while True:
        if size == 1:
            m = int(rng.integers(1, min(max_disc, 8) + 1))
            T = HalfIntegralMatrix(((2 * m,),))
        else:
            a, c = (int(x) for x in rng.integers(1, 5, size=2))
            b = int(rng.integers(-2, 3))
            T = HalfIntegralMatrix(((2 * a, b), (b, 2 * c)))
        if is_positive_definite(T) and 0 < discriminant(T) <= max_disc:
            return T


def random_components(
    T: HalfIntegralMatrix, maxn: int, rng: np.random.Generator, density: float = 0.4
) -> Components:
    """Случайные h_μ: c(ℓ, μ) только при ℓ >= T^{-1}[μ/2] (полуопределённость)."""
    comps: Components = {}
    for mu in cosets(T):
        if rng.random() > density:
            continue
        start = math.ceil(mu_value(T, mu))
        series = {ell: _nonzero(rng) for ell in range(start, maxn) if rng.random() < 0.5}
        if series:
            comps[mu] = series
    return comps


def random_jacobi_dataset(
    seed: int | np.random.Generator, maxn: int = 5, max_disc: int = 30
) -> Tuple[JacobiFormData, Components]:
    """φ, построенная из выбранных h_μ; второй элемент — сами h_μ (оракул разложения)."""
    rng = _rng(seed)
    T = random_index(rng, max_disc)
    comps = random_components(T, maxn, rng)
    weight = int(rng.integers(2, 13))
    phi = jacobi_from_components(T, weight, comps, maxn, spread=1)
    return phi, comps


# ---- Симметричные данные для отображения Эйхлера-Загира ----------------------------------


def symmetric_ez_dataset(
    p: int,
    k: int,
    chi: Optional[DirichletCharacter] = None,
    maxn: Optional[int] = None,
    seed: int = 0,
) -> JacobiFormData:
    """
    Индекс p (gram [[2p]]), c_{-μ} = χ(-1)(-1)^k·c_μ.
    Партнёр (ℓ, μ) — (ℓ + p - μ, 2p - μ); при μ ∈ {0, p} и знаке -1 коэффициент нулевой.
    c(1, 1) = 1 посажен всегда.
    """
    chi = chi or DirichletCharacter.trivial()
    rng = _rng(seed)
    maxn = maxn if maxn is not None else 2 * p
    sign = chi.parity() * (-1) ** k
    T = HalfIntegralMatrix.scalar(p)
    comps: Components = {}

    def put(mu: int, ell: int, c: Fraction) -> None:
        comps.setdefault((mu,), {})[ell] = c

    for mu in range(p + 1):
        start = math.ceil(Fraction(mu * mu, 4 * p))
        for ell in range(start, maxn):
            partner = ell + p - mu
            if partner >= maxn:
                break
            planted = mu == 1 and ell == 1
            if not planted and rng.random() > 0.5:
                continue
            c = Fraction(1) if planted else _nonzero(rng)
            if mu in (0, p):
                if sign == 1:
                    put(mu, ell, c)
                continue
            put(mu, ell, c)
            put(2 * p - mu, partner, c * sign)
    return jacobi_from_components(T, k, comps, maxn, level=chi.modulus, character=chi, spread=1)


# ---- Посаженные данные Зигеля -------------------------------------------------------------


PLANTED_LOWER = HalfIntegralMatrix(((2, 1), (1, 2)))


def _genus3_block(ell: int, r: Tuple[int, int]) -> HalfIntegralMatrix:
    return HalfIntegralMatrix(((2 * ell, r[0], r[1]), (r[0], 2, 1), (r[1], 1, 2)))


def planted_siegel_genus3(weight: int = 10) -> SiegelFormData:
    """
    Блок 𝔗 = [[2,1],[1,2]] (d = 3), μ = (1,0): d_T = 3ℓ - 1.
    ℓ = 2 -> 5, ℓ = 3 -> 8 (чётный шум), ℓ = 4 -> 11; плюс непримитивная компонента μ = 0.
    """
    F = SiegelFormData(genus=3, maxtrace=6, weight=weight)
    F.add(_genus3_block(2, (1, 0)), 1)
    F.add(_genus3_block(3, (1, 0)), -2)
    F.add(_genus3_block(4, (1, 0)), 3)
    F.add(_genus3_block(2, (0, 0)), 3)
    return F


def planted_siegel_genus2(weight: int = 10) -> SiegelFormData:
    """[[1, 1/2], [1/2, 9]]: d_T = 35."""
    F = SiegelFormData(genus=2, maxtrace=10, weight=weight)
    F.add(HalfIntegralMatrix(((2, 1), (1, 18))), 1)
    F.add(HalfIntegralMatrix(((2, 0), (0, 18))), 4)
    return F


def truncated_siegel(weight: int = 10) -> SiegelFormData:
    """Только нефундаментальные коэффициенты: поиск даёт «inconclusive»."""
    F = SiegelFormData(genus=2, maxtrace=4, weight=weight)
    F.add(HalfIntegralMatrix(((2, 0), (0, 2))), 1)
    F.add(HalfIntegralMatrix(((4, 2), (2, 4))), -1)
    return F


# ---- Фикстуры просеивания ------------------------------------------------------------------


@dataclass(frozen=True)
class SieveFixture:
    name: str
    expansion: QExpansion
    primes: Tuple[int, ...]
    branches: Tuple[str, ...]
    result: Dict[int, Fraction]
    ell: int


def sieve_fixtures() -> List[SieveFixture]:
    """Ручные цепочки: ветки и итоговые коэффициенты посчитаны заранее."""
    return [
        SieveFixture(
            "rescale-then-sieve",
            from_terms({3: 1, 9: 2, 15: 4}, bound=16, level=36),
            (3, 5),
            ("rescale", "sieve"),
            {1: Fraction(1), 3: Fraction(2)},
            3,
        ),
        SieveFixture(
            "sieve-even",
            from_terms({1: 1, 2: 3, 4: 5, 5: 7}, bound=6),
            (2,),
            ("sieve",),
            {1: Fraction(1), 5: Fraction(7)},
            1,
        ),
        SieveFixture(
            "double-rescale",
            from_terms({9: 1, 18: -1, 45: 2}, bound=46, level=36),
            (3, 3, 5),
            ("rescale", "rescale", "sieve"),
            {1: Fraction(1), 2: Fraction(-1)},
            9,
        ),
    ]


# ---- Запись файлов ----------------------------------------------------------------------------


def make_fixtures(out_dir: str | Path = FIXTURES_DIR, seed: int = 0) -> List[Path]:
    out = Path(out_dir)
    if out.exists() and not out.is_dir():
        raise PreconditionError(f"{out} is not a directory")
    written = [
        save_siegel(planted_siegel_genus3(), out / "siegel_genus3.txt"),
        save_siegel(planted_siegel_genus2(), out / "siegel_genus2.txt"),
        save_siegel(truncated_siegel(), out / "siegel_truncated.txt"),
        save_jacobi(symmetric_ez_dataset(5, 10, seed=seed), out / "jacobi_ez_p5.txt"),
        save_jacobi(random_jacobi_dataset(seed)[0], out / "jacobi_random.txt"),
    ]
    for fx in sieve_fixtures():
        written.append(save_qexp(fx.expansion, out / f"qexp_{fx.name}.txt"))
    return written
