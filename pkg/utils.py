# utils.py — общие исключения, целочисленные хелперы и загрузка JSON-конфигов
from __future__ import annotations

import json
from fractions import Fraction
from math import gcd
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional

from sympy import factorint, isprime

DATA_DIR = Path("data")
FIXTURES_DIR = DATA_DIR / "fixtures"
THETA_FIXTURES_FILE = DATA_DIR / "theta_fixtures.json"


# ---- Исключения --------------------------------------------------------------


class ArithmeticDomainError(ValueError):
    """Операция не определена (обращение нуля и т.п.)."""


class BranchCutError(ValueError):
    """Аргумент корня слишком близко к отрицательной вещественной полуоси."""


class PreconditionError(ValueError):
    pass


class UnsupportedCaseError(ValueError):
    """Случай сознательно не поддерживается (p = 2, p² | det и т.п.)."""


class DataConflictError(ValueError):
    """Два представителя одного класса с разными коэффициентами."""


class FormatError(ValueError):
    pass


class InvariantError(AssertionError):
    """Нарушен внутренний инвариант — это баг, а не плохой ввод."""


# ---- JSON-конфиги ------------------------------------------------------------


def load_json_config(
    filename: Optional[str | Path] = None,
    file_path: Optional[str | Path] = None,
    default: Optional[str | Path] = None,
) -> Dict[str, Any]:
    """
    Загружаем JSON-конфиг.
    Порядок выбора файла:
    1) filename (если передан)
    2) file_path (если передан)
    3) default (например THETA_FIXTURES_FILE)
    Нет файла — пустой словарь.
    """
    if filename is not None:
        path = Path(filename)
    elif file_path is not None:
        path = Path(file_path)
    elif default is not None:
        path = Path(default)
    else:
        return {}

    if path.exists():
        with path.open("r", encoding="utf-8") as f:
            return json.load(f)
    return {}


def save_json_config(payload: Dict[str, Any], filename: str | Path) -> None:
    path = Path(filename)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8") as f:
        json.dump(payload, f, indent=2, ensure_ascii=False)


# ---- Рациональные числа в текстовом виде --------------------------------------


def parse_fraction(text: str) -> Fraction:
    """'3/2' | '-7' | '0' -> Fraction. Пробелы игнорируются."""
    s = "".join(str(text).split())
    if not s:
        raise FormatError("empty rational")
    try:
        return Fraction(s)
    except (ValueError, ZeroDivisionError) as e:
        raise FormatError(f"bad rational: {text!r}") from e


def format_fraction(x: Fraction | int) -> str:
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


# ---- Целочисленные хелперы ----------------------------------------------------


def is_squarefree(n: int) -> bool:
    if n == 0:
        return False
    return all(e == 1 for e in factorint(abs(n)).values())


def is_odd_squarefree(n: int) -> bool:
    return n % 2 == 1 and is_squarefree(n)


def prime_divisors(n: int) -> List[int]:
    return sorted(factorint(abs(n)).keys()) if abs(n) > 1 else []


def require_odd_prime(p: int) -> None:
    if p % 2 == 0 or not isprime(p):
        raise PreconditionError(f"{p} is not an odd prime")


def divisors(n: int) -> List[int]:
    n = abs(n)
    out = [1]
    for p, e in factorint(n).items():
        out = [d * p**k for d in out for k in range(e + 1)]
    return sorted(out)


def units(n: int) -> List[int]:
    """(Z/n)^x по возрастанию; для n = 1 — [0] (единственный класс)."""
    if n == 1:
        return [0]
    return [a for a in range(n) if gcd(a, n) == 1]


def inverse_mod(a: int, n: int) -> int:
    if n == 1:
        return 0
    try:
        return pow(a, -1, n)
    except ValueError as e:
        raise PreconditionError(f"{a} is not invertible modulo {n}") from e


def crt_pair(a: int, m: int, b: int, n: int) -> int:
    """x ≡ a (m), x ≡ b (n) для взаимно простых m, n; результат в [0, mn)."""
    if gcd(m, n) != 1:
        raise PreconditionError(f"moduli {m}, {n} are not coprime")
    x = a + m * ((b - a) * inverse_mod(m, n) % n)
    return x % (m * n)


def odd_squarefree_upto(dmax: int) -> List[int]:
    return [d for d in range(1, dmax + 1, 2) if is_squarefree(d)]


def lcm_all(values: Iterable[int]) -> int:
    out = 1
    for v in values:
        out = out * v // gcd(out, v)
    return out
