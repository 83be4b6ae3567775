# datafiles.py — построчные текстовые форматы коэффициентов (Зигель, Якоби, q-разложения)
"""
Общие правила:
  - одна запись или заголовок на строку, поля key=value;
  - пробелы внутри строки не значимы, '#' — комментарий, пустые строки пропускаются;
  - рациональные числа p/q, круговые — cyc(m:c0,c1,...).
"""

from __future__ import annotations

import json
import re
from pathlib import Path
from typing import Dict, Iterator, List, Sequence, Tuple

from charsums import parse_character
from exactarith import CycNumber
from jacobi import JacobiFormData, SiegelFormData
from qexp import Coefficient, QExpansion
from quadform import HalfIntegralMatrix
from utils import FormatError, format_fraction, parse_fraction

SIEGEL_HEADER = ("genus", "level", "char", "maxtrace", "weight")
SIEGEL_RECORD = ("gram", "coeff")
JACOBI_HEADER = ("k", "index_gram", "level", "char", "maxn")
JACOBI_RECORD = ("n", "r", "coeff")
QEXP_HEADER = ("offset", "weight2", "level", "char", "bound")
QEXP_RECORD = ("exp", "coeff")


# ---- Разбор строк -------------------------------------------------------------------


def _fields(line: str, keys: Sequence[str], lineno: int) -> Dict[str, str]:
    pattern = re.compile(r"(?<![A-Za-z_])(" + "|".join(sorted(keys, key=len, reverse=True)) + r")\s*=")
    matches = list(pattern.finditer(line))
    if not matches or line[: matches[0].start()].strip():
        raise FormatError(f"line {lineno}: cannot parse {line.strip()!r}")
    out: Dict[str, str] = {}
    for i, m in enumerate(matches):
        end = matches[i + 1].start() if i + 1 < len(matches) else len(line)
        key = m.group(1)
        if key in out:
            raise FormatError(f"line {lineno}: duplicate field {key!r}")
        out[key] = "".join(line[m.end() : end].split())
    return out


def _lines(text: str) -> Iterator[Tuple[int, str]]:
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        if line.strip():
            yield lineno, line


def _classify(
    text: str, header_keys: Sequence[str], record_keys: Sequence[str]
) -> Tuple[Dict[str, str], List[Tuple[int, Dict[str, str]]]]:
    header: Dict[str, str] = {}
    records: List[Tuple[int, Dict[str, str]]] = []
    all_keys = tuple(header_keys) + tuple(record_keys)
    for lineno, line in _lines(text):
        fields = _fields(line, all_keys, lineno)
        if set(fields) <= set(header_keys):
            for k, v in fields.items():
                if k in header:
                    raise FormatError(f"line {lineno}: header {k!r} repeated")
                header[k] = v
        elif set(fields) == set(record_keys):
            records.append((lineno, fields))
        else:
            raise FormatError(f"line {lineno}: unexpected field set {sorted(fields)}")
    return header, records


def _int(value: str, what: str, lineno: int | None = None) -> int:
    try:
        return int(value)
    except ValueError as e:
        where = f"line {lineno}: " if lineno else ""
        raise FormatError(f"{where}{what} must be an integer, got {value!r}") from e


def _json(value: str, what: str, lineno: int | None = None) -> object:
    try:
        return json.loads(value)
    except json.JSONDecodeError as e:
        where = f"line {lineno}: " if lineno else ""
        raise FormatError(f"{where}bad {what}: {value!r}") from e


def _require(header: Dict[str, str], keys: Sequence[str], kind: str) -> None:
    missing = [k for k in keys if k not in header]
    if missing:
        raise FormatError(f"{kind} file is missing header(s): {', '.join(missing)}")


# ---- Коэффициенты -----------------------------------------------------------------------


def parse_coefficient(text: str) -> Coefficient:
    s = "".join(text.split())
    m = re.fullmatch(r"cyc\((\d+):([^)]*)\)", s)
    if not m:
        return parse_fraction(s)
    order = int(m.group(1))
    coeffs = tuple(parse_fraction(x) for x in m.group(2).split(","))
    try:
        x = CycNumber(order, coeffs)
    except ValueError as e:
        raise FormatError(f"bad cyclotomic coefficient {text!r}: {e}") from e
    return x.as_rational() if x.is_rational() else x


def format_coefficient(c: Coefficient) -> str:
    if isinstance(c, CycNumber):
        if c.is_rational():
            return format_fraction(c.as_rational())
        return f"cyc({c.order}:" + ",".join(format_fraction(v) for v in c.coeffs) + ")"
    return format_fraction(c)


def _vec(v: Sequence[int]) -> str:
    return "[" + ",".join(str(x) for x in v) + "]"


def parse_gram(text: str) -> HalfIntegralMatrix:
    """Разбор "[[2,1],[1,8]]" в T с gram = 2T."""
    gram = _json(text, "gram")
    if not isinstance(gram, list) or not all(isinstance(row, list) for row in gram):
        raise FormatError(f"gram must be a list of rows, got {text!r}")
    return HalfIntegralMatrix(gram)  # type: ignore[arg-type]


# ---- Зигель ----------------------------------------------------------------------------


def parse_siegel(text: str) -> SiegelFormData:
    header, records = _classify(text, SIEGEL_HEADER, SIEGEL_RECORD)
    _require(header, ("genus", "maxtrace"), "Siegel")
    F = SiegelFormData(
        genus=_int(header["genus"], "genus"),
        maxtrace=_int(header["maxtrace"], "maxtrace"),
        level=_int(header.get("level", "1"), "level"),
        character=parse_character(header.get("char", "trivial:1")),
        weight=_int(header["weight"], "weight") if "weight" in header else None,
    )
    for lineno, rec in records:
        gram = _json(rec["gram"], "gram", lineno)
        try:
            T = HalfIntegralMatrix(gram)  # type: ignore[arg-type]
            coeff = parse_fraction(rec["coeff"])
            F.add(T, coeff)
        except (ValueError, TypeError) as e:
            raise type(e)(f"line {lineno}: {e}") from e
    return F


def format_siegel(F: SiegelFormData) -> str:
    lines = [f"genus={F.genus}", f"level={F.level}", f"char={F.character.label}", f"maxtrace={F.maxtrace}"]
    if F.weight is not None:
        lines.append(f"weight={F.weight}")
    for T, c in sorted(F.coeffs.items(), key=lambda kv: kv[0].gram):
        lines.append(f"gram={T} coeff={format_fraction(c)}")
    return "\n".join(lines) + "\n"


# ---- Якоби ------------------------------------------------------------------------------


def parse_jacobi(text: str) -> JacobiFormData:
    header, records = _classify(text, JACOBI_HEADER, JACOBI_RECORD)
    _require(header, ("k", "index_gram", "maxn"), "Jacobi")
    index = HalfIntegralMatrix(_json(header["index_gram"], "index_gram"))  # type: ignore[arg-type]
    phi = JacobiFormData(
        weight=_int(header["k"], "k"),
        index=index,
        level=_int(header.get("level", "1"), "level"),
        character=parse_character(header.get("char", "trivial:1")),
        maxn=_int(header["maxn"], "maxn"),
    )
    for lineno, rec in records:
        n = _int(rec["n"], "n", lineno)
        r = _json(rec["r"], "r", lineno)
        if not isinstance(r, list) or not all(isinstance(v, int) for v in r):
            raise FormatError(f"line {lineno}: r must be a list of integers")
        try:
            phi.add(n, r, parse_fraction(rec["coeff"]))
        except ValueError as e:
            raise type(e)(f"line {lineno}: {e}") from e
    return phi


def format_jacobi(phi: JacobiFormData) -> str:
    lines = [
        f"k={phi.weight}",
        f"index_gram={phi.index}",
        f"level={phi.level}",
        f"char={phi.character.label}",
        f"maxn={phi.maxn}",
    ]
    for n, r, c in phi.records:
        lines.append(f"n={n} r={_vec(r)} coeff={format_fraction(c)}")
    return "\n".join(lines) + "\n"


# ---- q-разложения -------------------------------------------------------------------------


def parse_qexp(text: str) -> QExpansion:
    header, records = _classify(text, QEXP_HEADER, QEXP_RECORD)
    _require(header, ("offset",), "Q-expansion")
    coeffs: Dict[int, Coefficient] = {}
    for lineno, rec in records:
        e = _int(rec["exp"], "exp", lineno)
        if e in coeffs:
            raise FormatError(f"line {lineno}: exponent {e} repeated")
        coeffs[e] = parse_coefficient(rec["coeff"])
    bound = _int(header["bound"], "bound") if "bound" in header else (max(coeffs) + 1 if coeffs else 0)
    return QExpansion(
        offset=parse_fraction(header["offset"]),
        coeffs=coeffs,
        bound=bound,
        weight2=_int(header.get("weight2", "0"), "weight2"),
        level=_int(header.get("level", "1"), "level"),
        character="".join(header.get("char", "trivial:1").split()),
    )


def format_qexp(f: QExpansion) -> str:
    head = (
        f"offset={format_fraction(f.offset)} weight2={f.weight2} level={f.level} "
        f"char={f.character} bound={f.bound}"
    )
    lines = [head] + [f"exp={e} coeff={format_coefficient(c)}" for e, c in sorted(f.coeffs.items())]
    return "\n".join(lines) + "\n"


# ---- Файлы --------------------------------------------------------------------------------


def _read(path: str | Path) -> str:
    p = Path(path)
    if not p.exists():
        raise FormatError(f"file not found: {p}")
    return p.read_text(encoding="utf-8")


def _write(path: str | Path, text: str) -> Path:
    p = Path(path)
    p.parent.mkdir(parents=True, exist_ok=True)
    p.write_text(text, encoding="utf-8")
    return p


def load_siegel(path: str | Path) -> SiegelFormData:
    return parse_siegel(_read(path))


def save_siegel(F: SiegelFormData, path: str | Path) -> Path:
    return _write(path, format_siegel(F))


def load_jacobi(path: str | Path) -> JacobiFormData:
    return parse_jacobi(_read(path))


def save_jacobi(phi: JacobiFormData, path: str | Path) -> Path:
    return _write(path, format_jacobi(phi))


def load_qexp(path: str | Path) -> QExpansion:
    return parse_qexp(_read(path))


def save_qexp(f: QExpansion, path: str | Path) -> Path:
    return _write(path, format_qexp(f))
