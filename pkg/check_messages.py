#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Валидатор сообщений CLI:
- синхронизация ключей с базовым языком
- пустые строки
- одинаковые плейсхолдеры {name} во всех языках (иначе .format упадёт)
- алиасы (цель существует, циклов нет)
- ключи, которые CLI ни разу не запрашивает
"""

import re
import string
import sys
from pathlib import Path
from typing import Dict, Iterable, List, Set, Tuple

from messages import ALIASES, messages

BASE_LANG = "en"
LANGS = sorted(messages.keys())
# файлы, где ключи передаются в t(); исходы отчёта идут через алиасы
SOURCES = ("project.py", "report.py")
_LITERAL = re.compile(r"\"([a-z_]+(?:\.[a-z_]+)*)\"")


def resolve_alias_chain(start: str, aliases: Dict[str, str]) -> Tuple[str, List[str], bool]:
    """(целевой_ключ, цепочка, есть_цикл)"""
    seen: List[str] = []
    cur = start
    while cur in aliases:
        if cur in seen:
            return cur, seen + [cur], True
        seen.append(cur)
        cur = aliases[cur]
    return cur, seen, False


def alias_errors(msgs: Dict[str, Dict[str, str]], aliases: Dict[str, str]) -> List[str]:
    out = []
    for src in aliases:
        target, chain, is_cycle = resolve_alias_chain(src, aliases)
        if is_cycle:
            out.append(f"alias cycle: {' -> '.join(chain)}")
        elif target not in msgs.get(BASE_LANG, {}):
            out.append(f"alias '{src}' resolves to '{target}', missing in '{BASE_LANG}'")
    return out


def sync_errors(msgs: Dict[str, Dict[str, str]]) -> List[str]:
    out = []
    base_keys = set(msgs.get(BASE_LANG, {}))
    for lang in LANGS:
        cur = msgs.get(lang, {})
        missing = sorted(base_keys - set(cur))
        extra = sorted(set(cur) - base_keys)
        if missing:
            out.append(f"[{lang}] missing keys: {missing}")
        if extra:
            out.append(f"[{lang}] keys not in {BASE_LANG}: {extra}")
        empty = [k for k, v in cur.items() if not v.strip()]
        if empty:
            out.append(f"[{lang}] empty translations: {empty}")
    return out


def placeholders(template: str) -> Set[str]:
    return {name for _, name, _, _ in string.Formatter().parse(template) if name}


def placeholder_errors(msgs: Dict[str, Dict[str, str]]) -> List[str]:
    out = []
    for key, base in msgs.get(BASE_LANG, {}).items():
        want = placeholders(base)
        for lang in LANGS:
            text = msgs.get(lang, {}).get(key)
            if text is not None and placeholders(text) != want:
                out.append(f"[{lang}] '{key}' placeholders {sorted(placeholders(text))} != {sorted(want)}")
    return out


def used_literals(sources: Iterable[str]) -> Set[str]:
    found: Set[str] = set()
    for text in sources:
        found.update(_LITERAL.findall(text))
    return found


def unused_keys(msgs: Dict[str, Dict[str, str]], aliases: Dict[str, str], sources: Iterable[str]) -> List[str]:
    used = {resolve_alias_chain(k, aliases)[0] for k in used_literals(sources)}
    return sorted(k for k in msgs.get(BASE_LANG, {}) if k not in used)


def read_sources() -> List[str]:
    here = Path(__file__).parent
    return [(here / name).read_text(encoding="utf-8") for name in SOURCES]


def main() -> None:
    print("=== Checking CLI messages ===")
    print(f"Base language: {BASE_LANG}; languages: {', '.join(LANGS)}")

    errors = alias_errors(messages, ALIASES) + sync_errors(messages) + placeholder_errors(messages)
    errors += [f"unused key: {k}" for k in unused_keys(messages, ALIASES, read_sources())]
    for e in errors:
        print(f"ERROR: {e}")

    print(f"\nErrors: {len(errors)}")
    sys.exit(1 if errors else 0)


if __name__ == "__main__":
    main()
