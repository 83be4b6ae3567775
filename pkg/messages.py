# messages.py

from typing import Optional

messages = {
    "en": {
        "outcome.pass": "PASS",
        "outcome.fail": "FAIL",
        "outcome.inconclusive": "INCONCLUSIVE",
        "report.summary": "{rows} rows, {failed} failed, outcome {outcome} ({seconds:.2f}s)",
        "report.empty": "No rows.",
        "files.written": "Wrote {path}",
        "errors.input": "Input error: {error}",
        "gauss.value": "G({a}, {b}, {c}) = {value}",
        "gauss.embedding": "Complex value: {value}",
        "gauss.closed_form": "Closed form agrees: {ok}",
        "rank.summary": "{count} triples checked, {failed} failures",
        "theta.max_deviation": "Largest deviation: {value:.3e}",
        "decompose.components": "{nonzero} nonzero components out of {total}",
        "decompose.roundtrip": "Reassembly reproduces every record: {ok}",
        "ez.parity_zero": "Parity mismatch: the twisted expansion is expected to vanish.",
        "ez.zero": "Twisted expansion is identically zero below q^{bound}.",
        "hunt.found": "Fundamental T = {T}, disc {disc}",
        "hunt.inconclusive": "Inconclusive: {reason}",
        "hunt.trace": "Pipeline trace:",
        "sieve.branch": "p = {prime}: {branch}",
        "fixtures.count": "Wrote {count} fixture files to {path}",
        "epsilon.reduction": "U = {U}, m = {m}, D = {order}; scalar formula agrees: {ok}",
        "epsilon.summary": "{count} classes checked, {failed} below maximal rank",
    },
    "fr": {
        "outcome.pass": "RÉUSSI",
        "outcome.fail": "ÉCHEC",
        "outcome.inconclusive": "NON CONCLUANT",
        "report.summary": "{rows} lignes, {failed} en échec, résultat {outcome} ({seconds:.2f}s)",
        "report.empty": "Aucune ligne.",
        "files.written": "Fichier écrit : {path}",
        "errors.input": "Erreur d'entrée : {error}",
        "gauss.value": "G({a}, {b}, {c}) = {value}",
        "gauss.embedding": "Valeur complexe : {value}",
        "gauss.closed_form": "Forme close concordante : {ok}",
        "rank.summary": "{count} triplets vérifiés, {failed} échecs",
        "theta.max_deviation": "Écart maximal : {value:.3e}",
        "decompose.components": "{nonzero} composantes non nulles sur {total}",
        "decompose.roundtrip": "La recomposition reproduit chaque enregistrement : {ok}",
        "ez.parity_zero": "Parité incompatible : le développement tordu doit s'annuler.",
        "ez.zero": "Le développement tordu est nul en dessous de q^{bound}.",
        "hunt.found": "T fondamentale = {T}, disc {disc}",
        "hunt.inconclusive": "Non concluant : {reason}",
        "hunt.trace": "Trace du pipeline :",
        "sieve.branch": "p = {prime} : {branch}",
        "fixtures.count": "{count} fichiers de fixtures écrits dans {path}",
        "epsilon.reduction": "U = {U}, m = {m}, D = {order} ; formule scalaire concordante : {ok}",
        "epsilon.summary": "{count} classes vérifiées, {failed} sous le rang maximal",
    },
    "es": {
        "outcome.pass": "CORRECTO",
        "outcome.fail": "FALLO",
        "outcome.inconclusive": "NO CONCLUYENTE",
        "report.summary": "{rows} filas, {failed} fallidas, resultado {outcome} ({seconds:.2f}s)",
        "report.empty": "Sin filas.",
        "files.written": "Archivo escrito: {path}",
        "errors.input": "Error de entrada: {error}",
        "gauss.value": "G({a}, {b}, {c}) = {value}",
        "gauss.embedding": "Valor complejo: {value}",
        "gauss.closed_form": "La forma cerrada coincide: {ok}",
        "rank.summary": "{count} tripletas verificadas, {failed} fallos",
        "theta.max_deviation": "Desviación máxima: {value:.3e}",
        "decompose.components": "{nonzero} componentes no nulas de {total}",
        "decompose.roundtrip": "La recomposición reproduce cada registro: {ok}",
        "ez.parity_zero": "Paridad incompatible: la expansión torcida debe anularse.",
        "ez.zero": "La expansión torcida es nula por debajo de q^{bound}.",
        "hunt.found": "T fundamental = {T}, disc {disc}",
        "hunt.inconclusive": "No concluyente: {reason}",
        "hunt.trace": "Traza del proceso:",
        "sieve.branch": "p = {prime}: {branch}",
        "fixtures.count": "{count} archivos de fixtures escritos en {path}",
        "epsilon.reduction": "U = {U}, m = {m}, D = {order}; la fórmula escalar coincide: {ok}",
        "epsilon.summary": "{count} clases verificadas, {failed} por debajo del rango máximo",
    },
}

# --- aliases ---
ALIASES = {
    # исход отчёта -> подпись
    "pass": "outcome.pass",
    "fail": "outcome.fail",
    "inconclusive": "outcome.inconclusive",
}


def _resolve_alias(key: str) -> str:
    seen = set()
    cur = key
    while cur in ALIASES:
        if cur in seen:
            break
        seen.add(cur)
        cur = ALIASES[cur]
    return cur


def t(key: str, lang: str, default: Optional[str] = None) -> str:
    """Перевод ключа key для языка lang (через алиасы).
    Нет языка — берём английский; нет перевода или он пуст — default или сам ключ.
    """
    real_key = _resolve_alias(key)
    lang_dict = messages.get(lang, messages["en"])
    val = lang_dict.get(real_key)
    if val is None or val.strip() == "":
        return default if default is not None else real_key
    return val
