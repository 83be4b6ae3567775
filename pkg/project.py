# project.py — CLI пакетной проверки: суммы Гаусса, ранги ε-матриц, тета-законы,
# разложения Якоби, отображение Эйхлера-Загира, поиск фундаментальных коэффициентов
from __future__ import annotations

import argparse
import sys
from math import gcd
from pathlib import Path
from typing import List, Optional, Sequence

import numpy as np

from charsums import (
    complete_square_check,
    gauss_factor_check,
    gauss_square_norm_check,
    gauss_sum,
    gauss_sum_closed_form,
    parse_character,
)
from datafiles import load_jacobi, load_qexp, load_siegel, parse_gram, save_qexp
from epsmat import (
    CASES,
    build_general,
    class_representatives,
    epsilon_reduction_check,
    rank_certified,
    scalar_reduction,
    sweep,
    tensor_split_check,
)
from exactarith import embed
from jacobi import (
    canonical_key,
    ez_bound,
    ez_parity_predicts_zero,
    ez_twist,
    explain_hunt,
    hunt_fundamental,
    recompose_coefficient,
    scalar_prime_index,
    theta_decompose,
)
from messages import t
from qexp import SieveResult, sieve_chain, sieve_relation_check
from quadform import discriminant, is_primitive_mu
from report import EXIT_USAGE, Report, timed
from synthetic import make_fixtures
from theta import fixtures_from_config, theta_S_law, theta_T_law
from utils import (
    FIXTURES_DIR,
    THETA_FIXTURES_FILE,
    FormatError,
    load_json_config,
    odd_squarefree_upto,
    prime_divisors,
    units,
)

REPORTS_DIR = Path("reports")
DEFAULT_TOL = 1e-8
LANG = "en"
# en / fr / es


# --------------------------- разбор аргументов ---------------------------


def _int_list(text: str) -> List[int]:
    """'3,5,7' -> [3, 5, 7]; пустая строка -> []."""
    parts = [p for p in "".join(text.split()).split(",") if p]
    try:
        return [int(p) for p in parts]
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from e


def _format_complex(z: complex) -> str:
    def num(x: float) -> str:
        s = f"{x:.7f}".rstrip("0").rstrip(".")
        return "0" if s in ("-0", "") else s

    sign = "-" if z.imag < 0 and num(abs(z.imag)) != "0" else "+"
    return f"{num(z.real)} {sign} {num(abs(z.imag))}i"


# --------------------------- подкоманды ---------------------------


def cmd_gauss(a: int, b: int, c: int, closed_form_check: bool = False) -> Report:
    report = Report("gauss", [("a", a), ("b", b), ("c", c)])
    with timed(report):
        g = gauss_sum(a, b, c)
        approx = embed(g)
        row = {"value": str(g), "embedding": _format_complex(approx.value), "status": "pass"}
        if closed_form_check:
            if b == 0 and gcd(a, c) == 1:
                ok = approx.close_to(gauss_sum_closed_form(a, c), 1e-9)
                if c % 2:
                    ok = ok and gauss_square_norm_check(a, c)
                row["closed_form"] = "agree" if ok else "differ"
                row["status"] = "pass" if ok else "fail"
            else:
                row["closed_form"] = "n/a"
        report.add(**row)
    return report


def cmd_rank_check(dmax: int, case: str = "lemma", jobs: int = 1) -> Report:
    report = Report("rank-check", [("dmax", dmax), ("case", case), ("jobs", jobs)])
    with timed(report):
        report.extend([r.as_row() for r in sweep(dmax, case, jobs)])
    return report


def _select_fixtures(payload: dict, selection: str):  # type: ignore[no-untyped-def]
    fixtures = fixtures_from_config(payload)
    if selection == "all":
        chosen = fixtures
    else:
        names = {s.strip() for s in selection.split(";") if s.strip()}
        chosen = [f for f in fixtures if f.name in names]
    if not chosen:
        raise FormatError(f"no theta fixtures match {selection!r}")
    return chosen


def cmd_theta_check(selection: str = "all", tol: float = DEFAULT_TOL, fixtures_file: Optional[Path] = None) -> Report:
    report = Report("theta-check", [("fixtures", selection), ("tol", tol)])
    with timed(report):
        payload = load_json_config(fixtures_file, default=THETA_FIXTURES_FILE)
        for fx in _select_fixtures(payload, selection):
            for pt in fx.points:
                for law, fn in (("T", theta_T_law), ("S", theta_S_law)):
                    chk = fn(fx.index, pt.mu, pt.tau, list(pt.z), tol)
                    report.add(
                        fixture=fx.name,
                        mu=str(list(pt.mu)),
                        tau=_format_complex(pt.tau),
                        law=law,
                        deviation=f"{chk.deviation:.3e}",
                        err_bound=f"{chk.err_bound:.3e}",
                        status="pass" if chk.passed else "fail",
                    )
    return report


def cmd_decompose(jacobi_file: Path, out_dir: Path = REPORTS_DIR) -> Report:
    report = Report("decompose", [("file", jacobi_file)])
    with timed(report):
        phi = load_jacobi(jacobi_file)
        comps = theta_decompose(phi)
        by_mu = {mu: [] for mu in comps}  # type: ignore[var-annotated]
        for n, r, c in phi.records:
            by_mu[canonical_key(phi.index, n, r)[1]].append((n, r, c))
        stem = Path(jacobi_file).stem
        for mu, h in comps.items():
            ok = all(recompose_coefficient(comps, phi.index, n, r) == c for n, r, c in by_mu[mu])
            path = save_qexp(h, Path(out_dir) / f"{stem}_mu_{'_'.join(map(str, mu))}.txt")
            report.add(
                mu=str(list(mu)),
                offset=str(h.offset),
                terms=len(h.coeffs),
                records=len(by_mu[mu]),
                primitive=is_primitive_mu(phi.index, mu),
                file=path.name,
                status="pass" if ok else "fail",
            )
    return report


def cmd_ez(jacobi_file: Path, eps_spec: str, chi_p: str = "chi_p", out_dir: Path = REPORTS_DIR) -> Report:
    report = Report("ez", [("file", jacobi_file), ("eps", eps_spec), ("chi_p", chi_p)])
    with timed(report):
        phi = load_jacobi(jacobi_file)
        eps = parse_character(eps_spec)
        p = scalar_prime_index(phi.index)
        h = ez_twist(phi, eps, chi_p)
        predicted_zero = ez_parity_predicts_zero(phi, eps)
        path = save_qexp(h, Path(out_dir) / f"{Path(jacobi_file).stem}_ez.txt")
        report.add(
            p=p,
            k=phi.weight,
            eps=eps.label,
            bound=ez_bound(p, phi.maxn),
            terms=len(h.coeffs),
            predicted_zero=predicted_zero,
            zero=h.is_zero(),
            level=h.level,
            file=path.name,
            # на несовпадении чётности ненулевой выход противоречит критерию
            status="fail" if predicted_zero and not h.is_zero() else "pass",
        )
    return report


def cmd_hunt(siegel_file: Path, coprime_to: int = 1, explain: bool = False) -> Report:
    report = Report("hunt", [("file", siegel_file), ("coprime_to", coprime_to)])
    with timed(report):
        F = load_siegel(siegel_file)
        res = hunt_fundamental(F, coprime_to)
        for T in res.found:
            report.add(T=str(T), disc=discriminant(T), coeff=str(F.coefficient(T)), reason="", status="pass")
        if res.inconclusive:
            report.add(T="-", disc="", coeff="", reason=res.reason, status="inconclusive")
        if explain:
            ex = explain_hunt(F, coprime_to)
            report.trace = [f"{s.stage}: {s.detail}" for s in ex.steps]
    return report


def cmd_sieve(qexp_file: Path, primes: Sequence[int], out_dir: Path = REPORTS_DIR) -> Report:
    report = Report("sieve", [("file", qexp_file), ("primes", ",".join(map(str, primes)))])
    with timed(report):
        f = load_qexp(qexp_file)
        result: Optional[SieveResult] = sieve_chain(f, [])
        for i, p in enumerate(primes):
            try:
                result = sieve_chain(f, primes[: i + 1])
            except ValueError as e:
                report.add(prime=p, branch="-", level="", character="", ell="", note=str(e), status="error")
                result = None
                break
            step = result.steps[-1]
            report.add(
                prime=p,
                branch=step.branch,
                level=step.level,
                character=step.character,
                ell=step.ell,
                note="",
                status="pass",
            )
        if result is not None:
            ok = sieve_relation_check(f, result)
            path = save_qexp(result.expansion, Path(out_dir) / f"{Path(qexp_file).stem}_sieved.txt")
            report.add(
                prime="-",
                branch="relation",
                level=result.expansion.level,
                character=result.expansion.character,
                ell=result.ell,
                note=path.name,
                status="pass" if ok else "fail",
            )
    return report


def cmd_make_fixtures(out_dir: Path = FIXTURES_DIR, seed: int = 0) -> Report:
    report = Report("make-fixtures", [("out", out_dir), ("seed", seed)])
    with timed(report):
        for path in make_fixtures(out_dir, seed):
            report.add(file=str(path), status="pass")
    return report


def _identity_row(identity: str, scope: str, results: List[bool]) -> dict:
    failures = results.count(False)
    return {
        "identity": identity,
        "scope": scope,
        "checked": len(results),
        "failures": failures,
        "status": "pass" if failures == 0 else "fail",
    }


def cmd_gauss_identities(samples: int = 500, seed: int = 0, cmax: int = 105) -> Report:
    report = Report("gauss-identities", [("samples", samples), ("seed", seed), ("cmax", cmax)])
    with timed(report):
        for p in (3, 5, 7, 11, 13):
            for N in (1, 5, 7, 11):
                if gcd(N, 2 * p) != 1:
                    continue
                results = [
                    gauss_factor_check(p, N, mu, eta) for mu in range(2 * p) for eta in range(2 * p)
                ]
                report.add(**_identity_row("gauss-factor", f"p={p} N={N}", results))

        rng = np.random.default_rng(seed)
        ds = odd_squarefree_upto(cmax)
        results = []
        while len(results) < samples:
            d = int(rng.choice(ds))
            m, N = (int(x) for x in rng.integers(1, 8 * d, size=2))
            if gcd(m, 4 * d) != 1 or gcd(N, 4 * d) != 1:
                continue
            s, r = (int(x) for x in rng.integers(0, 2 * d, size=2))
            results.append(complete_square_check(m, N, d, s, r))
        report.add(**_identity_row("complete-square", f"{samples} random tuples", results))

        norms = [gauss_square_norm_check(a, c) for c in ds for a in units(c)]
        report.add(**_identity_row("square-norm", f"odd square-free c<={cmax}", norms))
    return report


def cmd_tensor_check(ds: Sequence[int] = (15, 21, 35, 105)) -> Report:
    report = Report("tensor-check", [("d", ",".join(map(str, ds)))])
    with timed(report):
        for d in ds:
            for p in prime_divisors(d):
                results = [tensor_split_check(a, d, s0, p) for a in units(d) for s0 in range(d)]
                report.add(**_identity_row("tensor-split", f"d={d} p={p}", results))
    return report


def cmd_epsilon_check(gram: str, N: int = 1) -> Report:
    report = Report("epsilon-check", [("gram", gram), ("N", N)])
    with timed(report):
        T = parse_gram(gram)
        red = scalar_reduction(T)
        report.params.extend([("U", [list(row) for row in red.U]), ("m", red.m), ("D", red.order)])
        ok = epsilon_reduction_check(T, N)
        report.add(
            check="scalar-reduction",
            mu0="-",
            rows="",
            cols="",
            rank="",
            method="",
            status="pass" if ok else "fail",
        )
        for mu0 in class_representatives(T):
            E = build_general(T, N, mu0)
            rank, method = rank_certified(E.entries)
            n_rows, n_cols = E.shape
            report.add(
                check="primitive" if E.primitive else "imprimitive",
                mu0=str(list(mu0)),
                rows=n_rows,
                cols=n_cols,
                rank=rank,
                method=method,
                status="pass" if rank == E.expected_rank else "fail",
            )
    return report


# --------------------------- argparse ---------------------------


class _Parser(argparse.ArgumentParser):
    """Ошибка разбора аргументов -> код 3."""

    def error(self, message: str) -> None:  # type: ignore[override]
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _build_argparser() -> argparse.ArgumentParser:
    p = _Parser(description="Exact verification of Fourier-coefficient machinery for Siegel cusp forms")
    p.add_argument("--lang", type=str, default=LANG, choices=("en", "fr", "es"))
    p.add_argument("--tsv", action="store_true", help="Tab-separated table instead of aligned text")
    p.add_argument("--quiet", action="store_true", help="Print only the table")
    p.add_argument("--out", type=Path, default=None, help="Directory for emitted files")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("gauss", help="Generalized quadratic Gauss sum G(a,b,c)")
    s.add_argument("a", type=int)
    s.add_argument("b", type=int)
    s.add_argument("c", type=int)
    s.add_argument("--closed-form-check", action="store_true")

    s = sub.add_parser("rank-check", help="Rank sweep of epsilon matrices")
    s.add_argument("--dmax", type=int, required=True)
    s.add_argument("--case", choices=CASES, default="lemma")
    s.add_argument("--jobs", type=int, default=1)

    s = sub.add_parser("theta-check", help="Theta transformation laws on fixtures")
    s.add_argument("--fixtures", type=str, default="all", help="'all' or fixture names separated by ';'")
    s.add_argument("--fixtures-file", type=Path, default=None)
    s.add_argument("--tol", type=float, default=DEFAULT_TOL)

    s = sub.add_parser("decompose", help="Theta decomposition of a Jacobi coefficient file")
    s.add_argument("jacobi_file", type=Path)

    s = sub.add_parser("ez", help="Twisted Eichler-Zagier map of a prime-index Jacobi file")
    s.add_argument("jacobi_file", type=Path)
    s.add_argument("--eps", type=str, default="trivial:1")
    s.add_argument("--chi-p", type=str, default="chi_p")

    s = sub.add_parser("hunt", help="Search a Siegel coefficient file for fundamental T")
    s.add_argument("siegel_file", type=Path)
    s.add_argument("--coprime-to", type=int, default=1)
    s.add_argument("--explain", action="store_true")

    s = sub.add_parser("sieve", help="Sieve/rescale chain on a q-expansion file")
    s.add_argument("qexp_file", type=Path)
    s.add_argument("--primes", type=_int_list, default=[])

    s = sub.add_parser("make-fixtures", help="Write planted and synthetic coefficient files")
    s.add_argument("--seed", type=int, default=0)

    s = sub.add_parser("gauss-identities", help="Exact Gauss-sum identity sweeps")
    s.add_argument("--samples", type=int, default=500)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--cmax", type=int, default=105)

    s = sub.add_parser("tensor-check", help="Tensor factorization of epsilon matrices")
    s.add_argument("--d", type=_int_list, default=[15, 21, 35, 105])

    s = sub.add_parser("epsilon-check", help="Unreduced epsilon(mu, eta) matrices of an index T")
    s.add_argument("gram", type=str, help="2T as JSON, e.g. [[2,1],[1,8]]")
    s.add_argument("--N", type=int, default=1)
    return p


def run(args: argparse.Namespace) -> Report:
    out = args.out if args.out is not None else REPORTS_DIR
    if args.command == "gauss":
        return cmd_gauss(args.a, args.b, args.c, args.closed_form_check)
    if args.command == "rank-check":
        return cmd_rank_check(args.dmax, args.case, args.jobs)
    if args.command == "theta-check":
        return cmd_theta_check(args.fixtures, args.tol, args.fixtures_file)
    if args.command == "decompose":
        return cmd_decompose(args.jacobi_file, out)
    if args.command == "ez":
        return cmd_ez(args.jacobi_file, args.eps, args.chi_p, out)
    if args.command == "hunt":
        return cmd_hunt(args.siegel_file, args.coprime_to, args.explain)
    if args.command == "sieve":
        return cmd_sieve(args.qexp_file, args.primes, out)
    if args.command == "make-fixtures":
        return cmd_make_fixtures(args.out if args.out is not None else FIXTURES_DIR, args.seed)
    if args.command == "gauss-identities":
        return cmd_gauss_identities(args.samples, args.seed, args.cmax)
    if args.command == "epsilon-check":
        return cmd_epsilon_check(args.gram, args.N)
    return cmd_tensor_check(args.d)


def _notes(report: Report, lang: str) -> List[str]:
    """Строки состояния над таблицей, по подкоманде."""
    rows = report.rows
    notes: List[str] = []
    if report.subcommand == "gauss" and rows:
        a, b, c = (v for _, v in report.params)
        notes.append(t("gauss.value", lang).format(a=a, b=b, c=c, value=rows[0]["value"]))
        notes.append(t("gauss.embedding", lang).format(value=rows[0]["embedding"]))
        if rows[0].get("closed_form") in ("agree", "differ"):
            notes.append(t("gauss.closed_form", lang).format(ok=rows[0]["closed_form"] == "agree"))
    elif report.subcommand == "rank-check":
        notes.append(t("rank.summary", lang).format(count=len(rows), failed=report.count("fail") + report.count("error")))
    elif report.subcommand == "theta-check" and rows:
        worst = max(float(r["deviation"]) for r in rows)
        notes.append(t("theta.max_deviation", lang).format(value=worst))
    elif report.subcommand == "decompose":
        nonzero = sum(1 for r in rows if r["terms"])
        notes.append(t("decompose.components", lang).format(nonzero=nonzero, total=len(rows)))
        notes.append(t("decompose.roundtrip", lang).format(ok=report.outcome == "pass"))
        for r in rows:
            notes.append(t("files.written", lang).format(path=r["file"]))
    elif report.subcommand == "ez" and rows:
        if rows[0]["predicted_zero"]:
            notes.append(t("ez.parity_zero", lang))
        if rows[0]["zero"]:
            notes.append(t("ez.zero", lang).format(bound=rows[0]["bound"]))
        notes.append(t("files.written", lang).format(path=rows[0]["file"]))
    elif report.subcommand == "hunt":
        for r in rows:
            if r["status"] == "pass":
                notes.append(t("hunt.found", lang).format(T=r["T"], disc=r["disc"]))
            else:
                notes.append(t("hunt.inconclusive", lang).format(reason=r["reason"]))
        if report.trace:
            notes.append(t("hunt.trace", lang))
            notes.extend(f"  {line}" for line in report.trace)
    elif report.subcommand == "sieve":
        for r in rows:
            if r["branch"] in ("sieve", "rescale"):
                notes.append(t("sieve.branch", lang).format(prime=r["prime"], branch=r["branch"]))
            elif r["branch"] == "relation":
                notes.append(t("files.written", lang).format(path=r["note"]))
    elif report.subcommand == "make-fixtures":
        out = dict(report.params)["out"]
        notes.append(t("fixtures.count", lang).format(count=len(rows), path=out))
    elif report.subcommand == "epsilon-check" and rows:
        params = dict(report.params)
        ok = rows[0]["status"] == "pass"
        text = t("epsilon.reduction", lang)
        notes.append(text.format(U=params["U"], m=params["m"], order=params["D"], ok=ok))
        failed = sum(1 for r in rows[1:] if r["status"] == "fail")
        notes.append(t("epsilon.summary", lang).format(count=len(rows) - 1, failed=failed))
    return notes


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = _build_argparser().parse_args(argv)
    lang = args.lang
    try:
        report = run(args)
    except (ValueError, OSError) as e:
        print(t("errors.input", lang).format(error=e), file=sys.stderr)
        return EXIT_USAGE

    if not args.quiet:
        print(report.header())
        for line in _notes(report, lang):
            print(line)
    table = report.render(tsv=args.tsv)
    print(table if table else t("report.empty", lang))
    if not args.quiet:
        failed = report.count("fail") + report.count("error")
        print(
            t("report.summary", lang).format(
                rows=len(report.rows), failed=failed, outcome=t(report.outcome, lang), seconds=report.timing
            )
        )
    return report.exit_code


if __name__ == "__main__":
    sys.exit(main())
