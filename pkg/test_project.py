# test_project.py
from __future__ import annotations

from pathlib import Path

import pytest

from project import _format_complex, _int_list, cmd_epsilon_check, cmd_gauss, cmd_rank_check, main
from synthetic import make_fixtures

THETA_FILE = Path(__file__).parent / "data" / "theta_fixtures.json"

# ---------- фикстуры ----------


@pytest.fixture()
def fixtures_dir(tmp_path: Path) -> Path:
    """Плановые файлы коэффициентов во временной папке."""
    out = tmp_path / "fixtures"
    make_fixtures(out)
    return out


@pytest.fixture()
def out_dir(tmp_path: Path) -> Path:
    return tmp_path / "reports"


# ---------- вспомогательные ----------


def test_format_complex():
    assert _format_complex(complex(0, 1.7320508075688772)) == "0 + 1.7320508i"
    assert _format_complex(complex(-2, -0.5)) == "-2 - 0.5i"
    assert _format_complex(complex(1e-17, -1e-17)) == "0 + 0i"


def test_int_list():
    assert _int_list("3, 5,7") == [3, 5, 7]
    assert _int_list("") == []


# ---------- gauss ----------


def test_gauss_value_and_embedding(capsys):
    assert main(["gauss", "1", "0", "3"]) == 0
    out = capsys.readouterr().out
    assert "1 + 2*z3" in out
    assert "0 + 1.7320508i" in out


def test_gauss_degenerate_values():
    assert cmd_gauss(0, 2, 4).rows[0]["value"] == "0"
    assert cmd_gauss(1, 0, 1).rows[0]["value"] == "1"


def test_gauss_closed_form_check(capsys):
    assert main(["gauss", "3", "0", "8", "--closed-form-check"]) == 0
    assert "Closed form agrees: True" in capsys.readouterr().out
    # b ≠ 0: закрытой формы нет
    assert cmd_gauss(1, 1, 3, closed_form_check=True).rows[0]["closed_form"] == "n/a"


def test_gauss_bad_modulus_is_input_error(capsys):
    assert main(["gauss", "1", "0", "0"]) == 3
    assert "Input error" in capsys.readouterr().err


# ---------- rank-check ----------


@pytest.mark.parametrize("dmax", ["1", "7"])
def test_rank_check_small(dmax, capsys):
    assert main(["--quiet", "rank-check", "--dmax", dmax]) == 0


def test_rank_check_tsv(capsys):
    assert main(["--tsv", "--quiet", "rank-check", "--dmax", "3"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0].split("\t")[:3] == ["case", "a", "d"]


def test_rank_check_rows_match_sweep():
    report = cmd_rank_check(5)
    assert report.outcome == "pass"
    assert [(r["a"], r["d"]) for r in report.rows][:2] == [(0, 1), (1, 3)]


def test_rank_check_needs_positive_dmax(capsys):
    assert main(["rank-check", "--dmax", "0"]) == 3


# ---------- theta-check ----------


def test_theta_check_single_fixture(capsys):
    assert main(["theta-check", "--fixtures", "T=1", "--fixtures-file", str(THETA_FILE)]) == 0
    out = capsys.readouterr().out
    assert "Largest deviation" in out


def test_theta_check_two_fixtures(capsys):
    sel = "T=2;T=[[2,1],[1,2]]"
    assert main(["--quiet", "--tsv", "theta-check", "--fixtures", sel, "--fixtures-file", str(THETA_FILE)]) == 0
    rows = capsys.readouterr().out.splitlines()[1:]
    assert {r.split("\t")[0] for r in rows} == {"T=2", "T=[[2,1],[1,2]]"}


def test_theta_check_tiny_tolerance_fails(capsys):
    code = main(["theta-check", "--fixtures", "T=1", "--fixtures-file", str(THETA_FILE), "--tol", "1e-30"])
    assert code == 1


def test_theta_check_unknown_fixture(capsys):
    assert main(["theta-check", "--fixtures", "nope", "--fixtures-file", str(THETA_FILE)]) == 3


# ---------- make-fixtures / decompose ----------


def test_make_fixtures_command(tmp_path, capsys):
    out = tmp_path / "fx"
    assert main(["--out", str(out), "make-fixtures", "--seed", "1"]) == 0
    assert (out / "siegel_genus3.txt").exists()
    assert "fixture files" in capsys.readouterr().out


def test_decompose_writes_components(fixtures_dir, out_dir, capsys):
    assert main(["--out", str(out_dir), "decompose", str(fixtures_dir / "jacobi_random.txt")]) == 0
    assert list(out_dir.glob("jacobi_random_mu_*.txt"))
    out = capsys.readouterr().out
    assert "Reassembly reproduces every record: True" in out
    assert "Wrote " in out


# ---------- ez ----------


def test_ez_trivial_twist(fixtures_dir, out_dir, capsys):
    assert main(["--out", str(out_dir), "ez", str(fixtures_dir / "jacobi_ez_p5.txt")]) == 0
    assert (out_dir / "jacobi_ez_p5_ez.txt").exists()
    assert "Parity mismatch" not in capsys.readouterr().out


def test_ez_odd_twist_vanishes(fixtures_dir, out_dir, capsys):
    # χ(2) = i: ε(-1) = -1, чётность не совпадает
    code = main(["--out", str(out_dir), "ez", str(fixtures_dir / "jacobi_ez_p5.txt"), "--eps", "chi:5:1/4"])
    assert code == 0
    out = capsys.readouterr().out
    assert "Parity mismatch" in out
    assert "identically zero" in out


def test_ez_rejects_composite_index(tmp_path, capsys):
    path = tmp_path / "j15.txt"
    path.write_text("k=10 index_gram=[[30]] maxn=3\nn=1 r=[1] coeff=1\n", encoding="utf-8")
    assert main(["--out", str(tmp_path), "ez", str(path)]) == 3


# ---------- hunt ----------


def test_hunt_genus3_coprime_to_five(fixtures_dir, capsys):
    assert main(["hunt", str(fixtures_dir / "siegel_genus3.txt"), "--coprime-to", "5"]) == 0
    assert "disc 11" in capsys.readouterr().out


def test_hunt_truncated_is_inconclusive(fixtures_dir, capsys):
    assert main(["hunt", str(fixtures_dir / "siegel_truncated.txt")]) == 2
    out = capsys.readouterr().out
    assert "Inconclusive: no fundamental coefficient within bound" in out
    assert "INCONCLUSIVE" in out


def test_hunt_coprimality_filter(fixtures_dir, capsys):
    assert main(["hunt", str(fixtures_dir / "siegel_genus2.txt"), "--coprime-to", "7"]) == 2
    assert "coprimality filter" in capsys.readouterr().out


def test_hunt_explain(fixtures_dir, capsys):
    assert main(["hunt", str(fixtures_dir / "siegel_genus3.txt"), "--coprime-to", "5", "--explain"]) == 0
    out = capsys.readouterr().out
    assert "Pipeline trace:" in out
    assert "  located:" in out


def test_hunt_missing_file(tmp_path, capsys):
    assert main(["hunt", str(tmp_path / "none.txt")]) == 3


# ---------- sieve ----------


def test_sieve_chain_command(fixtures_dir, out_dir, capsys):
    qfile = fixtures_dir / "qexp_rescale-then-sieve.txt"
    assert main(["--out", str(out_dir), "sieve", str(qfile), "--primes", "3,5"]) == 0
    assert (out_dir / "qexp_rescale-then-sieve_sieved.txt").exists()
    out = capsys.readouterr().out
    assert "p = 3: rescale" in out
    assert "p = 5: sieve" in out


def test_sieve_bad_prime_is_error_row(fixtures_dir, out_dir, capsys):
    qfile = fixtures_dir / "qexp_sieve-even.txt"
    assert main(["--out", str(out_dir), "--quiet", "sieve", str(qfile), "--primes", "4"]) == 1
    assert not (out_dir / "qexp_sieve-even_sieved.txt").exists()


# ---------- тождества ----------


def test_gauss_identities_small(capsys):
    assert main(["--quiet", "gauss-identities", "--samples", "20", "--cmax", "15"]) == 0


def test_tensor_check_small(capsys):
    assert main(["--quiet", "tensor-check", "--d", "15"]) == 0
    out = capsys.readouterr().out
    assert "d=15 p=3" in out and "d=15 p=5" in out


# ---------- epsilon-check ----------


def test_epsilon_check_binary_index(capsys):
    assert main(["epsilon-check", "[[2,1],[1,8]]"]) == 0
    out = capsys.readouterr().out
    assert "scalar formula agrees: True" in out
    assert "0 below maximal rank" in out


def test_epsilon_check_rows():
    report = cmd_epsilon_check("[[30]]", N=7)
    assert report.outcome == "pass"
    assert report.rows[0]["check"] == "scalar-reduction"
    assert dict(report.params)["m"] == 1
    assert all(r["rank"] == r["cols"] for r in report.rows[1:])


@pytest.mark.parametrize("gram", ["[[4]]", "[[2,1],[1,8]", "[[3]]"])
def test_epsilon_check_bad_index(gram, capsys):
    assert main(["epsilon-check", gram]) == 3
    assert "Input error" in capsys.readouterr().err


# ---------- argparse / языки ----------


def test_usage_errors_exit_with_three(capsys):
    with pytest.raises(SystemExit) as e:
        main(["rank-check"])
    assert e.value.code == 3
    with pytest.raises(SystemExit) as e:
        main(["sieve", "x.txt", "--primes", "3,a"])
    assert e.value.code == 3


def test_french_output(capsys):
    assert main(["--lang", "fr", "gauss", "1", "0", "1"]) == 0
    out = capsys.readouterr().out
    assert "Valeur complexe" in out
    assert "RÉUSSI" in out


# ---------- граничные файлы ----------


def test_decompose_empty_file(tmp_path, capsys):
    path = tmp_path / "empty.txt"
    path.write_text("k=10 index_gram=[[2]] maxn=3\n", encoding="utf-8")
    assert main(["--out", str(tmp_path), "decompose", str(path)]) == 0
    assert "0 nonzero components" in capsys.readouterr().out


def test_decompose_conflicting_records(tmp_path, capsys):
    path = tmp_path / "bad.txt"
    path.write_text("k=10 index_gram=[[2]] maxn=5\nn=1 r=[1] coeff=2\nn=1 r=[-1] coeff=5\n", encoding="utf-8")
    assert main(["--out", str(tmp_path), "decompose", str(path)]) == 3


def test_sieve_without_primes_is_identity(fixtures_dir, out_dir, capsys):
    qfile = fixtures_dir / "qexp_sieve-even.txt"
    assert main(["--out", str(out_dir), "--quiet", "--tsv", "sieve", str(qfile)]) == 0
    rows = capsys.readouterr().out.splitlines()[1:]
    assert len(rows) == 1 and "\trelation\t" in rows[0]
