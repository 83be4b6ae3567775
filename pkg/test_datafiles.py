# test_datafiles.py
from fractions import Fraction

import pytest

from datafiles import (
    format_coefficient,
    load_jacobi,
    load_qexp,
    load_siegel,
    parse_coefficient,
    parse_gram,
    parse_jacobi,
    parse_qexp,
    parse_siegel,
    save_jacobi,
    save_qexp,
    save_siegel,
)
from exactarith import root_of_unity
from qexp import QExpansion
from quadform import HalfIntegralMatrix
from synthetic import make_fixtures, planted_siegel_genus3, symmetric_ez_dataset
from utils import DataConflictError, FormatError, PreconditionError

SIEGEL_TEXT = """
# Siegel data
genus = 2
level=1   char=trivial:1
maxtrace=10
gram=[[2,1],[1,18]]  coeff=1
gram = [[2, 0], [0, 18]] coeff = 4   # непримитивная
"""

JACOBI_TEXT = """
k=10
index_gram=[[10]]
maxn=10
n=1 r=[1] coeff=1
n=5 r=[9] coeff=1
n=2 r=[-1] coeff=-3/2
"""

# ---------- коэффициенты ----------


def test_parse_coefficient_forms():
    assert parse_coefficient("3/4") == Fraction(3, 4)
    assert parse_coefficient(" -7 ") == -7
    z = parse_coefficient("cyc(3: 1, 2)")
    assert z == 1 + 2 * root_of_unity(1, 3)
    # рациональный круговой -> Fraction
    assert isinstance(parse_coefficient("cyc(5:2,0,0,0)"), Fraction)


def test_parse_coefficient_errors():
    with pytest.raises(FormatError):
        parse_coefficient("cyc(5:1,2)")  # нужно φ(5) = 4 координаты
    with pytest.raises(FormatError):
        parse_coefficient("abc")


def test_format_coefficient():
    assert format_coefficient(Fraction(-3, 2)) == "-3/2"
    assert format_coefficient(root_of_unity(1, 4)) == "cyc(4:0,1)"
    assert parse_coefficient(format_coefficient(root_of_unity(2, 5))) == root_of_unity(2, 5)


# ---------- матрица индекса ----------


def test_parse_gram():
    T = parse_gram("[[2,1],[1,8]]")
    assert T == HalfIntegralMatrix(((2, 1), (1, 8)))
    assert parse_gram("[[30]]") == HalfIntegralMatrix.scalar(15)


@pytest.mark.parametrize("text", ["5", "[1, 2]", "[[2,1],[1,8]"])
def test_parse_gram_format_errors(text):
    with pytest.raises(FormatError):
        parse_gram(text)


def test_parse_gram_odd_diagonal():
    with pytest.raises(PreconditionError):
        parse_gram("[[3]]")


# ---------- Зигель ----------


def test_parse_siegel():
    F = parse_siegel(SIEGEL_TEXT)
    assert (F.genus, F.maxtrace, F.level) == (2, 10, 1)
    assert F.weight is None
    assert F.coefficient(HalfIntegralMatrix(((2, 1), (1, 18)))) == 1
    assert F.coefficient(HalfIntegralMatrix(((2, 0), (0, 18)))) == 4


def test_siegel_file_roundtrip(tmp_path):
    F = planted_siegel_genus3()
    p = save_siegel(F, tmp_path / "sub" / "g3.txt")
    assert p.exists()
    G = load_siegel(p)
    assert G.coeffs == F.coeffs
    assert (G.genus, G.maxtrace, G.weight) == (3, 6, 10)


def test_siegel_errors():
    with pytest.raises(FormatError):
        parse_siegel("genus=2\ngram=[[2,0],[0,2]] coeff=1\n")  # нет maxtrace
    with pytest.raises(FormatError):
        parse_siegel("genus=2 maxtrace=4\ngram=[[2,0],[0,2]]\n")  # запись без coeff
    with pytest.raises(FormatError):
        parse_siegel("genus=2 maxtrace=4\ngenus=3\n")
    with pytest.raises(PreconditionError, match="line 3"):
        parse_siegel("genus=2\nmaxtrace=4\ngram=[[1,0],[0,2]] coeff=1\n")
    with pytest.raises(DataConflictError):
        parse_siegel("genus=2 maxtrace=4\ngram=[[2,0],[0,2]] coeff=1\ngram=[[2,0],[0,2]] coeff=2\n")
    with pytest.raises(FormatError):
        parse_siegel("genus=2 maxtrace=4\ngram=[[2,0],[0,2] coeff=1\n")


# ---------- Якоби ----------


def test_parse_jacobi_keeps_record_order():
    phi = parse_jacobi(JACOBI_TEXT)
    assert phi.weight == 10 and phi.maxn == 10
    assert [n for n, _, _ in phi.records] == [1, 5, 2]
    # r = -1 ≡ 9 mod 10: тот же коэффициент при n = 2 + 80/20
    assert phi.coefficient(2, (-1,)) == Fraction(-3, 2)
    assert phi.coefficient(6, (9,)) == Fraction(-3, 2)
    assert phi.coefficient(2, (9,)) == 0


def test_jacobi_file_roundtrip(tmp_path):
    phi = symmetric_ez_dataset(5, 10)
    p = save_jacobi(phi, tmp_path / "ez.txt")
    back = load_jacobi(p)
    assert back.coeffs == phi.coeffs
    assert back.records == phi.records
    assert back.index == phi.index


def test_jacobi_errors():
    with pytest.raises(FormatError):
        parse_jacobi("k=10\nmaxn=3\n")
    with pytest.raises(FormatError, match="r must be a list"):
        parse_jacobi("k=10 index_gram=[[2]] maxn=3\nn=1 r=1 coeff=1\n")
    with pytest.raises(FormatError):
        parse_jacobi("k=10 index_gram=[[2]] maxn=3\nn=x r=[1] coeff=1\n")
    with pytest.raises(FormatError):
        parse_jacobi("k=10 index_gram=[[2]] maxn=3\nn=1 r=[1] coeff=1 gram=[[2]]\n")


# ---------- q-разложения ----------


def test_parse_qexp_defaults():
    f = parse_qexp("offset=-1/4\nexp=1 coeff=2\nexp=3 coeff=cyc(4:0,1)\n")
    assert f.offset == Fraction(-1, 4)
    assert f.bound == 4
    assert f.level == 1 and f.character == "trivial:1"
    assert f.coefficient(3) == root_of_unity(1, 4)


def test_qexp_file_roundtrip(tmp_path):
    f = QExpansion(Fraction(0), {7: root_of_unity(1, 5), 19: Fraction(2)}, bound=64, weight2=19, level=20)
    back = load_qexp(save_qexp(f, tmp_path / "h.txt"))
    assert back == f


def test_qexp_errors(tmp_path):
    with pytest.raises(FormatError):
        parse_qexp("exp=1 coeff=1\n")
    with pytest.raises(FormatError, match="repeated"):
        parse_qexp("offset=0\nexp=1 coeff=1\nexp=1 coeff=2\n")
    with pytest.raises(FormatError, match="not found"):
        load_qexp(tmp_path / "missing.txt")


# ---------- фикстуры ----------


def test_make_fixtures_writes_loadable_files(tmp_path):
    paths = make_fixtures(tmp_path, seed=3)
    names = {p.name for p in paths}
    assert {"siegel_genus3.txt", "siegel_genus2.txt", "siegel_truncated.txt"} <= names
    assert {"jacobi_ez_p5.txt", "jacobi_random.txt"} <= names
    assert "qexp_double-rescale.txt" in names
    for p in paths:
        if p.name.startswith("siegel"):
            load_siegel(p)
        elif p.name.startswith("jacobi"):
            load_jacobi(p)
        else:
            load_qexp(p)


def test_make_fixtures_refuses_file_target(tmp_path):
    target = tmp_path / "plain.txt"
    target.write_text("x", encoding="utf-8")
    with pytest.raises(PreconditionError):
        make_fixtures(target)
