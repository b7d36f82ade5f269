import json
from pathlib import Path

import pytest

from sympcert.polyring import Poly, PolyError, parse
from sympcert.relations import (
    X_DEGREE,
    Profile,
    RelationId,
    build_relation,
    default_profile,
    det_minus_one,
    is_homogeneous_in_main,
    pipeline_matrices,
    relation_factors,
    sp4_generators,
)
from sympcert.symmat import SymMatrix, permutation_matrix

GOLDEN = json.loads((Path(__file__).parent / "golden" / "relations.json").read_text())["term_counts"]
IDENTITY = {f"X{i}{j}": int(i == j) for i in range(1, 5) for j in range(1, 5)}


def _trivial_params():
    one, zero = Poly.const(1), Poly.const(0)
    sub = {"d1": one}
    for k in "cde":
        sub.update({f"{k}11": one, f"{k}22": one, f"{k}12": zero, f"{k}21": zero})
    for k in "fb":
        sub.update({f"{k}{i}{j}": zero for i in "12" for j in "12"})
    return sub


def test_generators_match_appendix_text():
    f = sp4_generators()
    assert f[1] == parse("-X31 X13-X41 X23+X11 X33+X21 X43-1")
    assert len(f) == 6
    for g in f:
        assert g.evaluate(IDENTITY) == 0


def test_generators_vanish_on_pqrn_family():
    from sympcert.certifier.nontrivial import family_numerators
    nums, den = family_numerators("S_pqrn")
    assign = {f"X{i + 1}{j + 1}": nums[i][j] for i in range(4) for j in range(4)}
    for g in sp4_generators():
        const = g.coeff_of(0)
        quad = g - Poly.const(const)
        assert quad.substitute(assign) + Poly.const(const) * den * den == Poly.const(0)


def test_det_minus_one_examples():
    d = det_minus_one()
    assert d.evaluate(IDENTITY) == 0
    point = dict.fromkeys(IDENTITY, 0)
    point.update(X11=2, X22=1, X33="1/2", X44=1)
    assert d.evaluate(point) == 0


@pytest.mark.parametrize("rid", list(RelationId))
def test_relation_degree_and_golden_count(rid):
    p = build_relation(rid)
    assert p.degree("main") == X_DEGREE[rid]
    assert is_homogeneous_in_main(p, X_DEGREE[rid])
    assert len(p) == GOLDEN[rid.value]


def test_variant_golden_counts():
    rs = build_relation("RSUPSING", Profile(rsupsing_mode="corrected"))
    qe = build_relation("QE2E2", default_profile("QE2E2").with_overrides(qe2e2_mode="corrected"))
    assert len(rs) == GOLDEN["RSUPSING_corrected"]
    assert len(qe) == GOLDEN["QE2E2_corrected"]


def test_expected_degrees():
    assert {r.value: d for r, d in X_DEGREE.items()} == {
        "RSF": 2, "REXCM_LIN": 1, "REXCME2": 2, "QE2EXCM": 2, "QE2E2": 4,
        "RSUPSING": 4, "RA": 2, "REXCMBAD": 2, "DETGTILDE": 4}


def test_rexcm_lin_exact():
    assert build_relation("REXCM_LIN") == parse("c12*d21*X13 + c22*d21*X14 + c12*d22*X23 + c22*d22*X24")


def test_ra_under_trivial_parameters():
    # P = J Y J, so P11 P22 - P12 P21 = X11 X33 - X13 X31
    ra = build_relation("RA").substitute(_trivial_params())
    assert ra == parse("X23*X41 - X21*X43")


def test_pipeline_examples():
    pipe = pipeline_matrices(Profile())
    p12 = pipe.P.at(1, 2)
    assert p12.degree("main") == 1
    assert pipe.G == pipe.P
    trivial = pipe.P.substitute(_trivial_params())
    j = permutation_matrix("J23_4")
    assert trivial == j @ SymMatrix.symbolic("X", 4, 4) @ j


def test_rsf_is_product_of_factors():
    f12, f24 = relation_factors("RSF")
    assert f12 * f24 == build_relation("RSF")
    with pytest.raises(PolyError):
        relation_factors("RA")


def test_profile_errors():
    with pytest.raises(PolyError):
        build_relation("REXCME2", Profile(phi0="generic", phiS="generic"))
    with pytest.raises(PolyError):
        build_relation("QE2EXCM", Profile(phi0="generic", phiS="generic"))
    with pytest.raises(PolyError):
        Profile(phi0="sometimes")
    with pytest.raises(PolyError):
        Profile().with_overrides(colour="red")


def test_rexcme2_only_sees_the_c0_columns():
    # columns 2 and 4 of P come from Y's columns 3 and 4 through C0 alone
    names = build_relation("REXCME2").symbols()
    assert not any(n[0] in "ab" and n[1:].isdigit() for n in names)
    assert {int(n[2]) for n in names if n.startswith("X")} == {3, 4}


def test_gtilde_layouts_differ_by_sign():
    prof = default_profile("DETGTILDE").with_overrides(a0_block="identity", phi0="trivial", phiS="trivial")
    code = build_relation("DETGTILDE", prof)
    text = build_relation("DETGTILDE", prof.with_overrides(gtilde_layout="text"))
    assert code == -text


def test_unknown_relation():
    with pytest.raises(ValueError):
        RelationId("RXYZ")
