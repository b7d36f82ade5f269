import pytest
from gmpy2 import mpq

from sympcert.certifier import (
    PAIRS,
    PROOF_SCRIPTS,
    QUOTED_CLAIMS,
    Certificate,
    Claim,
    DerivationScript,
    Sampler,
    StructuredCase,
    check_claims,
    check_coeff_identity,
    coefficient_rules,
    derivation_check,
    factor_heuristic,
    family_substitute,
    nontriviality_certify,
    relation_coeff_map,
    sub_seed,
    vanishing_certify,
    verify_witness,
)
from sympcert.certifier.nontrivial import family_numerators
from sympcert.polyring import Poly, PolyError, parse
from sympcert.relations import Profile, RelationId, default_profile, relation_factors, sp4_generators

# certificates and sampling


def test_certificate_roundtrip_is_byte_stable():
    cert = Certificate("vanishing", "RA", "pass", {"phi0": "trivial"}, 1, 3, "ARCH",
                       {"value": mpq(1, 3)})
    text = cert.dumps()
    assert Certificate.loads(text).dumps() == text
    assert '"value": "1/3"' in text
    with pytest.raises(ValueError):
        Certificate("vanishing", "RA", "maybe")


def test_sub_seeds_are_label_dependent_and_stable():
    assert sub_seed(1, "a", 2) == sub_seed(1, "a", 2)
    assert sub_seed(1, "a", 2) != sub_seed(1, "a", 3)
    assert 0 <= sub_seed(5, "x") < 2 ** 64


def test_sampler_shapes():
    s = Sampler(3)
    for _ in range(20):
        a = s.invertible2()
        assert a[0][0] * a[1][1] - a[0][1] * a[1][0] != 0
        b = s.sl2()
        assert b[0][0] * b[1][1] - b[0][1] * b[1][0] == 1
        assert s.rat(nonzero=True) != 0


# coefficient checks


def test_quoted_claims_all_pass():
    for rid in ("REXCME2", "QE2E2", "RSUPSING", "RA", "DETGTILDE"):
        cert = check_claims(rid, [c for c in QUOTED_CLAIMS if c.relation == rid])
        assert cert.passed, cert.dumps()


def test_normalization_is_recorded():
    cert = check_claims("QE2E2", [c for c in QUOTED_CLAIMS if c.relation == "QE2E2"])
    assert any("sign -1" in n for n in cert.notes)
    checks = {c["monomial"]: c for c in cert.evidence["checks"]}
    assert checks["X12*X13*X42*X44"]["sign"] == -1
    assert checks["X12*X13*X42*X44"]["unit"] == "c0"


def test_branch_hypotheses_and_signs():
    cmap = relation_coeff_map("RA")
    # the actual coefficient is c21*(d12*e12 - d11*e11); the quote holds once d11 = 0
    res = check_coeff_identity(cmap, "X21*X44", "c21*d12*e12", mode="exact")
    assert not res.passed and res.residual != "0"
    res = check_coeff_identity(cmap, "X21*X44", "c21*d12*e12", mode="exact", assuming=["d11"])
    assert res.passed and res.sign == 1
    res = check_coeff_identity(cmap, "X21*X44", "-c21*d12*e12", mode="exact", assuming=["d11"])
    assert not res.passed
    res = check_coeff_identity(cmap, "X21*X44", "-c21*d12*e12", mode="up_to_sign", assuming=["d11"])
    assert res.passed and res.sign == -1


def test_absent_monomial_has_zero_coefficient():
    cmap = relation_coeff_map("REXCM_LIN")
    assert cmap.get("X44").is_zero()
    assert check_coeff_identity(cmap, "X44", "0", mode="exact").passed
    with pytest.raises(PolyError):
        cmap.get("a11*X13")


def test_coeff_map_reassembles():
    from sympcert.relations import build_relation, sp4_basis
    nf = sp4_basis().reduce(build_relation("RA"))
    assert coefficient_rules(nf).reassemble() == nf


def test_claim_json():
    c = Claim.from_json("RA", {"monomial": "X21*X44", "claimed": "c21*d12*e12", "assuming": ["d11"]})
    assert check_claims("RA", [c]).passed


def test_factor_heuristic_products():
    p = parse("-6*a11^2*c12*(d11*e22 - d12*e21)^2")
    factors = factor_heuristic(p)
    prod = Poly.const(1)
    for f in factors:
        prod = prod * f
    assert prod == p
    assert sum(1 for f in factors if f == parse("d11*e22 - d12*e21")
               or f == parse("d12*e21 - d11*e22")) == 2


# vanishing


FAST_PAIRS = [p for p in PAIRS if p[1] not in ("DETGTILDE", "QE2E2")]


@pytest.mark.parametrize("case,relation", FAST_PAIRS)
def test_vanishing_short_runs(case, relation):
    cert = vanishing_certify(case, relation, seed=3, trials=10)
    assert cert.passed, cert.dumps()
    assert cert.trials == 10 and cert.case == case


def test_vanishing_is_deterministic():
    a = vanishing_certify("SUPERSINGULAR", "RSUPSING", seed=2, trials=5)
    b = vanishing_certify("SUPERSINGULAR", "RSUPSING", seed=2, trials=5)
    c = vanishing_certify("SUPERSINGULAR", "RSUPSING", seed=3, trials=5)
    assert a.dumps() == b.dumps()
    assert a.dumps() != c.dumps()


def test_vanishing_rejects_excluded_modes_and_unpaired_cases():
    with pytest.raises(PolyError):
        vanishing_certify("SUPERSINGULAR", "RSUPSING", trials=1, profile=Profile())
    with pytest.raises(PolyError):
        vanishing_certify("ORD_E2_CENTER_E2", "QE2E2", trials=1, profile=default_profile("QE2E2"))
    with pytest.raises(PolyError):
        vanishing_certify("ARCH", "RSF", trials=1)
    with pytest.raises(PolyError):
        StructuredCase("NOWHERE")


def test_mismatched_relation_does_not_vanish():
    # RA is not annihilated by non-isogenous instances
    from sympcert.certifier.instances import COMPATIBLE, run_trial, vanishing_profile
    case = StructuredCase("NONISOG_DIAG")
    values = [run_trial(case, RelationId.RA, vanishing_profile("RA"), 1, k)[0] for k in range(3)]
    assert any(v != 0 for v in values)
    assert "RA" not in COMPATIBLE["NONISOG_DIAG"]


# non-triviality


@pytest.mark.parametrize("rid", list(RelationId))
def test_nontriviality(rid):
    cert = nontriviality_certify(rid, seed=1)
    assert cert.passed
    assert verify_witness(cert)
    if rid is RelationId.RSF:
        assert cert.assumptions and set(cert.evidence["witnesses"]) == {"F12", "F24"}


def test_nontriviality_rejects_ideal_members():
    f = sp4_generators()[2] * parse("X13 + a11")
    cert = nontriviality_certify(None, poly=f)
    assert cert.outcome == "fail"
    assert nontriviality_certify(None, poly=Poly.const(0)).outcome == "fail"


def test_tampered_witness_is_detected():
    cert = nontriviality_certify("RA", seed=1)
    (label, w), = cert.evidence["witnesses"].items()
    w["value"] = str(mpq(w["value"]) + 1)
    assert not verify_witness(cert)


# families


def test_families_are_symplectic():
    for fam in ("S_n", "S_n_prime", "S_pqrn"):
        nums, den = family_numerators(fam)
        assign = {f"X{i + 1}{j + 1}": nums[i][j] for i in range(4) for j in range(4)}
        for g in sp4_generators():
            const = g.coeff_of(0)
            lhs = (g - Poly.const(const)).substitute(assign) + Poly.const(const) * den * den
            assert lhs.is_zero(), fam


def test_f24_on_diagonal_families():
    f24 = relation_factors("RSF")[1]
    v = family_substitute(f24, "S_n")
    assert v.power == 1 and v.denominator == parse("n")
    assert v.poly == parse("c22*e12*n^2 + c12*e11")
    v = family_substitute(f24, "S_n_prime")
    assert v.poly == parse("c22*e11*n^2 - c12*e12")


def test_rexcmbad_on_pqrn_family():
    v = family_substitute("REXCMBAD", "S_pqrn")
    d = parse("p*n - r*q")
    printed = (parse("d21*(p*a11 + q*a21) + d22*(r*a11 + n*a21)")
               * parse("e21*(n*c11 - r*c21) + e22*(p*c21 - q*c11)"))
    assert v.poly == d * printed


# derivations


@pytest.mark.parametrize("rid", sorted(PROOF_SCRIPTS))
def test_transcribed_derivations(rid):
    cert = derivation_check(PROOF_SCRIPTS[rid])
    assert cert.passed, cert.dumps()
    assert all(leaf["refuted"] for leaf in cert.evidence["leaves"])


def test_derivation_with_missing_branch_fails():
    script = DerivationScript("RA", eqs=["c(X11*X44)"], neqs=[])
    cert = derivation_check(script)
    assert cert.outcome == "fail"


def test_derivation_json_roundtrip_and_errors():
    script = PROOF_SCRIPTS["REXCME2"]
    again = DerivationScript.from_json(script.to_json())
    assert derivation_check(again).dumps() == derivation_check(script).dumps()
    bad = DerivationScript("RA", eqs=[], neqs=[], tree={"split": "d11", "zero": {"leaf": "CONTRADICTION"}})
    with pytest.raises(PolyError):
        derivation_check(bad)
