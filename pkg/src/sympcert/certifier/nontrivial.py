"""Non-membership witnesses and substitution of symplectic families."""

from __future__ import annotations

from dataclasses import dataclass

from ..groebner import GroebnerBasis
from ..polyring import DEFAULT_TABLE, Poly, PolyError
from ..relations import (
    RelationId,
    Profile,
    build_relation,
    default_profile,
    relation_factors,
    sp4_basis,
)
from .certificate import Certificate, Sampler, sub_seed
from .coeffs import coefficient_rules
from .instances import draw_parameters

PRIMALITY = "I(Sp4) is prime, so a product lies in it only if some factor does"


def _witness(nf: Poly, profile: Profile, seed: int, label: str) -> dict:
    """Substitute random admissible parameters into a normal form.

    Returns the witness: parameter values and the largest X-monomial whose
    coefficient stays nonzero (or ``None`` when every coefficient vanishes).
    """
    s = Sampler(sub_seed(seed, "nontrivial", label))
    vals = draw_parameters(profile, s)
    cmap = coefficient_rules(nf)
    used = set()
    for c in cmap.entries.values():
        used |= c.symbols()
    params = {k: str(v) for k, v in sorted(vals.items()) if k in used}
    for m in cmap.monomials():
        value = cmap.entries[m].evaluate(vals)
        if value:
            return {"parameters": params, "monomial": nf.table.mono_str(m),
                    "coefficient": cmap.entries[m].__str__(), "value": str(value),
                    "remainder_terms": len(nf)}
    return {"parameters": params, "monomial": None, "remainder_terms": len(nf)}


def nontriviality_certify(relation, profile: Profile | None = None,
                          gb: GroebnerBasis | None = None, seed: int = 1,
                          poly: Poly | None = None) -> Certificate:
    """Certify ``relation`` is not in I(Sp4) via one rational parameter witness.

    The normal form is computed with parameters symbolic; a witness is a
    parameter point at which some X-coefficient of the normal form is nonzero.
    RSF is handled factor by factor.  Passing ``poly`` checks an arbitrary
    polynomial instead of a named relation.
    """
    gb = gb or sp4_basis()
    if poly is not None:
        rid = None
        profile = profile or Profile()
        targets = [("poly", poly)]
    else:
        rid = RelationId(relation)
        profile = profile or default_profile(rid)
        if rid is RelationId.RSF:
            f12, f24 = relation_factors(rid, profile)
            targets = [("F12", f12), ("F24", f24)]
        else:
            targets = [(rid.value, build_relation(rid, profile))]
    witnesses = {}
    ok = True
    for label, p in targets:
        nf = gb.reduce(p)
        w = _witness(nf, profile, seed, label)
        witnesses[label] = w
        ok = ok and w["monomial"] is not None
    assumptions = [PRIMALITY] if len(targets) > 1 else []
    return Certificate("nontriviality", rid.value if rid else None, "pass" if ok else "fail",
                       profile.to_dict(), seed, 1, evidence={"witnesses": witnesses,
                                                             "basis_digest": gb.digest()},
                       assumptions=assumptions)


def verify_witness(cert: Certificate, gb: GroebnerBasis | None = None) -> bool:
    """Re-evaluate the stored witness coefficients; True iff each is nonzero."""
    gb = gb or sp4_basis()
    profile = Profile(**cert.profile)
    rid = RelationId(cert.relation)
    if rid is RelationId.RSF:
        polys = dict(zip(("F12", "F24"), relation_factors(rid, profile)))
    else:
        polys = {rid.value: build_relation(rid, profile)}
    for label, w in cert.evidence["witnesses"].items():
        if w["monomial"] is None:
            return False
        cmap = coefficient_rules(gb.reduce(polys[label]))
        value = cmap.get(w["monomial"]).evaluate(w["parameters"])
        if not value or str(value) != w["value"]:
            return False
    return True


# ---------------------------------------------------------------------------
# Families of symplectic matrices
# ---------------------------------------------------------------------------


@dataclass
class FamilyValue:
    """``poly / denominator**power`` is the relation evaluated on the family."""

    poly: Poly
    denominator: Poly
    power: int


def _v(name: str) -> Poly:
    return Poly.var(name, DEFAULT_TABLE)


def family_numerators(family: str) -> tuple[list[list[Poly]], Poly]:
    """(den * S, den) with den*S polynomial in the family symbols."""
    n, p, q, r = _v("n"), _v("p"), _v("q"), _v("r")
    zero, one = Poly.const(0), Poly.const(1)
    if family == "S_n":
        # diag(n, 1/n, 1/n, n) scaled by n
        return [[n * n, zero, zero, zero], [zero, one, zero, zero],
                [zero, zero, one, zero], [zero, zero, zero, n * n]], n
    if family == "S_n_prime":
        # diag(U_n, (U_n^T)^-1) with U_n = [[0, 1/n], [-n, 0]], scaled by n
        return [[zero, one, zero, zero], [-(n * n), zero, zero, zero],
                [zero, zero, zero, n * n], [zero, zero, -one, zero]], n
    if family == "S_pqrn":
        # upper block [[p, q], [r, n]] so that the lower block, as printed,
        # is its inverse transpose and the matrix is symplectic
        d = p * n - r * q
        return [[p * d, q * d, zero, zero], [r * d, n * d, zero, zero],
                [zero, zero, n, -r], [zero, zero, -q, p]], d
    raise PolyError(f"unknown family {family!r}")


FAMILIES = ("S_n", "S_n_prime", "S_pqrn")


def family_substitute(target, family: str, profile: Profile | None = None) -> FamilyValue:
    """Substitute a symplectic family for Y, clearing its denominator.

    ``target`` is a RelationId (built under ``profile``) or any Poly.  For a
    polynomial of X-degree at most k the result is den**k * R(S), returned
    together with den and k.
    """
    if isinstance(target, Poly):
        poly = target
    else:
        rid = RelationId(target)
        poly = build_relation(rid, profile or default_profile(rid))
    nums, den = family_numerators(family)
    top = max(poly.degree("main"), 0)
    by_degree: dict[int, dict] = {}
    for m, c in poly.items():
        by_degree.setdefault(poly.table.degree(m, "main"), {})[m] = c
    assignment = {f"X{i + 1}{j + 1}": nums[i][j] for i in range(4) for j in range(4)}
    out = Poly.const(0)
    for k, terms in by_degree.items():
        part = Poly._raw(poly.table, terms).substitute(assignment)
        out = out + part * den ** (top - k)
    return FamilyValue(out, den, top)
