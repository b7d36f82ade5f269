"""Coefficient maps of normal forms and checks of quoted coefficients."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from gmpy2 import mpq

from ..groebner import buchberger
from ..polyring import DEFAULT_TABLE, Poly, PolyError, parse
from ..relations import RelationId, Profile, build_relation, default_profile, sp4_basis
from .certificate import Certificate

MODES = ("exact", "up_to_sign", "up_to_unit")


class CoeffMap:
    """X-monomial -> parameter polynomial, as produced by grouping a Poly."""

    def __init__(self, entries: dict[int, Poly], table=DEFAULT_TABLE):
        self.table = table
        self.entries = {m: c for m, c in entries.items() if not c.is_zero()}

    def __len__(self) -> int:
        return len(self.entries)

    def __contains__(self, mono) -> bool:
        return self._mono(mono) in self.entries

    def _mono(self, mono) -> int:
        if isinstance(mono, str):
            mono = self.table.parse_mono(mono) if mono.strip() != "1" else 0
        if mono & ~self.table.main_mask:
            raise PolyError("coefficient keys must be monomials in the main variables")
        return mono

    def get(self, mono) -> Poly:
        """Coefficient of ``mono``; absent monomials have coefficient 0."""
        return self.entries.get(self._mono(mono), Poly.const(0, self.table))

    def monomials(self) -> list[int]:
        return sorted(self.entries, reverse=True)

    def reassemble(self) -> Poly:
        out = {}
        for m, c in self.entries.items():
            for pm, v in c.items():
                out[m + pm] = v
        return Poly._raw(self.table, out)

    def to_json(self) -> list[list[str]]:
        return [[self.table.mono_str(m), str(self.entries[m])] for m in self.monomials()]


def coefficient_rules(p: Poly) -> CoeffMap:
    return CoeffMap(p.split_main(), p.table)


_NF_CACHE: dict[tuple, CoeffMap] = {}


def relation_coeff_map(rid, profile: Profile | None = None) -> CoeffMap:
    """CoeffMap of the normal form of a relation modulo the symplectic ideal."""
    rid = RelationId(rid)
    profile = profile or default_profile(rid)
    key = (rid, profile)
    if key not in _NF_CACHE:
        _NF_CACHE[key] = coefficient_rules(sp4_basis().reduce(build_relation(rid, profile)))
    return _NF_CACHE[key]


@dataclass
class CoeffCheck:
    passed: bool
    monomial: str
    claimed: str
    actual: str
    mode: str
    sign: int = 1
    unit: str = "1"
    assuming: list = field(default_factory=list)
    residual: str = "0"

    @property
    def normalized(self) -> bool:
        return self.sign != 1 or self.unit != "1"

    def to_json(self) -> dict:
        return dict(self.__dict__)


def _reduce_mod(p: Poly, gb) -> Poly:
    return gb.reduce(p) if gb is not None else p


def check_coeff_identity(cmap: CoeffMap, monomial, claimed, mode: str = "up_to_sign",
                         assuming: Sequence = (), units: Sequence[str] = ()) -> CoeffCheck:
    """Compare the coefficient of ``monomial`` with ``claimed``.

    ``assuming`` lists parameter polynomials taken to vanish (the branch
    hypotheses under which a proof states a coefficient); both sides are
    compared modulo them.  ``up_to_sign`` allows a factor -1, ``up_to_unit``
    additionally allows a monomial in ``units`` on either side.  The factor
    actually needed is reported, never silently absorbed.
    """
    if mode not in MODES:
        raise PolyError(f"unknown mode {mode!r}")
    table = cmap.table
    claimed = claimed if isinstance(claimed, Poly) else parse(str(claimed), table)
    actual = cmap.get(monomial)
    hyps = [h if isinstance(h, Poly) else parse(str(h), table) for h in assuming]
    gb = None
    if hyps:
        from ..polyring import DEGREVLEX
        gb = buchberger(hyps, DEGREVLEX)
    a = _reduce_mod(actual, gb)
    c = _reduce_mod(claimed, gb)
    mono_text = table.mono_str(cmap._mono(monomial))
    result = CoeffCheck(False, mono_text, str(claimed), str(actual), mode,
                        assuming=[str(h) for h in hyps], residual=str(a - c))
    signs = (1,) if mode == "exact" else (1, -1)
    unit_polys = [(Poly.const(1, table), "1")]
    if mode == "up_to_unit":
        for k in range(1, len(units) + 1):
            for combo in itertools.combinations(units, k):
                u = Poly.const(1, table)
                for name in combo:
                    u = u * Poly.var(name, table)
                unit_polys.append((u, "*".join(combo)))
    for (u, label), s in itertools.product(unit_polys, signs):
        for lhs, rhs, text in ((a, c * u, label), (a * u, c, f"1/({label})")):
            if lhs == rhs.scale(s):
                result.passed = True
                result.sign = s
                result.unit = "1" if label == "1" else text
                result.residual = "0"
                return result
    return result


@dataclass(frozen=True)
class Claim:
    """A quoted coefficient: c(monomial) = claimed, possibly inside a proof branch."""

    relation: str
    monomial: str
    claimed: str
    mode: str = "up_to_sign"
    assuming: tuple = ()
    units: tuple = ()
    profile: tuple = ()          # (key, value) overrides of the default profile

    def profile_obj(self) -> Profile:
        return default_profile(self.relation).with_overrides(**dict(self.profile))

    @classmethod
    def from_json(cls, rid: str, data: dict) -> "Claim":
        return cls(rid, data["monomial"], data["claimed"], data.get("mode", "up_to_sign"),
                   tuple(data.get("assuming", ())), tuple(data.get("units", ())),
                   tuple(sorted(data.get("profile", {}).items())))


DETC = "(c11*c22 - c12*c21)"

# Coefficients quoted in the non-triviality proofs, with the branch hypotheses
# in force where each one is stated.
QUOTED_CLAIMS = (
    Claim("REXCME2", "X13*X44", f"aS*{DETC}*cS*d21*e22"),
    Claim("REXCME2", "X23*X44", f"aS*{DETC}*cS*d22*e22", assuming=("d21",)),
    Claim("REXCME2", "X24*X33", f"-aS*{DETC}*cS*d22*e21", assuming=("d21",)),
    Claim("REXCME2", "X24*X43", f"aS*{DETC}*cS*d21*e21", assuming=("e22",)),
    Claim("QE2E2", "X12*X13*X41*X44", f"a0*c0*{DETC}*cS*d11^2*e12*e22"),
    Claim("QE2E2", "X12*X13*X42*X44", "a0*aS*c11*c12*d11*d21*e12^2",
          mode="up_to_unit", assuming=("e22",), units=("a0", "c0")),
    Claim("QE2E2", "X14^2*X42^2", "a0*aS*c0*c11*c22*d11*d21*e12^2", assuming=("e22",)),
    Claim("RSUPSING", "X12*X14*X31*X42", "c12*d11*d21*e12*e21"),
    Claim("RSUPSING", "X12*X31", "c12*d11*d22*e12*e21"),
    Claim("RA", "X21*X34", "c21*d12*e11", assuming=("d11",)),
    Claim("RA", "X21*X44", "c21*d12*e12", assuming=("d11",)),
    Claim("DETGTILDE", "X13^2*X31^2", "-(a0*a12*c11 - a11*c0*c12)^2*(aS*d21*e11 - cS*d11*e21)^2"),
)


def check_claims(rid, claims: Iterable[Claim]) -> Certificate:
    """Run every claim for one relation; the certificate lists each check."""
    rid = RelationId(rid)
    checks = []
    profiles = set()
    for cl in claims:
        if RelationId(cl.relation) is not rid:
            raise PolyError(f"claim for {cl.relation} passed with relation {rid}")
        prof = cl.profile_obj()
        profiles.add(tuple(sorted(prof.to_dict().items())))
        cmap = relation_coeff_map(rid, prof)
        checks.append(check_coeff_identity(cmap, cl.monomial, cl.claimed, cl.mode,
                                           cl.assuming, cl.units).to_json())
    notes = [f"{c['monomial']}: matched with sign {c['sign']} and unit {c['unit']}"
             for c in checks if c["passed"] and (c["sign"] != 1 or c["unit"] != "1")]
    profile = dict(profiles.pop()) if len(profiles) == 1 else {"mixed": True}
    outcome = "pass" if checks and all(c["passed"] for c in checks) else "fail"
    return Certificate("coeff_identity", rid.value, outcome, profile=profile,
                       evidence={"checks": checks}, notes=notes)


# ---------------------------------------------------------------------------
# Factoring
# ---------------------------------------------------------------------------


def factor_powers(p: Poly) -> list[tuple[Poly, int]]:
    """(factor, multiplicity) pairs whose product is ``p`` exactly.

    Content and the common monomial are split off directly; the primitive part
    is handed to sympy's multivariate factorizer.
    """
    table = p.table
    if p.is_zero() or p.is_constant():
        return [(p, 1)]
    out: list[tuple[Poly, int]] = []
    content = p.content()
    lead = p.terms()[0][0]
    if lead < 0:
        content = -content
    if content != 1:
        out.append((Poly.const(content, table), 1))
    prim = p.scale(1 / content)
    common = None
    for m in prim.monomials():
        common = m if common is None else table.gcd(common, m)
    if common:
        for i, e in table.sparse_exponents(common):
            out.append((Poly.var(table.names[i], table), e))
        prim = Poly._raw(table, {m - common: c for m, c in prim.items()})
    if prim.is_constant():
        if prim != 1:
            out.append((prim, 1))
        return out
    out.extend(_sympy_factor(prim))
    return out


def _sympy_factor(p: Poly) -> list[tuple[Poly, int]]:
    import sympy
    names = sorted(p.symbols())
    syms = sympy.symbols(names)
    expr = sympy.sympify(str(p).replace("^", "**"), locals=dict(zip(names, syms)))
    coeff, facs = sympy.factor_list(expr, *syms)
    out = []
    if coeff != 1:
        out.append((parse(str(coeff), p.table), 1))
    for f, e in facs:
        out.append((parse(str(sympy.expand(f)).replace("**", "^"), p.table), int(e)))
    return out


def factor_heuristic(p: Poly) -> list[Poly]:
    """Factors (repeated by multiplicity) whose product equals ``p`` exactly."""
    try:
        pairs = factor_powers(p)
    except Exception:   # best effort: fall back to the trivial factorization
        return [p]
    factors = [f for f, e in pairs for _ in range(e)]
    prod = Poly.const(1, p.table)
    for f in factors:
        prod = prod * f
    return factors if prod == p else [p]
