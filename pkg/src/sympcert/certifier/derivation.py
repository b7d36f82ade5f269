"""Replay of the case analyses that show a relation is not in I(Sp4).

A script names a relation, root hypotheses (coefficients of its normal form
set to zero, written ``c(X13*X44)``, or plain parameter polynomials) and
invertibility conditions, then a tree of splits on ``atom = 0`` versus
``atom != 0``.  Every leaf must be contradictory; this is checked by
:func:`groebner.refute` on everything accumulated along the path.
"""

from __future__ import annotations

import json
import re
import time
from dataclasses import dataclass, field

from ..groebner import refute
from ..polyring import DEFAULT_TABLE, Poly, PolyError, parse
from ..relations import Profile, RelationId, default_profile
from .certificate import Certificate
from .coeffs import CoeffMap, relation_coeff_map

_COEFF = re.compile(r"^\s*c\((.*)\)\s*$")

DET = {k: f"({k}11*{k}22 - {k}12*{k}21)" for k in "acde"}


@dataclass
class DerivationScript:
    relation: str
    eqs: list
    neqs: list
    tree: dict = field(default_factory=lambda: {"leaf": "CONTRADICTION"})
    profile: dict = field(default_factory=dict)
    source: str = ""

    @classmethod
    def from_json(cls, data) -> "DerivationScript":
        if isinstance(data, str):
            data = json.loads(data)
        return cls(data.get("relation", ""), list(data.get("eqs", [])),
                   list(data.get("neqs", [])), data.get("tree", {"leaf": "CONTRADICTION"}),
                   dict(data.get("profile", {})), data.get("source", ""))

    def to_json(self) -> dict:
        return {"relation": self.relation, "profile": self.profile, "eqs": self.eqs,
                "neqs": self.neqs, "tree": self.tree, "source": self.source}

    def profile_obj(self) -> Profile:
        if self.relation:
            return default_profile(self.relation).with_overrides(**self.profile)
        return Profile(**self.profile)


def _resolve(item: str, cmap: CoeffMap | None, missing: list) -> Poly:
    m = _COEFF.match(item)
    if m:
        if cmap is None:
            raise PolyError(f"coefficient reference {item!r} needs a relation")
        mono = m.group(1)
        if mono not in cmap:
            missing.append(mono)
        return cmap.get(mono)
    return parse(item, DEFAULT_TABLE)


def _leaves(node: dict, path: tuple, eqs: list, neqs: list):
    """Yield (path, eqs, neqs) for each leaf, accumulating hypotheses."""
    eqs = eqs + list(node.get("eqs", []))
    neqs = neqs + list(node.get("neqs", []))
    if "split" in node:
        atom = node["split"]
        if "zero" not in node or "nonzero" not in node:
            raise PolyError(f"split on {atom!r} at {'/'.join(path) or 'root'} needs both branches")
        yield from _leaves(node["zero"], path + (f"{atom}=0",), eqs + [atom], neqs)
        yield from _leaves(node["nonzero"], path + (f"{atom}!=0",), eqs, neqs + [atom])
        return
    if node.get("leaf") != "CONTRADICTION":
        raise PolyError(f"node at {'/'.join(path) or 'root'} is neither a split nor a leaf")
    yield path, eqs, neqs


def derivation_check(script: DerivationScript, cmap: CoeffMap | None = None) -> Certificate:
    """Refute every leaf of ``script``; pass iff all leaves are contradictory."""
    if isinstance(script, dict):
        script = DerivationScript.from_json(script)
    profile = script.profile_obj()
    if cmap is None and script.relation:
        cmap = relation_coeff_map(script.relation, profile)
    leaves = []
    missing: list[str] = []
    ok = True
    for path, eqs, neqs in _leaves(script.tree, (), list(script.eqs), list(script.neqs)):
        t0 = time.perf_counter()
        res = refute([_resolve(e, cmap, missing) for e in eqs],
                     [_resolve(n, cmap, missing) for n in neqs])
        ok = ok and res.refuted
        leaves.append({"path": "/".join(path) or "root", "eqs": eqs, "neqs": neqs,
                       "refuted": res.refuted,
                       "basis_size": len(res.basis),
                       "ms": round(1000 * (time.perf_counter() - t0))})
    notes = [f"monomial {m} absent from the remainder, used coefficient 0"
             for m in sorted(set(missing))]
    timing_free = [{k: v for k, v in leaf.items() if k != "ms"} for leaf in leaves]
    cert = Certificate("refutation", RelationId(script.relation).value if script.relation else None,
                       "pass" if ok else "fail", profile.to_dict(),
                       evidence={"leaves": timing_free, "source": script.source}, notes=notes)
    cert._timings = [leaf["ms"] for leaf in leaves]
    return cert


# ---------------------------------------------------------------------------
# Transcribed proofs
# ---------------------------------------------------------------------------

_LEAF = "CONTRADICTION"

PROOF_SCRIPTS = {
    "REXCM_LIN": DerivationScript(
        "REXCM_LIN",
        eqs=["c(X13)", "c(X14)", "c(X23)", "c(X24)"],
        neqs=[DET["c"], DET["d"]],
        source="linear relation: all four coefficients vanish, impossible for invertible C0, A_s",
    ),
    "REXCME2": DerivationScript(
        "REXCME2",
        eqs=["c(X13*X44)"],
        neqs=["aS", "cS", DET["c"], DET["d"], DET["e"]],
        tree={"split": "d21",
              "zero": {"eqs": ["c(X23*X44)", "c(X24*X33)"], "leaf": _LEAF},
              "nonzero": {"split": "e22",
                          "zero": {"eqs": ["c(X24*X43)"], "leaf": _LEAF},
                          "nonzero": {"leaf": _LEAF}}},
        source="ordinary place, ExCM center, E^2 point: split on d21 then e22",
    ),
    "RA": DerivationScript(
        "RA",
        eqs=["c(X11*X44)", "c(X12*X44)"],
        neqs=[DET["c"], DET["d"], DET["e"]],
        tree={"split": "d11",
              "zero": {"eqs": ["c(X21*X34)", "c(X21*X44)", "c(X22*X34)", "c(X22*X44)"],
                       "leaf": _LEAF},
              "nonzero": {"split": "e12",
                          "zero": {"eqs": ["c(X22*X44)", "c(X21*X44)"], "leaf": _LEAF},
                          "nonzero": {"leaf": _LEAF}}},
        source="archimedean place: split on d11 then e12",
    ),
    "RSUPSING": DerivationScript(
        "RSUPSING",
        eqs=["c(X12*X14*X31*X42)", "c(X12*X14*X41*X42)", "c(X12*X31)", "c(X12*X41)"],
        neqs=[DET["c"], DET["d"], DET["e"]],
        tree={"split": "d11",
              "zero": {"eqs": ["c(X12*X24*X31^2)", "c(X12*X24*X31*X32)",
                               "c(X12*X24*X41^2)", "c(X12*X24*X41*X42)"],
                       "split": "e11",
                       "zero": {"eqs": ["c(X12*X21*X31*X44)", "c(X12*X22*X31*X44)"],
                                "leaf": _LEAF},
                       "nonzero": {"eqs": ["c(X12*X24*X31*X41)", "c(X12*X24*X32*X41)"],
                                   "leaf": _LEAF}},
              "nonzero": {"split": "e12",
                          "zero": {"eqs": ["c(X12*X21*X31*X44)", "c(X12*X24*X41*X42)",
                                           "c(X21*X24*X41*X42)", "c(X22^2*X34*X41)",
                                           "c(X22*X24*X41*X42)"],
                                   "split": "e21",
                                   "zero": {"eqs": ["c(X12*X24*X41^2)", "c(X21*X22*X34*X41)"],
                                            "leaf": _LEAF},
                                   "nonzero": {"leaf": _LEAF}},
                          "nonzero": {"eqs": ["c12", "c(X11*X14*X31*X42)",
                                              "c(X11*X14*X41*X42)", "c(X21*X31)",
                                              "c(X21*X41)", "c(X21*X24*X31*X42)",
                                              "c(X14*X21*X31*X42)"],
                                      "leaf": _LEAF}}},
        source="supersingular place (verbatim build): split on d11, then e11 or e12; "
               "the coefficient read as c(X21*X22*X41*X42) is identically zero in the "
               "canonical remainder, c(X21*X24*X41*X42) gives the stated c22 = 0; "
               "c(X12*X21*X31*X44) carries a factor e21, so e21 = 0 is split off",
    ),
}
