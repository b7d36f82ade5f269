"""Structured rational instances on which each relation must vanish exactly.

A recipe draws the right-hand side of a period identity, a matrix of the form
diag(Pi_s, Pi_s') . Theta . diag(Pi_0^-1, Pi_0'^-1), with the zero pattern of
its case.  The matrix is taken as G (or directly as P when the relation only
involves P), then pulled back through the pipeline:

    P = Phi_s^-1 . G . Phi_0^-1,   Y = M^-1 . J . P . J . N^-1,

and the expanded relation polynomial is evaluated at (Y, parameters, d1).
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Callable

from gmpy2 import mpq

from ..polyring import PolyError
from ..relations import RelationId, Profile, build_relation, default_profile
from ..symmat import (
    mat_inverse_rational,
    permutation_indices,
    rat_block_diag,
    rat_blocks,
    rat_det,
    rat_identity,
    rat_mul,
)
from .certificate import Certificate, RejectionLimit, Sampler, sub_seed

CASES = ("NONISOG_DIAG", "NONISOG_ANTIDIAG", "ORD_EXCM_CENTER_EXCM", "ORD_EXCM_CENTER_E2",
         "ORD_E2_CENTER_E2", "ORD_E2_CENTER_EXCM", "SUPERSINGULAR", "ARCH", "BAD_CM",
         "BAD_ISOG")

# which relation each structured case annihilates
COMPATIBLE = {
    "NONISOG_DIAG": ("RSF",),
    "NONISOG_ANTIDIAG": ("RSF",),
    "ORD_EXCM_CENTER_EXCM": ("REXCM_LIN",),
    "ORD_EXCM_CENTER_E2": ("REXCME2",),
    "ORD_E2_CENTER_E2": ("QE2E2",),
    "ORD_E2_CENTER_EXCM": ("QE2EXCM",),
    "SUPERSINGULAR": ("RSUPSING",),
    "ARCH": ("RA",),
    "BAD_CM": ("REXCMBAD",),
    "BAD_ISOG": ("DETGTILDE",),
}

PAIRS = tuple((case, rel) for case, rels in COMPATIBLE.items() for rel in rels)

# relation variants that are never expected to vanish
EXCLUDED_MODES = {
    "RSUPSING": ("rsupsing_mode", "verbatim"),
    "QE2E2": ("qe2e2_mode", "verbatim"),
}


def vanishing_profile(rid) -> Profile:
    """Default profile with the corrected variant where one exists."""
    rid = RelationId(rid)
    prof = default_profile(rid)
    if rid is RelationId.RSUPSING:
        prof = prof.with_overrides(rsupsing_mode="corrected")
    if rid is RelationId.QE2E2:
        prof = prof.with_overrides(qe2e2_mode="corrected")
    return prof


@dataclass
class Instance:
    target: str                    # "G", "P" or "Y"
    matrix: list                   # 4x4 rational
    d1: mpq | None = None
    pieces: dict | None = None


def _zero2():
    return [[mpq(0), mpq(0)], [mpq(0), mpq(0)]]


def _split(theta):
    return [[theta[0][0], theta[0][1]], [theta[1][0], theta[1][1]]]


def _period_sandwich(pis, pis_p, theta, pi0, pi0_p):
    left = rat_block_diag(pis, pis_p)
    right = rat_block_diag(mat_inverse_rational(pi0), mat_inverse_rational(pi0_p))
    return rat_mul(rat_mul(left, theta), right)


# ---------------------------------------------------------------------------
# Recipes
# ---------------------------------------------------------------------------


def _nonisog(s: Sampler, antidiag: bool) -> Instance:
    t1, t2 = s.invertible2(), s.invertible2()
    theta = rat_blocks([[_zero2(), t1], [t2, _zero2()]] if antidiag
                       else [[t1, _zero2()], [_zero2(), t2]])
    pis, pis_p, pi0, pi0_p = s.sl2(), s.sl2(), s.sl2(), s.sl2()
    return Instance("P", _period_sandwich(pis, pis_p, theta, pi0, pi0_p))


def _ord_excm_excm(s: Sampler) -> Instance:
    # CM factors at ordinary places have diagonal period blocks diag(w, 1/w)
    theta = rat_blocks([[s.diagonal2(), s.diagonal2()], [s.diagonal2(), s.diagonal2()]])
    return Instance("P", _period_sandwich(s.sl2(), s.diagonal2(unit=True), theta,
                                          s.sl2(), s.diagonal2(unit=True)))


def _ord_excm_e2(s: Sampler) -> Instance:
    pis, pi0 = s.sl2(), s.sl2()
    pi0_inv = mat_inverse_rational(pi0)
    pi0p_inv = mat_inverse_rational(s.diagonal2(unit=True))
    th = [[s.diagonal2() for _ in range(2)] for _ in range(2)]
    g = rat_blocks([[rat_mul(rat_mul(pis, th[0][0]), pi0_inv),
                     rat_mul(rat_mul(pis, th[0][1]), pi0p_inv)],
                    [rat_mul(rat_mul(pis, th[1][0]), pi0p_inv),
                     rat_mul(rat_mul(pis, th[1][1]), pi0p_inv)]])
    return Instance("G", g)


def _ord_e2_center(s: Sampler, point_cm: bool) -> Instance:
    pis = s.sl2()
    pis_p = s.diagonal2(unit=True) if point_cm else pis
    rho = s.sl2()
    theta = rat_blocks([[s.diagonal2(), s.diagonal2()], [s.diagonal2(), s.diagonal2()]])
    g = rat_mul(rat_mul(rat_block_diag(pis, pis_p), theta), rat_block_diag(rho, rho))
    return Instance("G", g)


def _supersingular(s: Sampler) -> Instance:
    blocks = [s.invertible2() for _ in range(4)]
    theta = rat_blocks([[blocks[0], blocks[1]], [blocks[2], blocks[3]]])
    dets = [rat_det(b) for b in blocks]
    d1 = dets[1] * dets[2] / (dets[0] * dets[3])
    f = _period_sandwich(s.sl2(), s.sl2(), theta, s.sl2(), s.sl2())
    return Instance("P", f, d1)


def _family_sample(s: Sampler) -> list:
    """Random element of the diagonal, swap and GL2-block symplectic families."""
    kind = s.rng.randrange(3)
    if kind == 0:
        n = s.rat(nonzero=True)
        return rat_block_diag([[n, 0], [0, 1 / n]], [[1 / n, 0], [0, n]])
    if kind == 1:
        n = s.rat(nonzero=True)
        return rat_block_diag([[0, 1 / n], [-n, 0]], [[0, n], [-1 / n, 0]])
    a = s.invertible2()
    p, r, q, n = a[0][0], a[0][1], a[1][0], a[1][1]
    dd = p * n - r * q
    return rat_block_diag(a, [[n / dd, -q / dd], [-r / dd, p / dd]])


def _shear(s: Sampler, lower: bool) -> list:
    a, b, c = s.rat(), s.rat(), s.rat()
    sym = [[a, b], [b, c]]
    one = rat_identity(2)
    return rat_blocks([[one, _zero2()], [sym, one]] if lower else [[one, sym], [_zero2(), one]])


def _arch(s: Sampler) -> Instance:
    y = rat_identity(4)
    for _ in range(3):
        for m in (_family_sample(s), _shear(s, False), _shear(s, True)):
            y = rat_mul(y, m)
    return Instance("Y", y)


def _bad_cm(s: Sampler) -> Instance:
    psi = s.matrix(4, 4)
    for i, j in ((0, 1), (2, 1), (3, 1)):
        psi[i][j] = mpq(0)
    return Instance("P", _period_sandwich(s.sl2(), s.sl2(), psi, s.sl2(), s.sl2()))


def _bad_isog(s: Sampler) -> Instance:
    theta = rat_blocks([[s.scalar_lower2(), s.scalar_lower2()],
                        [s.scalar_lower2(), s.scalar_lower2()]])
    pis, pi0 = s.sl2(), s.sl2()
    return Instance("G", _period_sandwich(pis, pis, theta, pi0, pi0))


RECIPES: dict[str, Callable[[Sampler], Instance]] = {
    "NONISOG_DIAG": lambda s: _nonisog(s, False),
    "NONISOG_ANTIDIAG": lambda s: _nonisog(s, True),
    "ORD_EXCM_CENTER_EXCM": _ord_excm_excm,
    "ORD_EXCM_CENTER_E2": _ord_excm_e2,
    "ORD_E2_CENTER_E2": lambda s: _ord_e2_center(s, False),
    "ORD_E2_CENTER_EXCM": lambda s: _ord_e2_center(s, True),
    "SUPERSINGULAR": _supersingular,
    "ARCH": _arch,
    "BAD_CM": _bad_cm,
    "BAD_ISOG": _bad_isog,
}


@dataclass(frozen=True)
class StructuredCase:
    case_id: str

    def __post_init__(self):
        if self.case_id not in CASES:
            raise PolyError(f"unknown structured case {self.case_id!r}")

    @property
    def recipe(self) -> Callable[[Sampler], Instance]:
        return RECIPES[self.case_id]

    @property
    def relations(self) -> tuple:
        return COMPATIBLE[self.case_id]


# ---------------------------------------------------------------------------
# Parameters and pull-back
# ---------------------------------------------------------------------------


def draw_parameters(profile: Profile, s: Sampler) -> dict[str, mpq]:
    """Admissible parameters: A_s, C_s, C_0 (and A_0) invertible, Phi diagonals nonzero."""
    vals: dict[str, mpq] = {}

    def put(prefix, m):
        for i in range(2):
            for j in range(2):
                vals[f"{prefix}{i + 1}{j + 1}"] = m[i][j]

    put("d", s.invertible2())
    put("e", s.invertible2())
    put("f", s.matrix())
    put("c", s.invertible2())
    put("a", s.invertible2() if profile.a0_block == "generic" else rat_identity(2))
    put("b", s.matrix() if profile.b0_block == "generic" else _zero2())
    for a, b, c, kind in (("aS", "bS", "cS", profile.phiS), ("a0", "b0", "c0", profile.phi0)):
        if kind == "generic":
            vals[a], vals[b], vals[c] = s.rat(nonzero=True), s.rat(), s.rat(nonzero=True)
        else:
            vals[a], vals[b], vals[c] = mpq(1), mpq(0), mpq(1)
    vals["d1"] = s.rat(nonzero=True)
    return vals


def _block_matrix(vals, top_left, bottom_left, bottom_right):
    def blk(prefix):
        return [[vals[f"{prefix}{i}{j}"] for j in (1, 2)] for i in (1, 2)]
    return rat_blocks([[blk(top_left), _zero2()], [blk(bottom_left), blk(bottom_right)]])


def _phi(vals, a, b, c):
    return rat_block_diag(rat_identity(2), [[vals[a], 0], [vals[b], vals[c]]])


def pull_back(inst: Instance, vals: dict[str, mpq]) -> list:
    """Recover Y from a target G or P under the drawn parameters."""
    if inst.target == "Y":
        return inst.matrix
    mat = inst.matrix
    if inst.target == "G":
        mat = rat_mul(rat_mul(mat_inverse_rational(_phi(vals, "aS", "bS", "cS")), mat),
                      mat_inverse_rational(_phi(vals, "a0", "b0", "c0")))
    perm = permutation_indices("J23_4")
    ftilde = [[mat[perm[i]][perm[j]] for j in range(4)] for i in range(4)]
    m = _block_matrix(vals, "d", "f", "e")
    n = _block_matrix(vals, "a", "b", "c")
    return rat_mul(rat_mul(mat_inverse_rational(m), ftilde), mat_inverse_rational(n))


def _p_of_y(y, vals):
    m = _block_matrix(vals, "d", "f", "e")
    n = _block_matrix(vals, "a", "b", "c")
    f = rat_mul(rat_mul(m, y), n)
    perm = permutation_indices("J23_4")
    return [[f[perm[i]][perm[j]] for j in range(4)] for i in range(4)]


# ---------------------------------------------------------------------------
# Certification
# ---------------------------------------------------------------------------

_COMPILED: dict = {}


def _compiled(rid: RelationId, profile: Profile):
    key = (rid, profile)
    if key not in _COMPILED:
        _COMPILED[key] = build_relation(rid, profile).compile()
    return _COMPILED[key]


def run_trial(case: StructuredCase, rid: RelationId, profile: Profile, seed: int, k: int):
    """One trial; returns (value, assignment, rejections)."""
    s = Sampler(sub_seed(seed, case.case_id, rid.value, k))
    while True:
        vals = draw_parameters(profile, s)
        inst = case.recipe(s)
        try:
            y = pull_back(inst, vals)
        except ZeroDivisionError:
            s.reject()
            continue
        break
    if case.case_id == "ARCH":
        p = _p_of_y(y, vals)
        vals["d1"] = p[0][0] * p[1][1] - p[0][1] * p[1][0]
    elif inst.d1 is not None:
        vals["d1"] = inst.d1
    for i in range(4):
        for j in range(4):
            vals[f"X{i + 1}{j + 1}"] = y[i][j]
    value = _compiled(rid, profile)(vals)
    return value, vals, s.rejections


def vanishing_certify(case, relation, seed: int = 1, trials: int = 100,
                      profile: Profile | None = None) -> Certificate:
    """Evaluate ``relation`` on ``trials`` structured instances; pass iff all are 0."""
    case = case if isinstance(case, StructuredCase) else StructuredCase(case)
    rid = RelationId(relation)
    if rid.value not in case.relations:
        raise PolyError(f"case {case.case_id} is not paired with relation {rid}")
    profile = profile or vanishing_profile(rid)
    if rid.value in EXCLUDED_MODES:
        key, bad = EXCLUDED_MODES[rid.value]
        if getattr(profile, key) == bad:
            raise PolyError(f"{key}={bad} is excluded from vanishing certification")
    t0 = time.perf_counter()
    nonzero = []
    rejections = 0
    first = None
    try:
        for k in range(trials):
            value, vals, rej = run_trial(case, rid, profile, seed, k)
            rejections += rej
            if first is None:
                first = {name: str(v) for name, v in sorted(vals.items())}
            if value != 0:
                nonzero.append({"trial": k, "value": str(value)})
    except RejectionLimit as exc:
        return Certificate("vanishing", rid.value, "inconclusive", profile.to_dict(), seed,
                           trials, case.case_id, {"error": str(exc)})
    outcome = "pass" if not nonzero and trials > 0 else "fail"
    evidence = {
        "nonzero_trials": nonzero[:10],
        "nonzero_count": len(nonzero),
        "redraws": rejections,
        "first_trial_assignment": first,
    }
    cert = Certificate("vanishing", rid.value, outcome, profile.to_dict(), seed, trials,
                       case.case_id, evidence)
    cert._seconds = time.perf_counter() - t0   # not serialized
    return cert
