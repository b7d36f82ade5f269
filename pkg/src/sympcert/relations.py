"""The symplectic ideal generators and the nine relation polynomials.

Everything here follows the matrix pipeline

    M = [[A_s, 0], [B_s, C_s]],  N = [[A_0, 0], [B_0, C_0]],
    Ftilde = M . Y . N,  P = J . Ftilde . J,  G = Phi_s . P . Phi_0,

with J the transposition of coordinates 2 and 3 and Y = (X_ij) the generic
4x4 matrix.  A :class:`Profile` fixes which parameter blocks stay symbolic.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, fields, replace
from enum import Enum
from functools import lru_cache

from .polyring import DEFAULT_TABLE, Poly, PolyError, parse
from .symmat import SymMatrix, mat_det, mat_mul, permutation_matrix

T = DEFAULT_TABLE


class RelationId(str, Enum):
    RSF = "RSF"
    REXCM_LIN = "REXCM_LIN"
    REXCME2 = "REXCME2"
    QE2EXCM = "QE2EXCM"
    QE2E2 = "QE2E2"
    RSUPSING = "RSUPSING"
    RA = "RA"
    REXCMBAD = "REXCMBAD"
    DETGTILDE = "DETGTILDE"

    def __str__(self) -> str:
        return self.value


X_DEGREE = {
    RelationId.RSF: 2, RelationId.REXCM_LIN: 1, RelationId.REXCME2: 2,
    RelationId.QE2EXCM: 2, RelationId.QE2E2: 4, RelationId.RSUPSING: 4,
    RelationId.RA: 2, RelationId.REXCMBAD: 2, RelationId.DETGTILDE: 4,
}

_CHOICES = {
    "a0_block": ("identity", "generic"),
    "b0_block": ("generic", "zero"),
    "phi0": ("trivial", "generic"),
    "phiS": ("trivial", "generic"),
    "rsupsing_mode": ("verbatim", "corrected"),
    "qe2e2_mode": ("verbatim", "corrected"),
    "gtilde_layout": ("code", "text"),
}


@dataclass(frozen=True)
class Profile:
    """Which parameter blocks are symbolic and which variant of a relation to build.

    ``qe2e2_mode="corrected"`` replaces the factor G11*G23 - G13*G24 by the
    2x2 minor G11*G23 - G13*G21; ``gtilde_layout="text"`` swaps the last two
    rows of Gtilde.
    """

    a0_block: str = "identity"
    b0_block: str = "generic"
    phi0: str = "trivial"
    phiS: str = "trivial"
    rsupsing_mode: str = "verbatim"
    qe2e2_mode: str = "verbatim"
    gtilde_layout: str = "code"

    def __post_init__(self):
        for f in fields(self):
            value = getattr(self, f.name)
            if value not in _CHOICES[f.name]:
                raise PolyError(f"profile field {f.name} must be one of {_CHOICES[f.name]}, got {value!r}")

    def with_overrides(self, **kw) -> "Profile":
        unknown = set(kw) - set(_CHOICES)
        if unknown:
            raise PolyError(f"unknown profile keys: {sorted(unknown)}")
        return replace(self, **kw)

    def to_dict(self) -> dict:
        return asdict(self)


DEFAULT_PROFILES = {
    RelationId.RSF: Profile(),
    RelationId.REXCM_LIN: Profile(),
    RelationId.RSUPSING: Profile(),
    RelationId.RA: Profile(),
    RelationId.REXCME2: Profile(phiS="generic"),
    RelationId.QE2EXCM: Profile(phi0="generic", phiS="trivial"),
    RelationId.QE2E2: Profile(phi0="generic", phiS="generic"),
    RelationId.REXCMBAD: Profile(a0_block="generic"),
    RelationId.DETGTILDE: Profile(a0_block="generic", phi0="generic", phiS="generic"),
}


def default_profile(rid) -> Profile:
    return DEFAULT_PROFILES[RelationId(rid)]


# ---------------------------------------------------------------------------
# Symplectic ideal
# ---------------------------------------------------------------------------

SP4_TEXT = (
    "-X31 X12-X41 X22+X11 X32+X21 X42",
    "-X31 X13-X41 X23+X11 X33+X21 X43-1",
    "-X31 X14-X41 X24+X11 X34+X21 X44",
    "-X32 X13-X42 X23+X12 X33+X22 X43",
    "-X32 X14-X42 X24+X12 X34+X22 X44-1",
    "-X33 X14-X43 X24+X13 X34+X23 X44",
)


def sp4_generators() -> list[Poly]:
    """f1..f6: the entries of Y^T.Omega.Y - Omega above the diagonal."""
    return [parse(s) for s in SP4_TEXT]


def generic_matrix() -> SymMatrix:
    return SymMatrix.symbolic("X", 4, 4)


def det_minus_one() -> Poly:
    return mat_det(generic_matrix()) - 1


@lru_cache(maxsize=1)
def sp4_basis():
    """Reduced lex Gröbner basis of the symplectic ideal (computed once)."""
    from .groebner import buchberger
    return buchberger(sp4_generators())


# ---------------------------------------------------------------------------
# Pipeline
# ---------------------------------------------------------------------------


def _block(prefix: str) -> SymMatrix:
    return SymMatrix.symbolic(prefix, 2, 2)


def _zero2() -> SymMatrix:
    return SymMatrix.from_rows([[0, 0], [0, 0]])


def _phi(kind: str, a: str, b: str, c: str) -> SymMatrix:
    if kind == "trivial":
        return SymMatrix.identity(4)
    v = Poly.var
    return SymMatrix.from_rows([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, v(a), 0], [0, 0, v(b), v(c)]])


@dataclass(frozen=True)
class Pipeline:
    M: SymMatrix
    N: SymMatrix
    Ftilde: SymMatrix
    P: SymMatrix
    G: SymMatrix
    Gtilde: SymMatrix
    profile: Profile


@lru_cache(maxsize=32)
def pipeline_matrices(profile: Profile = Profile()) -> Pipeline:
    Y = generic_matrix()
    M = SymMatrix.blocks([[_block("d"), _zero2()], [_block("f"), _block("e")]])
    A0 = SymMatrix.identity(2) if profile.a0_block == "identity" else _block("a")
    B0 = _zero2() if profile.b0_block == "zero" else _block("b")
    N = SymMatrix.blocks([[A0, _zero2()], [B0, _block("c")]])
    J = permutation_matrix("J23_4")
    Ftilde = mat_mul(mat_mul(M, Y), N)
    P = mat_mul(mat_mul(J, Ftilde), J)
    G = mat_mul(mat_mul(_phi(profile.phiS, "aS", "bS", "cS"), P),
                _phi(profile.phi0, "a0", "b0", "c0"))
    g = G.at
    rows = [[g(1, 1), g(1, 2), g(2, 1), g(2, 2)],
            [g(1, 3), g(1, 4), g(2, 3), g(2, 4)],
            [g(3, 3), g(3, 4), g(4, 3), g(4, 4)],
            [g(3, 1), g(3, 2), g(4, 1), g(4, 2)]]
    if profile.gtilde_layout == "text":
        rows[2], rows[3] = rows[3], rows[2]
    return Pipeline(M, N, Ftilde, P, G, SymMatrix.from_rows(rows), profile)


def relation_factors(rid, profile: Profile | None = None) -> list[Poly]:
    """The two linear factors F_12 and F_24 of RSF (the relation is their product)."""
    if RelationId(rid) is not RelationId.RSF:
        raise PolyError("only RSF is built as a product of factors")
    pipe = pipeline_matrices(profile or default_profile(rid))
    return [pipe.P.at(1, 2), pipe.P.at(2, 4)]


def _check_profile(rid: RelationId, profile: Profile) -> None:
    if rid is RelationId.REXCME2 and profile.phi0 != "trivial":
        raise PolyError("REXCME2 is defined with a trivial Phi_0")
    if rid is RelationId.QE2EXCM and profile.phiS != "trivial":
        raise PolyError("QE2EXCM is defined with a trivial Phi_s")


def build_relation(rid, profile: Profile | None = None) -> Poly:
    """Expanded relation polynomial for ``rid`` under ``profile`` (default per relation)."""
    rid = RelationId(rid)
    profile = profile or default_profile(rid)
    _check_profile(rid, profile)
    pipe = pipeline_matrices(profile)
    P, G = pipe.P.at, pipe.G.at
    if rid is RelationId.RSF:
        return P(1, 2) * P(2, 4)
    if rid is RelationId.REXCM_LIN:
        return P(3, 4)
    if rid is RelationId.REXCME2:
        return G(3, 2) * G(4, 4) - G(4, 2) * G(3, 4)
    if rid is RelationId.QE2EXCM:
        return G(4, 1) * G(4, 4) - G(4, 2) * G(4, 3)
    if rid is RelationId.QE2E2:
        last = G(2, 1) if profile.qe2e2_mode == "corrected" else G(2, 4)
        return ((G(3, 2) * G(2, 4) - G(1, 4) * G(4, 2)) * (G(1, 1) * G(2, 3) - G(1, 3) * last)
                - (G(1, 2) * G(2, 4) - G(1, 4) * G(2, 2)) * (G(3, 1) * G(2, 3) - G(1, 3) * G(4, 1)))
    if rid is RelationId.RSUPSING:
        if profile.rsupsing_mode == "corrected":
            det_f3 = P(3, 1) * P(4, 2) - P(3, 2) * P(4, 1)
        else:
            det_f3 = P(3, 1) * P(4, 2) - P(3, 1) * P(4, 1)
        return (Poly.var("d1") * (P(1, 1) * P(2, 2) - P(2, 1) * P(1, 2))
                * (P(3, 3) * P(4, 4) - P(3, 4) * P(4, 3))
                - (P(1, 3) * P(2, 4) - P(2, 3) * P(1, 4)) * det_f3)
    if rid is RelationId.RA:
        return (P(1, 1) * P(2, 2) - P(1, 2) * P(2, 1)
                - Poly.var("d1") * parse("-X31*X13 - X41*X23 + X11*X33 + X21*X43"))
    if rid is RelationId.REXCMBAD:
        return P(3, 1) * P(4, 2) - P(3, 2) * P(4, 1)
    if rid is RelationId.DETGTILDE:
        return mat_det(pipe.Gtilde)
    raise PolyError(f"unknown relation {rid}")  # pragma: no cover


def is_homogeneous_in_main(p: Poly, degree: int) -> bool:
    return all(p.table.degree(m, "main") == degree for m in p.monomials())
