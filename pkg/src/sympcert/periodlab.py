"""Numeric periods of elliptic curves y^2 = 4x^3 - g2 x - g3.

Periods come from the complex AGM, quasi-periods from the Eisenstein series
E2 in the nome.  The period matrix of a basis is

    [[omega1, omega2],
     [eta1,   eta2  ]]

with rows the de Rham classes dx/y, x dx/y and columns the lattice basis.
Here eta is the integral of x dx/y, i.e. minus the Weierstrass quasi-period,
so that omega1*eta2 - omega2*eta1 = 2*pi*i when Im(omega2/omega1) > 0.  In
the ``paper`` normalization the matrix is divided by 2*pi*i.
"""

from __future__ import annotations

import cmath
import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .symmat import permutation_indices

TWO_PI_I = 2j * math.pi
NORMALIZATIONS = ("raw", "paper")


class PeriodError(ValueError):
    pass


def agm(a: complex, b: complex, tol: float = 1e-15, max_iter: int = 64) -> complex:
    """Arithmetic-geometric mean with the optimal square-root branch.

    At each step the root with |a' - b'| <= |a' + b'| is taken (ties toward
    nonnegative real part).  After the third step the differences must shrink
    quadratically until they reach rounding level.
    """
    a, b = complex(a), complex(b)
    if a == 0 or b == 0:
        raise PeriodError("agm needs nonzero arguments")
    if a == -b:
        raise PeriodError("agm branch degeneracy: a = -b")
    diffs = []
    for _ in range(max_iter):
        diff = abs(a - b)
        if diff <= tol * abs(a) or (len(diffs) > 3 and diff >= diffs[-1]):
            return (a + b) / 2
        if len(diffs) > 3:
            assert diff <= diffs[-1] ** 2 / abs(a) + 1e-14 * abs(a), "AGM lost quadratic convergence"
        diffs.append(diff)
        a1 = (a + b) / 2
        b1 = cmath.sqrt(a * b)
        d_minus, d_plus = abs(a1 - b1), abs(a1 + b1)
        if d_minus > d_plus or (d_minus == d_plus and b1.real < 0):
            b1 = -b1
        a, b = a1, b1
    raise PeriodError("agm did not converge")


@dataclass(frozen=True)
class CurveSpec:
    """Short Weierstrass curve y^2 = 4x^3 - g2 x - g3 with rational g2, g3."""

    g2: Fraction
    g3: Fraction

    def __post_init__(self):
        object.__setattr__(self, "g2", Fraction(self.g2))
        object.__setattr__(self, "g3", Fraction(self.g3))
        if self.discriminant == 0:
            raise PeriodError(f"singular curve: g2={self.g2}, g3={self.g3}")

    @property
    def discriminant(self) -> Fraction:
        return self.g2 ** 3 - 27 * self.g3 ** 2

    def roots(self) -> list[complex]:
        return [complex(r) for r in np.roots([4.0, 0.0, -float(self.g2), -float(self.g3)])]


@dataclass(frozen=True)
class PeriodBasis:
    omega1: complex
    omega2: complex
    eta1: complex
    eta2: complex
    normalization: str = "raw"

    def __post_init__(self):
        if self.normalization not in NORMALIZATIONS:
            raise PeriodError(f"unknown normalization {self.normalization!r}")

    @property
    def tau(self) -> complex:
        return self.omega2 / self.omega1

    def matrix(self) -> np.ndarray:
        return np.array([[self.omega1, self.omega2], [self.eta1, self.eta2]], dtype=complex)

    def to_paper(self) -> "PeriodBasis":
        if self.normalization == "paper":
            return self
        s = 1 / TWO_PI_I
        return PeriodBasis(self.omega1 * s, self.omega2 * s, self.eta1 * s, self.eta2 * s, "paper")

    def to_raw(self) -> "PeriodBasis":
        if self.normalization == "raw":
            return self
        s = TWO_PI_I
        return PeriodBasis(self.omega1 * s, self.omega2 * s, self.eta1 * s, self.eta2 * s, "raw")


# ---------------------------------------------------------------------------
# q-series
# ---------------------------------------------------------------------------


def _sigma(k: int, n: int) -> int:
    s = 0
    d = 1
    while d * d <= n:
        if n % d == 0:
            s += d ** k
            if d * d != n:
                s += (n // d) ** k
        d += 1
    return s


def eisenstein(k: int, tau: complex, max_terms: int = 20000) -> complex:
    """Normalized Eisenstein series E_k(tau), k in {2, 4, 6}."""
    factor = {2: -24, 4: 240, 6: -504}[k]
    if tau.imag <= 0:
        raise PeriodError("Eisenstein series need Im(tau) > 0")
    q = cmath.exp(TWO_PI_I * tau)
    total, qn = 0j, 1 + 0j
    for n in range(1, max_terms + 1):
        qn *= q
        term = _sigma(k - 1, n) * qn
        total += term
        if abs(term) < 1e-18 * max(1.0, abs(total)) and abs(qn) < 1e-17:
            return 1 + factor * total
    raise PeriodError(f"E{k} series did not converge at tau={tau}")


def _reduce(w1: complex, w2: complex) -> tuple[complex, complex]:
    """Lattice basis with Im(w2/w1) > 0 and tau in the fundamental domain."""
    if (w2 / w1).imag < 0:
        w2 = -w2
    for _ in range(1000):
        tau = w2 / w1
        m = round(tau.real)
        if m:
            w2 -= m * w1
            tau = w2 / w1
        if abs(tau) < 1 - 1e-14:
            w1, w2 = w2, -w1
            continue
        return _prefer_real(w1, w2)
    raise PeriodError("lattice reduction did not terminate")


def _prefer_real(w1: complex, w2: complex) -> tuple[complex, complex]:
    """Among reduced bases equivalent on the boundary, take w1 closest to the positive reals."""
    tau = w2 / w1
    options = [(w1, w2), (-w1, -w2)]
    if abs(abs(tau) - 1) < 1e-9:
        options += [(w2, -w1), (-w2, w1)]
    if abs(abs(tau.real) - 0.5) < 1e-9:
        m = 1 if tau.real > 0 else -1
        options += [(w1, w2 - m * w1), (-w1, -(w2 - m * w1))]
    return min(options, key=lambda o: (abs(cmath.phase(o[0])) > 1e-12, abs(cmath.phase(o[0]))))


def _invariants(w1: complex, tau: complex) -> tuple[complex, complex]:
    """(g2, g3) of the lattice Z w1 + Z w1 tau."""
    s = 2 * math.pi / w1
    return s ** 4 * eisenstein(4, tau) / 12, s ** 6 * eisenstein(6, tau) / 216


def _check_invariants(curve: CurveSpec, w1: complex, tau: complex, tol: float) -> float:
    g2, g3 = _invariants(w1, tau)
    scale = max(1.0, abs(float(curve.g2)), abs(float(curve.g3)))
    return (abs(g2 - float(curve.g2)) + abs(g3 - float(curve.g3))) / scale


def quasi_period(w1: complex, tau: complex) -> complex:
    """de Rham quasi-period attached to w1, for the lattice Z w1 + Z w1 tau."""
    return -math.pi ** 2 * eisenstein(2, tau) / (3 * w1)


def elliptic_periods(curve: CurveSpec, tol: float = 1e-10) -> PeriodBasis:
    """Reduced period basis with quasi-periods, raw normalization.

    Candidate periods from the AGM are tried over all orderings of the roots;
    the first pair that spans a lattice with the curve's invariants is kept.
    eta1 and eta2 are computed from separate q-series (nomes of tau and
    -1/tau), so the Legendre relation is a genuine check.
    """
    roots = curve.roots()
    best = None
    for e1, e2, e3 in itertools.permutations(roots):
        try:
            w1 = math.pi / agm(cmath.sqrt(e1 - e3), cmath.sqrt(e1 - e2))
            w2 = 1j * math.pi / agm(cmath.sqrt(e1 - e3), cmath.sqrt(e2 - e3))
        except (PeriodError, ZeroDivisionError):
            continue
        if abs((w2 / w1).imag) < 1e-12:
            continue
        w1, w2 = _reduce(w1, w2)
        err = _check_invariants(curve, w1, w2 / w1, tol)
        if best is None or err < best[0]:
            best = (err, w1, w2)
        if err < tol:
            break
    if best is None or best[0] >= tol:
        raise PeriodError(f"no AGM period pair reproduces g2, g3 (best error {best and best[0]})")
    _, w1, w2 = best
    tau = w2 / w1
    eta1 = quasi_period(w1, tau)
    # basis (w2, -w1) has the same orientation; its first quasi-period is eta2
    eta2 = quasi_period(w2, -1 / tau)
    return PeriodBasis(w1, w2, eta1, eta2, "raw")


def legendre_residual(basis: PeriodBasis) -> float:
    """|omega1 eta2 - omega2 eta1 - 2 pi i| (raw) or |det Pi - 1/(2 pi i)| (paper)."""
    det = basis.omega1 * basis.eta2 - basis.omega2 * basis.eta1
    target = TWO_PI_I if basis.normalization == "raw" else 1 / TWO_PI_I
    return abs(det - target)


def scale_basis(basis: PeriodBasis, lam: complex) -> PeriodBasis:
    """Periods of the curve with (g2, g3) -> (lam^4 g2, lam^6 g3)."""
    return PeriodBasis(basis.omega1 / lam, basis.omega2 / lam, basis.eta1 * lam,
                       basis.eta2 * lam, basis.normalization)


# ---------------------------------------------------------------------------
# Products and isogenies
# ---------------------------------------------------------------------------


def _as_matrix(p) -> np.ndarray:
    if isinstance(p, PeriodBasis):
        return p.matrix()
    m = np.asarray(p, dtype=complex)
    if m.shape != (2, 2):
        raise PeriodError(f"expected a 2x2 matrix, got shape {m.shape}")
    return m


def assemble_split_period(p: PeriodBasis, p_prime: PeriodBasis) -> np.ndarray:
    """J (Pi (+) Pi') J for a product of two elliptic curves.

    J interleaves the blocks, so Pi sits on indices {1, 3} and Pi' on {2, 4}.
    Plain 2x2 arrays are accepted as stand-ins.
    """
    norms = {getattr(x, "normalization", None) for x in (p, p_prime)} - {None}
    if len(norms) > 1:
        raise PeriodError("both bases must use the same normalization")
    block = np.zeros((4, 4), dtype=complex)
    block[:2, :2] = _as_matrix(p)
    block[2:, 2:] = _as_matrix(p_prime)
    perm = permutation_indices("J_blockswap", 1, 2)
    j = np.eye(4)[perm]
    return j @ block @ j


def isogeny_residual(theta_dr, p: PeriodBasis, p_prime: PeriodBasis, theta_b) -> float:
    """Frobenius norm of [theta]_dR Pi - Pi' [theta]_B."""
    if (isinstance(p, PeriodBasis) and isinstance(p_prime, PeriodBasis)
            and p.normalization != p_prime.normalization):
        raise PeriodError("period bases use different normalizations")
    t_dr = _as_matrix(theta_dr)
    t_b = _as_matrix(theta_b)
    return float(np.linalg.norm(t_dr @ _as_matrix(p) - _as_matrix(p_prime) @ t_b))


def lattice_action(p: PeriodBasis, factor: complex, tol: float = 1e-8) -> np.ndarray:
    """Integer matrix of w -> factor * w on the lattice basis (columns = images)."""
    w = np.array([[p.omega1.real, p.omega2.real], [p.omega1.imag, p.omega2.imag]])
    out = np.zeros((2, 2))
    for j, wj in enumerate((p.omega1, p.omega2)):
        img = factor * wj
        coords = np.linalg.solve(w, [img.real, img.imag])
        rounded = np.round(coords)
        if np.max(np.abs(coords - rounded)) > tol:
            raise PeriodError(f"{factor} does not preserve the lattice")
        out[:, j] = rounded
    return out


def solve_theta_dr(p: PeriodBasis, p_prime: PeriodBasis, theta_b) -> np.ndarray:
    """Least-squares de Rham matrix with theta_dR Pi = Pi' theta_B."""
    rhs = _as_matrix(p_prime) @ _as_matrix(theta_b)
    sol, *_ = np.linalg.lstsq(_as_matrix(p).T, rhs.T, rcond=None)
    return sol.T


def gaussian_rational_distance(m: np.ndarray, max_den: int = 64) -> float:
    """Distance of a complex matrix from the nearest matrix over Q(i)."""
    worst = 0.0
    for z in np.asarray(m, dtype=complex).ravel():
        for part in (z.real, z.imag):
            approx = Fraction(part).limit_denominator(max_den)
            worst = max(worst, abs(part - float(approx)))
    return worst


LEMNISCATIC = (4, 0)
