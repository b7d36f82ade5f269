import cmath
import math

import mpmath
import numpy as np
import pytest

from sympcert.periodlab import (
    CurveSpec,
    PeriodBasis,
    PeriodError,
    agm,
    assemble_split_period,
    eisenstein,
    elliptic_periods,
    gaussian_rational_distance,
    isogeny_residual,
    lattice_action,
    legendre_residual,
    scale_basis,
    solve_theta_dr,
)

# independent oracle values (mpmath, 30 digits)
AGM_24_6 = 13.458171481725615420766813156
LEMNISCATIC_OMEGA1 = 2.6220575542921198104648395899

CURVES = [(4, 0), (1, 1), (-3, 5), ("1/3", -2), (0, 1), (100, -7), (1, 0), (3, "10001/10000")]


def _real_period_oracle(g2, g3):
    """2 * integral from the largest real root to infinity of dx / sqrt(4x^3 - g2 x - g3)."""
    mpmath.mp.dps = 30
    roots = [r for r in mpmath.polyroots([4, 0, -g2, -g3]) if abs(mpmath.im(r)) < 1e-20]
    e1 = max(mpmath.re(r) for r in roots)
    f = lambda x: 1 / mpmath.sqrt(4 * x ** 3 - g2 * x - g3)
    return float(2 * mpmath.quad(f, [e1, e1 + 1, mpmath.inf]))


def test_agm_values():
    assert agm(1, 1) == 1
    assert abs(agm(24, 6) - AGM_24_6) / AGM_24_6 < 1e-14
    assert abs(agm(24, 6) - float(mpmath.agm(24, 6))) < 1e-13
    for a in (3 + 4j, -2 + 0.5j, 1e-3j):
        assert abs(agm(a, a) - a) <= 1e-15 * abs(a)


def test_agm_complex_matches_mpmath():
    a, b = 2 + 1j, 0.5 - 0.3j
    assert abs(agm(a, b) - complex(mpmath.agm(a, b))) < 1e-13


def test_agm_degenerate():
    with pytest.raises(PeriodError):
        agm(1, -1)
    with pytest.raises(PeriodError):
        agm(0, 1)


def test_lemniscatic_periods():
    b = elliptic_periods(CurveSpec(4, 0))
    assert abs(b.omega2 / b.omega1 - 1j) < 1e-10
    assert abs(b.omega1 - LEMNISCATIC_OMEGA1) < 1e-12
    assert abs(b.omega1 - _real_period_oracle(4, 0)) < 1e-10


@pytest.mark.parametrize("g2,g3", [(1, 1), (1, 0), (0, 1), (5, -1)])
def test_real_period_against_quadrature(g2, g3):
    b = elliptic_periods(CurveSpec(g2, g3))
    oracle = _real_period_oracle(g2, g3)
    lattice = [b.omega1, b.omega2, b.omega1 + b.omega2, b.omega1 - b.omega2]
    # the real period is a primitive lattice vector, up to sign
    assert min(abs(abs(w) - oracle) for w in lattice if abs(w.imag) < 1e-9 * abs(w)) < 1e-9 * oracle


@pytest.mark.parametrize("g2,g3", CURVES)
def test_basis_is_reduced_and_reproduces_invariants(g2, g3):
    curve = CurveSpec(g2, g3)
    b = elliptic_periods(curve)
    tau = b.tau
    assert tau.imag > 0 and abs(tau.real) <= 0.5 + 1e-12 and abs(tau) >= 1 - 1e-12
    s = 2 * math.pi / b.omega1
    g2_num = s ** 4 * eisenstein(4, tau) / 12
    g3_num = s ** 6 * eisenstein(6, tau) / 216
    scale = max(1, abs(float(curve.g2)), abs(float(curve.g3)))
    assert abs(g2_num - float(curve.g2)) / scale < 1e-10
    assert abs(g3_num - float(curve.g3)) / scale < 1e-10


@pytest.mark.parametrize("g2,g3", CURVES)
def test_legendre_relation(g2, g3):
    b = elliptic_periods(CurveSpec(g2, g3))
    assert legendre_residual(b) < 1e-9
    assert legendre_residual(b.to_paper()) < 1e-9
    assert b.to_paper().to_raw().omega1 == pytest.approx(b.omega1, rel=1e-15)


def test_quasi_period_against_quadrature():
    # eta1 is the integral of x dx / y over the real cycle
    mpmath.mp.dps = 30
    b = elliptic_periods(CurveSpec(1, 0))
    # y^2 = 4x^3 - x: real roots -1/2, 0, 1/2; the real cycle is twice the path from 1/2 to infinity,
    # regularized by subtracting the 1/(2 sqrt x) asymptote's divergent part
    e1 = mpmath.mpf(1) / 2
    f = lambda x: x / mpmath.sqrt(4 * x ** 3 - x) - 1 / (2 * mpmath.sqrt(x))
    tail = 2 * mpmath.quad(f, [e1, 1, mpmath.inf]) - 2 * mpmath.sqrt(e1)
    assert abs(b.eta1 - float(tail)) < 1e-10


def test_zeroed_eta_gives_two_pi():
    b = elliptic_periods(CurveSpec(1, 1))
    zero = PeriodBasis(b.omega1, b.omega2, 0, 0)
    assert abs(legendre_residual(zero) - 2 * math.pi) < 1e-12


def test_scaling_rules():
    b = elliptic_periods(CurveSpec(1, 1))
    lam = 2
    scaled = elliptic_periods(CurveSpec(lam ** 4, lam ** 6))
    assert abs(scaled.omega1 - b.omega1 / lam) < 1e-12
    assert abs(legendre_residual(scale_basis(b, 3.5)) - legendre_residual(b)) < 1e-9


def test_discriminant_zero():
    with pytest.raises(PeriodError):
        CurveSpec(3, 1)
    with pytest.raises(PeriodError):
        CurveSpec(0, 0)


def test_assemble_split_structure():
    ident = np.eye(2)
    a = assemble_split_period(ident, ident)
    assert np.array_equal(a, np.eye(4))
    p = elliptic_periods(CurveSpec(1, 1)).to_paper()
    q = elliptic_periods(CurveSpec(4, 0)).to_paper()
    m = assemble_split_period(p, q)
    # interleaving puts Pi on indices {1, 3} and Pi' on {2, 4}
    for i, j in [(1, 2), (1, 4), (2, 1), (2, 3), (3, 2), (3, 4), (4, 1), (4, 3)]:
        assert m[i - 1, j - 1] == 0
    assert m[0, 2] == p.omega2
    j = np.eye(4)[[0, 2, 1, 3]]
    back = j @ m @ j
    assert np.array_equal(back[:2, :2], p.matrix()) and np.array_equal(back[2:, 2:], q.matrix())
    det = np.linalg.det(m)
    assert abs(det - np.linalg.det(p.matrix()) * np.linalg.det(q.matrix())) < 1e-12
    with pytest.raises(PeriodError):
        assemble_split_period(p, q.to_raw())


def test_multiplication_by_n():
    b = elliptic_periods(CurveSpec(-3, 5))
    for n in (2, 3, 7):
        assert isogeny_residual(n * np.eye(2), b, b, n * np.eye(2)) < 1e-10
    assert isogeny_residual(np.zeros((2, 2)), b, b, np.zeros((2, 2))) == 0
    with pytest.raises(PeriodError):
        isogeny_residual(np.eye(2), b, b.to_paper(), np.eye(2))


def test_lemniscatic_cm_by_i():
    b = elliptic_periods(CurveSpec(4, 0))
    theta_b = lattice_action(b, 1j)
    assert np.array_equal(theta_b, [[0, -1], [1, 0]])
    theta_dr = solve_theta_dr(b, b, theta_b)
    assert gaussian_rational_distance(theta_dr) < 1e-8
    assert np.allclose(theta_dr, np.diag([1j, -1j]), atol=1e-8)
    assert isogeny_residual(np.diag([1j, -1j]), b, b, theta_b) < 1e-8


def test_non_cm_curve_has_no_lattice_action_by_i():
    with pytest.raises(PeriodError):
        lattice_action(elliptic_periods(CurveSpec(1, 1)), 1j)
