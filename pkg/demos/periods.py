"""Period matrices of a few curves y^2 = 4x^3 - g2 x - g3 and the checks run on them."""

import numpy as np

from sympcert.periodlab import (
    LEMNISCATIC,
    CurveSpec,
    assemble_split_period,
    elliptic_periods,
    isogeny_residual,
    lattice_action,
    legendre_residual,
    solve_theta_dr,
)


def main():
    for g2, g3 in [LEMNISCATIC, (1, 1), (-3, 5)]:
        b = elliptic_periods(CurveSpec(g2, g3))
        print(f"g2={g2} g3={g3}: tau={b.tau:.6f}  omega1={b.omega1:.10f}")
        print(f"  Legendre residual {legendre_residual(b):.1e}, "
              f"normalized {legendre_residual(b.to_paper()):.1e}")

    lem = elliptic_periods(CurveSpec(*LEMNISCATIC))
    theta_b = lattice_action(lem, 1j)
    theta_dr = solve_theta_dr(lem, lem, theta_b)
    print("\nmultiplication by i on the lemniscatic lattice:")
    print("  Betti matrix\n", theta_b)
    print("  de Rham matrix\n", np.round(theta_dr, 12))
    print(f"  residual {isogeny_residual(theta_dr, lem, lem, theta_b):.1e}")

    other = elliptic_periods(CurveSpec(1, 1))
    m = assemble_split_period(lem.to_paper(), other.to_paper())
    print("\nsplit period matrix zero pattern:")
    print((np.abs(m) > 0).astype(int))


if __name__ == "__main__":
    main()
