"""Independent oracle for relation term counts (run once; output is frozen).

Builds every relation in a sympy polynomial ring straight from the appendix
formulas, expands 4x4 determinants by the Leibniz sum over all 24
permutations, and records term counts.  Nothing from sympcert is imported.

    python tests/oracles/golden_relations.py > tests/golden/relations.json
"""

import itertools
import json
import sys

from sympy import QQ
from sympy.combinatorics import Permutation
from sympy.polys.rings import ring

X = [f"X{i}{j}" for i in range(1, 5) for j in range(1, 5)]
PARAMS = [f"{p}{i}{j}" for p in "abcdfe" for i in (1, 2) for j in (1, 2)]
PARAMS += ["a0", "b0", "c0", "aS", "bS", "cS", "d1"]
R, *GENS = ring(",".join(X + PARAMS), QQ)
V = dict(zip(X + PARAMS, GENS))


def mat(prefix, n=2):
    return [[V[f"{prefix}{i}{j}"] for j in range(1, n + 1)] for i in range(1, n + 1)]


def mul(a, b):
    return [[sum((a[i][k] * b[k][j] for k in range(len(b))), R.zero)
             for j in range(len(b[0]))] for i in range(len(a))]


def blocks(tl, tr, bl, br):
    return [tl[0] + tr[0], tl[1] + tr[1], bl[0] + br[0], bl[1] + br[1]]


def leibniz(m):
    n = len(m)
    total = R.zero
    for perm in itertools.permutations(range(n)):
        term = R(Permutation(list(perm)).signature())
        for i in range(n):
            term *= m[i][perm[i]]
        total += term
    return total


def pipeline(a0_generic, phi0_generic, phiS_generic):
    zero = [[R.zero, R.zero], [R.zero, R.zero]]
    ident = [[R.one, R.zero], [R.zero, R.one]]
    Y = mat("X", 4)
    M = blocks(mat("d"), zero, mat("f"), mat("e"))
    N = blocks(mat("a") if a0_generic else ident, zero, mat("b"), mat("c"))
    J = [[R(int(j == p)) for j in range(4)] for p in (0, 2, 1, 3)]
    P = mul(mul(J, mul(mul(M, Y), N)), J)

    def phi(generic, a, b, c):
        if not generic:
            return [[R(int(i == j)) for j in range(4)] for i in range(4)]
        return [[R.one, R.zero, R.zero, R.zero], [R.zero, R.one, R.zero, R.zero],
                [R.zero, R.zero, V[a], R.zero], [R.zero, R.zero, V[b], V[c]]]

    G = mul(mul(phi(phiS_generic, "aS", "bS", "cS"), P), phi(phi0_generic, "a0", "b0", "c0"))
    return (lambda i, j: P[i - 1][j - 1]), (lambda i, j: G[i - 1][j - 1])


def relations():
    out = {}
    P, G = pipeline(False, False, False)
    out["RSF"] = P(1, 2) * P(2, 4)
    out["REXCM_LIN"] = P(3, 4)
    out["RA"] = P(1, 1) * P(2, 2) - P(1, 2) * P(2, 1) - V["d1"] * (
        -V["X31"] * V["X13"] - V["X41"] * V["X23"] + V["X11"] * V["X33"] + V["X21"] * V["X43"])
    d12 = P(1, 1) * P(2, 2) - P(2, 1) * P(1, 2)
    d34 = P(3, 3) * P(4, 4) - P(3, 4) * P(4, 3)
    d_top = P(1, 3) * P(2, 4) - P(2, 3) * P(1, 4)
    out["RSUPSING"] = V["d1"] * d12 * d34 - d_top * (P(3, 1) * P(4, 2) - P(3, 1) * P(4, 1))
    out["RSUPSING_corrected"] = V["d1"] * d12 * d34 - d_top * (P(3, 1) * P(4, 2) - P(3, 2) * P(4, 1))
    _, G = pipeline(False, False, True)
    out["REXCME2"] = G(3, 2) * G(4, 4) - G(4, 2) * G(3, 4)
    _, G = pipeline(False, True, False)
    out["QE2EXCM"] = G(4, 1) * G(4, 4) - G(4, 2) * G(4, 3)
    _, G = pipeline(False, True, True)
    for name, last in (("QE2E2", G(2, 4)), ("QE2E2_corrected", G(2, 1))):
        out[name] = ((G(3, 2) * G(2, 4) - G(1, 4) * G(4, 2)) * (G(1, 1) * G(2, 3) - G(1, 3) * last)
                     - (G(1, 2) * G(2, 4) - G(1, 4) * G(2, 2)) * (G(3, 1) * G(2, 3) - G(1, 3) * G(4, 1)))
    P, _ = pipeline(True, False, False)
    out["REXCMBAD"] = P(3, 1) * P(4, 2) - P(3, 2) * P(4, 1)
    _, G = pipeline(True, True, True)
    gt = [[G(1, 1), G(1, 2), G(2, 1), G(2, 2)], [G(1, 3), G(1, 4), G(2, 3), G(2, 4)],
          [G(3, 3), G(3, 4), G(4, 3), G(4, 4)], [G(3, 1), G(3, 2), G(4, 1), G(4, 2)]]
    out["DETGTILDE"] = leibniz(gt)
    return out


def main():
    counts = {name: len(p.terms()) for name, p in relations().items()}
    counts["det_Y"] = len(leibniz(mat("X", 4)).terms())
    json.dump({"term_counts": counts}, sys.stdout, indent=1, sort_keys=True)
    sys.stdout.write("\n")


if __name__ == "__main__":
    main()
