"""Walk through the symplectic ideal and the relation polynomials.

Builds the reduced lex basis of I(Sp4), reduces det(Y) - 1, then builds each
relation and prints its size and the size of its canonical normal form.
"""

import time

from sympcert.groebner import buchberger
from sympcert.relations import RelationId, build_relation, det_minus_one, sp4_generators


def main():
    gens = sp4_generators()
    t0 = time.perf_counter()
    gb = buchberger(gens)
    print(f"reduced basis: {len(gb)} elements in {time.perf_counter() - t0:.2f}s")
    for g in gb:
        print("  ", g)
    print("det(Y) - 1 reduces to", gb.reduce(det_minus_one()) or "0")

    print(f"\n{'relation':<12}{'terms':>8}{'normal form':>13}")
    for rid in RelationId:
        p = build_relation(rid)
        nf = gb.reduce(p)
        print(f"{rid.value:<12}{len(p):>8}{len(nf):>13}")


if __name__ == "__main__":
    main()
