import random
import time

import pytest
import sympy
from gmpy2 import mpq

from sympcert.groebner import (
    GroebnerBasis,
    buchberger,
    ideal_member,
    normal_form,
    refute,
)
from sympcert.polyring import DEFAULT_TABLE, DEGREVLEX, LEX, Poly, PolyError, VariableTable, parse
from sympcert.relations import det_minus_one, sp4_basis, sp4_generators
from sympcert.symmat import mat_inverse_rational

XS = [f"X{i}{j}" for i in range(1, 5) for j in range(1, 5)]


def _to_sympy(p: Poly, syms):
    return sympy.sympify(str(p).replace("^", "**"), locals=syms)


def test_sp4_basis_matches_sympy():
    syms = {n: sympy.Symbol(n) for n in XS}
    gens = [_to_sympy(f, syms) for f in sp4_generators()]
    ref = sympy.groebner(gens, *[syms[n] for n in XS], order="lex")
    ours = {sympy.expand(_to_sympy(g, syms)) for g in sp4_basis()}
    theirs = {sympy.expand(g / sympy.Poly(g, *syms.values()).LC()) for g in ref.exprs}
    assert ours == theirs


def test_buchberger_time_and_shape():
    t0 = time.perf_counter()
    gb = buchberger(sp4_generators())
    assert time.perf_counter() - t0 < 10
    assert gb.is_groebner() and gb.is_reduced()
    assert all(g.leading_term(LEX)[0] == 1 for g in gb)
    lms = gb.leading_monomials
    assert lms == sorted(lms, reverse=True)


def test_buchberger_is_canonical_under_generator_order():
    gens = sp4_generators()
    ref = [g.dumps() for g in buchberger(gens)]
    assert [g.dumps() for g in buchberger(gens[::-1])] == ref
    assert [g.dumps() for g in buchberger([g.scale(mpq(-3, 2)) for g in gens])] == ref


def test_small_bases():
    assert [str(g) for g in buchberger([parse("X11")])] == ["X11"]
    gb = buchberger([parse("X11 - 1"), parse("X11*X12 - X12")])
    assert [str(g) for g in gb] == ["X11 - 1"]


def test_generators_reduce_to_zero():
    gb = sp4_basis()
    for f in sp4_generators():
        assert normal_form(f, gb).remainder.is_zero()


def test_normal_form_examples():
    gb = sp4_basis()
    f2 = sp4_generators()[1]
    assert normal_form(f2 + parse("X14"), gb).remainder == parse("X14")
    assert normal_form(det_minus_one(), gb).remainder.is_zero()


def test_quotients_reconstruct_input():
    gb = sp4_basis()
    p = parse("X11*X44*X23 - 3*X12^2 + a11*X31*X42")
    res = gb.normal_form(p)
    total = res.remainder
    for q, g in zip(res.quotients, gb):
        total = total + q * g
    assert total == p


def test_ideal_membership():
    gb = sp4_basis()
    assert ideal_member(sp4_generators()[0] * parse("X44"), gb)
    assert not ideal_member(Poly.const(1), gb)
    assert ideal_member(det_minus_one(), gb)


def _random_symplectic(rng):
    """Product of rational symplectic generators (shears and block diagonals)."""
    def block(a):
        inv_t = [list(r) for r in zip(*mat_inverse_rational(a))]
        return [a[0] + [0, 0], a[1] + [0, 0], [0, 0] + inv_t[0], [0, 0] + inv_t[1]]

    def shear(s, lower):
        m = [[mpq(int(i == j)) for j in range(4)] for i in range(4)]
        for i in range(2):
            for j in range(2):
                if lower:
                    m[2 + i][j] = s[i][j]
                else:
                    m[i][2 + j] = s[i][j]
        return m

    def mul(a, b):
        return [[sum(a[i][k] * b[k][j] for k in range(4)) for j in range(4)] for i in range(4)]

    def r():
        return mpq(rng.randint(-5, 5), rng.randint(1, 4))

    m = [[mpq(int(i == j)) for j in range(4)] for i in range(4)]
    for _ in range(3):
        while True:
            a = [[r(), r()], [r(), r()]]
            if a[0][0] * a[1][1] - a[0][1] * a[1][0]:
                break
        s = r(), r()
        sym = [[s[0], s[1]], [s[1], r()]]
        m = mul(mul(m, block(a)), shear(sym, rng.random() < 0.5))
    return m


def test_det_minus_one_vanishes_on_samples():
    rng = random.Random(7)
    det = det_minus_one()
    gens = sp4_generators()
    for _ in range(50):
        y = _random_symplectic(rng)
        point = {f"X{i + 1}{j + 1}": y[i][j] for i in range(4) for j in range(4)}
        assert all(f.evaluate(point) == 0 for f in gens)
        assert det.evaluate(point) == 0


def test_refute_trivial_systems():
    t = VariableTable((), ("x", "y"))
    x, y = Poly.var("x", t), Poly.var("y", t)
    t0 = time.perf_counter()
    assert refute([x], [x]).refuted
    assert refute([x * y], [x, y]).refuted
    assert time.perf_counter() - t0 < 1


def test_refute_consistent_system_is_not_refuted():
    t = VariableTable((), ("x", "y"))
    x, y = Poly.var("x", t), Poly.var("y", t)
    res = refute([x * y], [x])
    assert not res.refuted and not res
    assert res.basis


def test_refute_zero_hypothesis_and_main_vars():
    assert refute([], [Poly.const(0)]).refuted
    with pytest.raises(PolyError):
        refute([parse("X11")], [])


def test_refute_ra_coefficient_system():
    from sympcert.certifier.coeffs import relation_coeff_map
    cmap = relation_coeff_map("RA")
    dets = [parse(f"{k}11*{k}22 - {k}12*{k}21") for k in "cde"]
    res = refute(list(cmap.entries.values()), dets)
    assert res.refuted and res.seconds < 60


def test_persistence_roundtrip():
    gb = sp4_basis()
    again = GroebnerBasis.from_json(gb.dumps())
    assert again.dumps() == gb.dumps() and again.digest() == gb.digest()
    assert len(again.source_generators) == 6


def test_degrevlex_basis_is_groebner():
    gb = buchberger(sp4_generators(), DEGREVLEX)
    assert gb.is_groebner() and gb.is_reduced()
    assert gb.reduce(det_minus_one()).is_zero()
