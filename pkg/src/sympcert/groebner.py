"""Buchberger's algorithm, normal forms and Rabinowitsch refutation.

The division routine walks the working polynomial from the top monomial down
with a heap, so each term is inspected once.  When every basis element is free
of parameters (the case for the symplectic ideal) normal forms are linear over
the parameter ring, and :meth:`GroebnerBasis.normal_form` reduces each distinct
main-variable monomial once and caches the result.
"""

from __future__ import annotations

import hashlib
import heapq
import json
import logging
import time
from dataclasses import dataclass, field
from typing import Sequence

from gmpy2 import mpq

from .polyring import (
    DEGREVLEX,
    LEX,
    MonomialOrder,
    Poly,
    PolyError,
    VariableTable,
    from_json,
)

log = logging.getLogger(__name__)


# ---------------------------------------------------------------------------
# Division
# ---------------------------------------------------------------------------


def _neg_key(order: MonomialOrder, table: VariableTable):
    key = order.key_function(table)
    if order.is_plain_lex:
        return lambda m: -m

    def neg(m):
        k = key(m)
        return tuple(-x for x in _flatten(k))
    return neg


def _flatten(k):
    for x in k:
        if isinstance(x, tuple):
            yield from x
        else:
            yield x


def _divide(terms: dict, divisors, table: VariableTable, neg_key, want_quotients: bool):
    """Full reduction of ``terms`` by monic ``divisors`` [(lm, tail_dict), ...].

    Returns (remainder dict, quotient dicts or None, number of reduction steps).
    """
    work = dict(terms)
    heap = [(neg_key(m), m) for m in work]
    heapq.heapify(heap)
    rem: dict[int, mpq] = {}
    quots = [dict() for _ in divisors] if want_quotients else None
    guard = table.guard
    steps = 0
    while heap:
        _, m = heapq.heappop(heap)
        c = work.pop(m, None)
        if c is None:
            continue
        for idx, (lm, tail) in enumerate(divisors):
            if ((m | guard) - lm) & guard == guard:
                q = m - lm
                steps += 1
                if quots is not None:
                    qd = quots[idx]
                    v = qd.get(q)
                    qd[q] = c if v is None else v + c
                for tm, tc in tail.items():
                    nm = tm + q
                    v = work.get(nm)
                    if v is None:
                        work[nm] = -c * tc
                        heapq.heappush(heap, (neg_key(nm), nm))
                    else:
                        v = v - c * tc
                        if v:
                            work[nm] = v
                        else:
                            del work[nm]
                break
        else:
            rem[m] = c
    if quots is not None:
        quots = [{k: v for k, v in qd.items() if v} for qd in quots]
    return rem, quots, steps


# ---------------------------------------------------------------------------
# Data types
# ---------------------------------------------------------------------------


@dataclass
class ReductionResult:
    """``source == sum(q*g for q, g in zip(quotients, basis)) + remainder``."""

    remainder: Poly
    quotients: list[Poly]
    stats: dict = field(default_factory=dict)


class GroebnerBasis:
    """Reduced, monic Gröbner basis with its source generators."""

    def __init__(self, elements: Sequence[Poly], order: MonomialOrder = LEX,
                 source_generators: Sequence[Poly] = ()):
        if not elements:
            raise PolyError("a Groebner basis needs at least one element")
        self.table = elements[0].table
        self.order = order
        self.elements = list(elements)
        self.source_generators = list(source_generators)
        self._neg_key = _neg_key(order, self.table)
        self._divisors = []
        for g in self.elements:
            lc, lm = g.leading_term(order)
            if lc != 1:
                raise PolyError("basis elements must be monic")
            tail = {m: c for m, c in g.items() if m != lm}
            self._divisors.append((lm, tail))
        self.param_free = all(not (m & ~self.table.main_mask)
                              for g in self.elements for m in g.monomials())
        self._nf_cache: dict[int, tuple[dict, list[dict]]] = {}

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    @property
    def leading_monomials(self) -> list[int]:
        return [lm for lm, _ in self._divisors]

    # reduction ------------------------------------------------------------

    def _monomial_nf(self, xmono: int):
        hit = self._nf_cache.get(xmono)
        if hit is None:
            rem, quots, _ = _divide({xmono: mpq(1)}, self._divisors, self.table,
                                    self._neg_key, True)
            hit = (rem, quots)
            self._nf_cache[xmono] = hit
        return hit

    def normal_form(self, p: Poly, quotients: bool = True) -> ReductionResult:
        """Fully reduced remainder of ``p`` and the matching quotients."""
        if p.table != self.table:
            raise PolyError("polynomial and basis live over different tables")
        t0 = time.perf_counter()
        stats = {"input_terms": len(p), "input_degree": p.degree("main")}
        if self.param_free:
            rem, quots = self._linear_nf(p, quotients)
            stats["cached_monomials"] = len(self._nf_cache)
        else:
            rem, quots, steps = _divide(p._terms, self._divisors, self.table,
                                        self._neg_key, quotients)
            stats["steps"] = steps
        remainder = Poly._raw(self.table, rem)
        qpolys = [Poly._raw(self.table, q) for q in quots] if quotients else []
        stats["remainder_terms"] = len(remainder)
        stats["seconds"] = round(time.perf_counter() - t0, 6)
        log.debug("normal form: %s", stats)
        return ReductionResult(remainder, qpolys, stats)

    def _linear_nf(self, p: Poly, want_quotients: bool):
        mask = self.table.main_mask
        rem: dict[int, mpq] = {}
        quots = [dict() for _ in self._divisors] if want_quotients else None
        for m, c in p.items():
            xm = m & mask
            pm = m ^ xm
            r, qs = self._monomial_nf(xm)
            for rm, rc in r.items():
                k = rm + pm
                v = rem.get(k)
                rem[k] = rc * c if v is None else v + rc * c
            if quots is not None:
                for qd, q in zip(quots, qs):
                    for qm, qc in q.items():
                        k = qm + pm
                        v = qd.get(k)
                        qd[k] = qc * c if v is None else v + qc * c
        rem = {k: v for k, v in rem.items() if v}
        if quots is not None:
            quots = [{k: v for k, v in qd.items() if v} for qd in quots]
        return rem, quots

    def reduce(self, p: Poly) -> Poly:
        return self.normal_form(p, quotients=False).remainder

    def contains(self, p: Poly) -> bool:
        return self.reduce(p).is_zero()

    def is_groebner(self) -> bool:
        """Check that every S-polynomial of the elements reduces to zero."""
        for i in range(len(self.elements)):
            for j in range(i + 1, len(self.elements)):
                s = spoly(self.elements[i], self.elements[j], self.order)
                if not self.reduce(s).is_zero():
                    return False
        return True

    def is_reduced(self) -> bool:
        lms = self.leading_monomials
        for i, g in enumerate(self.elements):
            for m in g.monomials():
                for j, lm in enumerate(lms):
                    if self.table.divides(lm, m) and (i != j or m != lms[i]):
                        return False
        return True

    # persistence ----------------------------------------------------------

    def to_json(self) -> dict:
        return {
            "order": self.order.kind,
            "vars": list(self.table.names),
            "generators": [g.to_json(self.order) for g in self.source_generators],
            "elements": [g.to_json(self.order) for g in self.elements],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), separators=(",", ":"))

    def digest(self) -> str:
        return hashlib.sha256(self.dumps().encode()).hexdigest()

    @classmethod
    def from_json(cls, data, table: VariableTable | None = None) -> "GroebnerBasis":
        if isinstance(data, str):
            data = json.loads(data)
        order = MonomialOrder(data["order"])
        elements = [from_json(e, table) for e in data["elements"]]
        table = elements[0].table
        gens = [from_json(g, table) for g in data.get("generators", [])]
        return cls(elements, order, gens)


# ---------------------------------------------------------------------------
# Buchberger
# ---------------------------------------------------------------------------


def spoly(f: Poly, g: Poly, order: MonomialOrder = LEX) -> Poly:
    cf, mf = f.leading_term(order)
    cg, mg = g.leading_term(order)
    lcm = f.table.lcm(mf, mg)
    return f.mul_term(lcm - mf, 1 / cf) - g.mul_term(lcm - mg, 1 / cg)


def buchberger(generators: Sequence[Poly], order: MonomialOrder = LEX) -> GroebnerBasis:
    """Reduced Gröbner basis of the ideal generated by ``generators``.

    Pairs are pruned with the Gebauer-Moeller form of Buchberger's product
    and chain criteria and processed by the normal selection strategy
    (smallest lcm first).  The output is deterministic for fixed inputs.
    """
    gens = [g for g in generators if not g.is_zero()]
    if not generators:
        raise PolyError("buchberger needs at least one generator")
    if not gens:
        raise PolyError("the zero ideal has no monic basis")
    table = gens[0].table
    key = order.key_function(table)
    neg_key = _neg_key(order, table)
    t0 = time.perf_counter()

    store: list[tuple[int, dict]] = []   # (lm, tail) of every monic poly kept
    polys: list[Poly] = []
    active: list[int] = []
    pairs: list[tuple[int, int, int]] = []   # (i, j, lcm)

    def add(h: Poly):
        nonlocal active, pairs
        h = h.monic(order)
        _, lh = h.leading_term(order)
        k = len(polys)
        polys.append(h)
        store.append((lh, {m: c for m, c in h.items() if m != lh}))
        # Gebauer-Moeller update: chain criterion on the new pairs ...
        cand = [(i, table.lcm(lh, store[i][0])) for i in active]
        kept = []
        while cand:
            i, lcm_i = cand.pop(0)
            disjoint = lcm_i == lh + store[i][0]
            if disjoint or not any(table.divides(l, lcm_i) for _, l in cand + kept):
                kept.append((i, lcm_i))
        # ... then the product criterion
        new_pairs = [(i, k, l) for i, l in kept if l != lh + store[i][0]]
        # prune old pairs whose lcm is strictly divisible through h
        old = []
        for i, j, l in pairs:
            if (table.divides(lh, l)
                    and table.lcm(store[i][0], lh) != l
                    and table.lcm(store[j][0], lh) != l):
                continue
            old.append((i, j, l))
        pairs = old + new_pairs
        active = [i for i in active if not table.divides(lh, store[i][0])] + [k]

    for g in gens:
        r, _, _ = _divide(g._terms, [store[i] for i in active], table, neg_key, False)
        if r:
            add(Poly._raw(table, r))

    processed = 0
    while pairs:
        best = min(range(len(pairs)),
                   key=lambda n: (key(pairs[n][2]), pairs[n][0], pairs[n][1]))
        i, j, _ = pairs.pop(best)
        processed += 1
        s = spoly(polys[i], polys[j], order)
        r, _, _ = _divide(s._terms, [store[a] for a in active], table, neg_key, False)
        if r:
            add(Poly._raw(table, r))

    basis = _interreduce([polys[i] for i in active], order)
    log.debug("buchberger: %d pairs, %d elements, %.3fs", processed, len(basis),
              time.perf_counter() - t0)
    return GroebnerBasis(basis, order, gens)


def _interreduce(polys: list[Poly], order: MonomialOrder) -> list[Poly]:
    """Minimal, reduced, monic basis sorted by leading monomial (descending)."""
    table = polys[0].table
    key = order.key_function(table)
    neg_key = _neg_key(order, table)
    lead = [(p.leading_term(order)[1], p.monic(order)) for p in polys]
    minimal = []
    for idx, (lm, p) in enumerate(lead):
        dominated = False
        for jdx, (lm2, _) in enumerate(lead):
            if jdx == idx:
                continue
            if table.divides(lm2, lm) and (lm2 != lm or jdx < idx):
                dominated = True
                break
        if not dominated:
            minimal.append((lm, p))
    minimal.sort(key=lambda t: key(t[0]), reverse=True)
    out = []
    for idx, (lm, p) in enumerate(minimal):
        others = []
        for jdx, (lm2, q) in enumerate(minimal):
            if jdx != idx:
                others.append((lm2, {m: c for m, c in q.items() if m != lm2}))
        tail = {m: c for m, c in p.items() if m != lm}
        r, _, _ = _divide(tail, others, table, neg_key, False)
        r[lm] = mpq(1)
        out.append(Poly._raw(table, r))
    return out


# ---------------------------------------------------------------------------
# Convenience functions
# ---------------------------------------------------------------------------


def normal_form(p: Poly, gb: GroebnerBasis) -> ReductionResult:
    return gb.normal_form(p)


def ideal_member(p: Poly, gb: GroebnerBasis) -> bool:
    return gb.contains(p)


@dataclass
class RefuteResult:
    """Outcome of :func:`refute`; truthy exactly when the system is refuted."""

    refuted: bool
    basis: list[Poly]
    seconds: float

    def __bool__(self) -> bool:
        return self.refuted


def refute(eqs: Sequence[Poly], neqs: Sequence[Poly] = (),
           order: MonomialOrder = DEGREVLEX) -> RefuteResult:
    """Decide whether ``eqs = 0`` together with ``neqs != 0`` is contradictory.

    Uses 1 in ideal(eqs, t*prod(neqs) - 1) for a fresh symbol t.  A false
    result means inconclusive; the reduced basis is returned for inspection.
    """
    polys = [p for p in list(eqs) + list(neqs)]
    if not polys:
        return RefuteResult(False, [], 0.0)
    src = polys[0].table
    used = set()
    for p in polys:
        if p.table != src:
            raise PolyError("refute inputs live over different tables")
        for m in p.monomials():
            if m & src.main_mask:
                raise PolyError("refute only accepts parameter polynomials")
        used |= p.symbols()
    names = [n for n in src.names if n in used]
    fresh = "t"
    while fresh in names:
        fresh += "_"
    table = VariableTable((), names, (fresh,))
    idx = [src.index[n] for n in names]

    def move(p: Poly) -> Poly:
        out = {}
        for m, c in p.items():
            exps = src.exponents(m)
            out[table.pack([exps[i] for i in idx] + [0])] = c
        return Poly._raw(table, out)

    t0 = time.perf_counter()
    system = [move(p) for p in eqs if not p.is_zero()]
    if any(p.is_zero() for p in neqs):
        # a hypothesis "0 != 0" is already contradictory
        return RefuteResult(True, [Poly.const(1, table)], 0.0)
    prod = Poly.const(1, table)
    for p in neqs:
        prod = prod * move(p)
    system.append(Poly.var(fresh, table) * prod - 1)
    gb = buchberger(system, order)
    refuted = len(gb.elements) == 1 and gb.elements[0].is_constant()
    return RefuteResult(refuted, gb.elements, time.perf_counter() - t0)
