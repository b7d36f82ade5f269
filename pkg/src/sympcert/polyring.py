"""Sparse multivariate polynomials over the rationals.

Monomials are packed into a single Python integer, one fixed-width field per
symbol, with the first symbol of the table in the most significant field.  With
that layout the lexicographic order on exponent vectors is plain integer
comparison, monomial multiplication is integer addition, and divisibility is a
single subtraction against a guard-bit mask.

Coefficients are ``gmpy2.mpq``.  A polynomial is a dict from packed monomial to
nonzero coefficient, so two polynomials are equal exactly when their dicts are.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Union

from gmpy2 import mpq

FIELD_BITS = 16
MAX_EXPONENT = (1 << (FIELD_BITS - 1)) - 1
_FIELD_MASK = (1 << FIELD_BITS) - 1

Scalar = Union[int, Fraction, "mpq", str]


class PolyError(ValueError):
    """Raised for malformed polynomial input or unknown symbols."""


def to_rational(value) -> mpq:
    """Convert an int, Fraction, mpq or ``"p/q"`` string to ``mpq``."""
    if isinstance(value, str):
        text = value.strip()
        if not re.fullmatch(r"[+-]?\d+(/\d+)?", text):
            raise PolyError(f"not a rational literal: {value!r}")
        if text.endswith("/0"):
            raise PolyError("zero denominator")
        return mpq(text)
    if isinstance(value, Fraction):
        return mpq(value.numerator, value.denominator)
    if isinstance(value, bool):
        raise PolyError("booleans are not coefficients")
    return mpq(value)


# ---------------------------------------------------------------------------
# Variable table
# ---------------------------------------------------------------------------


def _matrix_names(prefix: str, rows: int = 2, cols: int = 2) -> list[str]:
    return [f"{prefix}{i}{j}" for i in range(1, rows + 1) for j in range(1, cols + 1)]


MAIN_VARS = tuple(_matrix_names("X", 4, 4))
PARAM_VARS = tuple(
    _matrix_names("a") + _matrix_names("b") + _matrix_names("c")
    + _matrix_names("d") + _matrix_names("f") + _matrix_names("e")
    + ["a0", "b0", "c0", "aS", "bS", "cS", "d1"]
)
AUX_VARS = ("t", "n", "p", "q", "r")


class VariableTable:
    """Immutable ordered set of symbols split into main variables and the rest.

    Main variables always occupy the most significant fields, so under lex
    every main variable outranks every parameter.  ``aux`` symbols (fresh
    saturation and family symbols) rank below the parameters.
    """

    def __init__(self, main: Iterable[str], params: Iterable[str] = (), aux: Iterable[str] = ()):
        self.main = tuple(main)
        self.params = tuple(params)
        self.aux = tuple(aux)
        self.names = self.main + self.params + self.aux
        if len(set(self.names)) != len(self.names):
            raise PolyError("duplicate symbol in variable table")
        for name in self.names:
            if not re.fullmatch(r"[A-Za-z][A-Za-z0-9_]*", name):
                raise PolyError(f"bad symbol name {name!r}")
        self.nvars = len(self.names)
        self.index = {name: i for i, name in enumerate(self.names)}
        top = FIELD_BITS * (self.nvars - 1)
        self._shift = tuple(top - FIELD_BITS * i for i in range(self.nvars))
        self.guard = sum(1 << (s + FIELD_BITS - 1) for s in self._shift)
        self.main_mask = sum(_FIELD_MASK << self._shift[i] for i in range(len(self.main)))
        self.param_mask = sum(_FIELD_MASK << s for s in self._shift) ^ self.main_mask

    def __repr__(self) -> str:
        return f"VariableTable(main={len(self.main)}, params={len(self.params)}, aux={len(self.aux)})"

    def __eq__(self, other) -> bool:
        return isinstance(other, VariableTable) and (
            self.main, self.params, self.aux) == (other.main, other.params, other.aux)

    def __hash__(self) -> int:
        return hash((self.main, self.params, self.aux))

    # monomial helpers -----------------------------------------------------

    def var_mono(self, name: str, power: int = 1) -> int:
        if name not in self.index:
            raise PolyError(f"unknown symbol {name!r}")
        if not 0 <= power <= MAX_EXPONENT:
            raise OverflowError(f"exponent {power} out of range")
        return power << self._shift[self.index[name]]

    def exponents(self, mono: int) -> tuple[int, ...]:
        return tuple((mono >> s) & _FIELD_MASK for s in self._shift)

    def pack(self, exps: Iterable[int]) -> int:
        mono = 0
        exps = tuple(exps)
        if len(exps) != self.nvars:
            raise PolyError("exponent vector has wrong length")
        for e, s in zip(exps, self._shift):
            if not 0 <= e <= MAX_EXPONENT:
                raise OverflowError(f"exponent {e} out of range")
            mono |= e << s
        return mono

    def sparse_exponents(self, mono: int) -> list[tuple[int, int]]:
        """(index, exponent) pairs for the symbols present in ``mono``."""
        out = []
        top = self.nvars - 1
        while mono:
            field = ((mono & -mono).bit_length() - 1) // FIELD_BITS
            shift = field * FIELD_BITS
            e = (mono >> shift) & _FIELD_MASK
            out.append((top - field, e))
            mono ^= e << shift
        out.reverse()
        return out

    def divides(self, a: int, b: int) -> bool:
        """True when monomial ``a`` divides monomial ``b``."""
        g = self.guard
        return ((b | g) - a) & g == g

    def lcm(self, a: int, b: int) -> int:
        out = 0
        for s in self._shift:
            ea = (a >> s) & _FIELD_MASK
            eb = (b >> s) & _FIELD_MASK
            out |= (ea if ea > eb else eb) << s
        return out

    def gcd(self, a: int, b: int) -> int:
        out = 0
        for s in self._shift:
            ea = (a >> s) & _FIELD_MASK
            eb = (b >> s) & _FIELD_MASK
            out |= (ea if ea < eb else eb) << s
        return out

    def degree(self, mono: int, which: str = "all") -> int:
        if which == "main":
            mono &= self.main_mask
        elif which == "params":
            mono &= ~self.main_mask
        total = 0
        while mono:
            total += mono & _FIELD_MASK
            mono >>= FIELD_BITS
        return total

    def check_mono(self, mono: int) -> int:
        if mono & self.guard:
            raise OverflowError("exponent overflow in monomial product")
        return mono

    def mono_str(self, mono: int) -> str:
        parts = []
        for i, e in self.sparse_exponents(mono):
            parts.append(self.names[i] if e == 1 else f"{self.names[i]}^{e}")
        return "*".join(parts) if parts else "1"

    def parse_mono(self, text: str) -> int:
        """Parse a bare monomial such as ``"X13^2*X31^2"`` or ``"X13 X44"``."""
        p = parse(text, self)
        if len(p) != 1 or p.coeff_of(next(iter(p._terms))) != 1:
            raise PolyError(f"not a monomial: {text!r}")
        return next(iter(p._terms))


DEFAULT_TABLE = VariableTable(MAIN_VARS, PARAM_VARS, AUX_VARS)


# ---------------------------------------------------------------------------
# Monomial orders
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MonomialOrder:
    """Lex or degree-reverse-lex, applied blockwise: main variables first.

    ``ranking`` optionally permutes the main variables (highest first).
    Parameters and auxiliary symbols always compare after the main block.
    """

    kind: str = "lex"
    ranking: tuple[str, ...] | None = None

    def __post_init__(self):
        if self.kind not in ("lex", "degrevlex"):
            raise PolyError(f"unknown monomial order {self.kind!r}")

    @property
    def is_plain_lex(self) -> bool:
        return self.kind == "lex" and self.ranking is None

    def key_function(self, table: VariableTable):
        """Return a callable mapping packed monomials to sortable keys."""
        if self.ranking is not None and sorted(self.ranking) != sorted(table.main):
            raise PolyError("ranking must be a permutation of the main variables")
        if self.is_plain_lex:
            return _identity
        nmain = len(table.main)
        main_pos = ([table.index[v] for v in self.ranking] if self.ranking
                    else list(range(nmain)))
        rest_pos = list(range(nmain, table.nvars))
        shifts = table._shift

        if self.kind == "lex":
            def key(mono: int):
                out = 0
                for i in main_pos:
                    out = (out << FIELD_BITS) | ((mono >> shifts[i]) & _FIELD_MASK)
                return (out, mono & ~table.main_mask)
            return key

        def block(mono: int, positions):
            exps = [(mono >> shifts[i]) & _FIELD_MASK for i in positions]
            # degrevlex: larger total degree wins, ties broken by the smallest
            # exponent in the last variable
            return (sum(exps), tuple(-e for e in reversed(exps)))

        def key(mono: int):
            return block(mono, main_pos) + block(mono, rest_pos)
        return key


def _identity(x):
    return x


LEX = MonomialOrder("lex")
DEGREVLEX = MonomialOrder("degrevlex")


# ---------------------------------------------------------------------------
# Polynomials
# ---------------------------------------------------------------------------


class Poly:
    """Sparse polynomial with rational coefficients over a ``VariableTable``."""

    __slots__ = ("table", "_terms")

    def __init__(self, table: VariableTable = DEFAULT_TABLE, terms: Mapping[int, Scalar] | None = None):
        self.table = table
        self._terms: dict[int, mpq] = {}
        if terms:
            for mono, c in terms.items():
                c = to_rational(c)
                if c:
                    table.check_mono(mono)
                    self._terms[mono] = c

    @classmethod
    def _raw(cls, table: VariableTable, terms: dict) -> "Poly":
        p = cls.__new__(cls)
        p.table = table
        p._terms = terms
        return p

    @classmethod
    def const(cls, value: Scalar, table: VariableTable = DEFAULT_TABLE) -> "Poly":
        c = to_rational(value)
        return cls._raw(table, {0: c} if c else {})

    @classmethod
    def var(cls, name: str, table: VariableTable = DEFAULT_TABLE) -> "Poly":
        return cls._raw(table, {table.var_mono(name): mpq(1)})

    @classmethod
    def monomial(cls, mono: int, coeff: Scalar = 1, table: VariableTable = DEFAULT_TABLE) -> "Poly":
        c = to_rational(coeff)
        return cls._raw(table, {table.check_mono(mono): c} if c else {})

    # basic protocol -------------------------------------------------------

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return not self._terms or (len(self._terms) == 1 and 0 in self._terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, Poly):
            return self.table == other.table and self._terms == other._terms
        try:
            return self._terms == Poly.const(other, self.table)._terms
        except (PolyError, TypeError):
            return NotImplemented

    def __hash__(self) -> int:
        return hash(frozenset(self._terms.items()))

    def coeff_of(self, mono: int) -> mpq:
        return self._terms.get(mono, mpq(0))

    def items(self):
        return self._terms.items()

    def monomials(self):
        return self._terms.keys()

    def terms(self, order: MonomialOrder = LEX) -> list[tuple[mpq, int]]:
        """(coefficient, monomial) pairs, strictly descending in ``order``."""
        key = order.key_function(self.table)
        return [(self._terms[m], m) for m in sorted(self._terms, key=key, reverse=True)]

    def leading_term(self, order: MonomialOrder = LEX) -> tuple[mpq, int]:
        if not self._terms:
            raise PolyError("zero polynomial has no leading term")
        key = order.key_function(self.table)
        m = max(self._terms, key=key)
        return self._terms[m], m

    def monic(self, order: MonomialOrder = LEX) -> "Poly":
        if not self._terms:
            return self
        lc, _ = self.leading_term(order)
        return self.scale(1 / lc)

    def degree(self, which: str = "all") -> int:
        """Total degree in all symbols, main variables only, or parameters only."""
        if not self._terms:
            return -1
        return max(self.table.degree(m, which) for m in self._terms)

    def symbols(self) -> set[str]:
        seen = 0
        for m in self._terms:
            seen |= m
        return {self.table.names[i] for i, _ in self.table.sparse_exponents(seen)}

    def content(self) -> mpq:
        """Positive rational g with self/g having coprime integer coefficients."""
        from gmpy2 import gcd, lcm
        num = 0
        den = 1
        for c in self._terms.values():
            num = gcd(num, c.numerator)
            den = lcm(den, c.denominator)
        return mpq(num, den) if num else mpq(0)

    # arithmetic -----------------------------------------------------------

    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            if other.table != self.table:
                raise PolyError("polynomials live over different variable tables")
            return other
        return Poly.const(other, self.table)

    def __add__(self, other) -> "Poly":
        other = self._coerce(other)
        out = dict(self._terms)
        for m, c in other._terms.items():
            v = out.get(m)
            if v is None:
                out[m] = c
            else:
                v = v + c
                if v:
                    out[m] = v
                else:
                    del out[m]
        return Poly._raw(self.table, out)

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly._raw(self.table, {m: -c for m, c in self._terms.items()})

    def __sub__(self, other) -> "Poly":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "Poly":
        return self._coerce(other) - self

    def scale(self, value: Scalar) -> "Poly":
        c = to_rational(value)
        if not c:
            return Poly._raw(self.table, {})
        return Poly._raw(self.table, {m: v * c for m, v in self._terms.items()})

    def mul_term(self, mono: int, coeff) -> "Poly":
        if not coeff:
            return Poly._raw(self.table, {})
        out = {m + mono: v * coeff for m, v in self._terms.items()}
        if mono and any(m & self.table.guard for m in out):
            raise OverflowError("exponent overflow in monomial product")
        return Poly._raw(self.table, out)

    def __mul__(self, other) -> "Poly":
        if not isinstance(other, Poly):
            return self.scale(other)
        other = self._coerce(other)
        a, b = self._terms, other._terms
        if len(a) < len(b):
            a, b = b, a
        out: dict[int, mpq] = {}
        get = out.get
        for mb, cb in b.items():
            for ma, ca in a.items():
                m = ma + mb
                v = get(m)
                if v is None:
                    out[m] = ca * cb
                else:
                    out[m] = v + ca * cb
        out = {m: c for m, c in out.items() if c}
        guard = self.table.guard
        if any(m & guard for m in out):
            raise OverflowError("exponent overflow in monomial product")
        return Poly._raw(self.table, out)

    def __rmul__(self, other) -> "Poly":
        return self.scale(other)

    def __pow__(self, k: int) -> "Poly":
        if not isinstance(k, int) or k < 0:
            raise PolyError("only non-negative integer powers are supported")
        result = Poly.const(1, self.table)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    # substitution and evaluation -----------------------------------------

    def substitute(self, assignment: Mapping[str, Union["Poly", Scalar]]) -> "Poly":
        """Simultaneously replace symbols by polynomials or rationals."""
        table = self.table
        images: dict[int, Poly] = {}
        for name, value in assignment.items():
            if name not in table.index:
                raise PolyError(f"unknown symbol {name!r}")
            images[table.index[name]] = value if isinstance(value, Poly) else Poly.const(value, table)
        if not images:
            return self
        keep_mask = 0
        for i in range(table.nvars):
            if i not in images:
                keep_mask |= _FIELD_MASK << table._shift[i]
        power_cache: dict[tuple[int, int], Poly] = {}

        def power(i: int, e: int) -> Poly:
            key = (i, e)
            if key not in power_cache:
                power_cache[key] = images[i] ** e
            return power_cache[key]

        # group terms by the substituted part of the monomial
        groups: dict[int, dict[int, mpq]] = {}
        for m, c in self._terms.items():
            groups.setdefault(m & ~keep_mask, {})[m & keep_mask] = c
        out = Poly._raw(table, {})
        for sub_mono, rest in groups.items():
            factor = Poly.const(1, table)
            for i, e in table.sparse_exponents(sub_mono):
                factor = factor * power(i, e)
            out = out + factor * Poly._raw(table, rest)
        return out

    def evaluate(self, assignment: Mapping[str, Scalar]) -> mpq:
        """Exact rational value; every symbol present must be assigned."""
        missing = self.symbols() - set(assignment)
        if missing:
            raise PolyError(f"unassigned symbols: {sorted(missing)}")
        vals = {self.table.index[k]: to_rational(v) for k, v in assignment.items()
                if k in self.table.index}
        total = mpq(0)
        for m, c in self._terms.items():
            term = c
            for i, e in self.table.sparse_exponents(m):
                term *= vals[i] ** e
            total += term
        return total

    def compile(self):
        """Return ``f(values)`` evaluating self at a dict of symbol -> rational.

        Every distinct main-variable part and parameter part of a monomial is
        valued once, each from a parent monomial with one fewer factor, so a
        term costs two multiplications however high its degree.
        """
        table = self.table
        mask = table.main_mask
        order: dict[int, int] = {0: 0}
        steps: list[tuple[int, int]] = []      # (parent slot, symbol index)

        def slot(m: int) -> int:
            k = order.get(m)
            if k is None:
                i, _ = table.sparse_exponents(m)[-1]
                parent = slot(m - (1 << table._shift[i]))
                steps.append((parent, i))
                k = order[m] = len(steps)
            return k

        plan = [(c, slot(m & mask), slot(m & ~mask)) for m, c in self._terms.items()]
        used = sorted({i for _, i in steps})
        names = {i: table.names[i] for i in used}

        def evaluate(values: Mapping[str, Scalar]) -> mpq:
            try:
                var = {i: to_rational(values[n]) for i, n in names.items()}
            except KeyError as exc:
                raise PolyError(f"unassigned symbol {exc.args[0]!r}") from None
            vals = [mpq(1)]
            for parent, i in steps:
                vals.append(vals[parent] * var[i])
            total = mpq(0)
            for c, a, b in plan:
                total += c * vals[a] * vals[b]
            return total
        return evaluate

    # main-variable structure ----------------------------------------------

    def split_main(self) -> dict[int, "Poly"]:
        """Map each main-variable monomial to its parameter coefficient."""
        mask = self.table.main_mask
        out: dict[int, dict[int, mpq]] = {}
        for m, c in self._terms.items():
            out.setdefault(m & mask, {})[m & ~mask] = c
        return {k: Poly._raw(self.table, v) for k, v in out.items()}

    # text and JSON --------------------------------------------------------

    def __str__(self) -> str:
        return to_text(self)

    def __repr__(self) -> str:
        text = to_text(self)
        if len(text) > 80:
            text = text[:77] + "..."
        return f"Poly({text})"

    def to_json(self, order: MonomialOrder = LEX) -> dict:
        return {
            "order": order.kind,
            "vars": list(self.table.names),
            "terms": [{"c": str(c), "e": list(self.table.exponents(m))}
                      for c, m in self.terms(order)],
        }

    def dumps(self, order: MonomialOrder = LEX) -> str:
        return json.dumps(self.to_json(order), separators=(",", ":"))


# ---------------------------------------------------------------------------
# Parsing and printing
# ---------------------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z][A-Za-z0-9_]*)|(\*\*|[-+*/^()]))")


def _tokenize(text: str) -> list[tuple[str, str]]:
    tokens = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise PolyError(f"unexpected character {text[pos:].strip()[:1]!r} in polynomial")
        num, name, op = m.groups()
        if num is not None:
            tokens.append(("num", num))
        elif name is not None:
            tokens.append(("name", name))
        else:
            tokens.append(("op", "^" if op == "**" else op))
        pos = m.end()
    return tokens


class _Parser:
    def __init__(self, text: str, table: VariableTable):
        self.tokens = _tokenize(text)
        self.pos = 0
        self.table = table
        if not self.tokens:
            raise PolyError("empty polynomial text")

    def peek(self):
        return self.tokens[self.pos] if self.pos < len(self.tokens) else (None, None)

    def take(self):
        tok = self.peek()
        self.pos += 1
        return tok

    def expr(self) -> Poly:
        kind, val = self.peek()
        sign = 1
        if (kind, val) in (("op", "+"), ("op", "-")):
            self.take()
            sign = -1 if val == "-" else 1
        result = self.term().scale(sign)
        while True:
            kind, val = self.peek()
            if (kind, val) == ("op", "+"):
                self.take()
                result = result + self.term()
            elif (kind, val) == ("op", "-"):
                self.take()
                result = result - self.term()
            else:
                return result

    def term(self) -> Poly:
        result = self.power()
        while True:
            kind, val = self.peek()
            if (kind, val) == ("op", "*"):
                self.take()
                result = result * self.power()
            elif (kind, val) == ("op", "/"):
                self.take()
                divisor = self.power()
                if not divisor.is_constant():
                    raise PolyError("division by a non-constant polynomial")
                c = divisor.coeff_of(0)
                if not c:
                    raise PolyError("zero denominator")
                result = result.scale(1 / c)
            elif kind in ("num", "name") or (kind, val) == ("op", "("):
                # juxtaposition means multiplication, as in "X31 X12"
                result = result * self.power()
            else:
                return result

    def power(self) -> Poly:
        base = self.atom()
        if self.peek() == ("op", "^"):
            self.take()
            kind, val = self.take()
            if kind != "num":
                raise PolyError("exponent must be a non-negative integer")
            e = int(val)
            if e > MAX_EXPONENT:
                raise OverflowError(f"exponent {e} out of range")
            return base ** e
        return base

    def atom(self) -> Poly:
        kind, val = self.take()
        if kind == "num":
            return Poly.const(int(val), self.table)
        if kind == "name":
            if val not in self.table.index:
                raise PolyError(f"unknown symbol {val!r}")
            return Poly.var(val, self.table)
        if (kind, val) == ("op", "("):
            inner = self.expr()
            if self.take() != ("op", ")"):
                raise PolyError("unbalanced parentheses")
            return inner
        if (kind, val) == ("op", "-"):
            return -self.power()
        raise PolyError(f"unexpected token {val!r}")


def parse(text: str, table: VariableTable = DEFAULT_TABLE) -> Poly:
    """Parse ``+ - * / ^`` expressions with rational constants and table symbols."""
    parser = _Parser(text, table)
    result = parser.expr()
    if parser.pos != len(parser.tokens):
        raise PolyError(f"trailing input at token {parser.peek()[1]!r}")
    return result


def to_text(p: Poly, order: MonomialOrder = LEX) -> str:
    """Deterministic text form; ``parse(to_text(p)) == p``."""
    if not p._terms:
        return "0"
    out = []
    for i, (c, m) in enumerate(p.terms(order)):
        neg = c < 0
        a = -c if neg else c
        mono = p.table.mono_str(m) if m else ""
        if not mono:
            body = str(a)
        elif a == 1:
            body = mono
        else:
            body = f"{a}*{mono}"
        if i == 0:
            out.append(f"-{body}" if neg else body)
        else:
            out.append(f" - {body}" if neg else f" + {body}")
    return "".join(out)


def from_json(data: Union[str, dict], table: VariableTable | None = None) -> Poly:
    """Inverse of ``Poly.to_json``; the symbol list must match the table."""
    if isinstance(data, str):
        data = json.loads(data)
    names = tuple(data["vars"])
    if table is None:
        table = DEFAULT_TABLE if names == DEFAULT_TABLE.names else VariableTable(names)
    elif names != table.names:
        raise PolyError("JSON symbol list does not match the variable table")
    terms: dict[int, mpq] = {}
    for t in data["terms"]:
        m = table.pack(t["e"])
        if m in terms:
            raise PolyError("repeated monomial in JSON polynomial")
        terms[m] = to_rational(t["c"])
    return Poly(table, terms)


# convenience wrappers mirroring the operation names used elsewhere

def poly_parse(text: str, table: VariableTable = DEFAULT_TABLE) -> Poly:
    return parse(text, table)


def poly_print(p: Poly, order: MonomialOrder = LEX) -> str:
    return to_text(p, order)


def poly_substitute(p: Poly, assignment) -> Poly:
    return p.substitute(assignment)


def poly_evaluate(p: Poly, assignment) -> mpq:
    return p.evaluate(assignment)


def symbols(names: str, table: VariableTable = DEFAULT_TABLE) -> list[Poly]:
    """``symbols("X11 X12")`` -> list of variable polynomials."""
    return [Poly.var(n, table) for n in names.split()]
