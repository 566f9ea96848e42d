"""Exact sparse multivariate polynomials and truncated power series.

Every polynomial lives over the fixed variable ordering ``c1, c2, c3, c4, x, y``
with :class:`fractions.Fraction` coefficients.  Nothing in this module ever
touches a float unless a caller evaluates at a float point.
"""

from __future__ import annotations

import re
from fractions import Fraction
from numbers import Number, Rational
from typing import Iterable, Mapping, Union

VARIABLES = ("c1", "c2", "c3", "c4", "x", "y")
NVARS = len(VARIABLES)
_INDEX = {name: i for i, name in enumerate(VARIABLES)}

Scalar = Union[int, Fraction]


class PolyError(ValueError):
    pass


class UnboundVariable(PolyError):
    pass


class DivisorNotUnit(PolyError):
    pass


class ParseError(PolyError):
    pass


def _as_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, Rational)):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value)
    raise TypeError(f"expected a rational scalar, got {type(value).__name__}")


def _var_index(var) -> int:
    if isinstance(var, int):
        if not 0 <= var < NVARS:
            raise PolyError(f"variable index {var} out of range")
        return var
    try:
        return _INDEX[var]
    except KeyError:
        raise PolyError(f"unknown variable {var!r}; expected one of {VARIABLES}") from None


class MultiPoly:
    """Immutable polynomial with rational coefficients.

    ``terms`` maps an exponent tuple of length six to a nonzero Fraction.
    Equality is structural, which is exact because the representation is
    canonical.
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[tuple, Scalar] | None = None):
        clean = {}
        for exps, coef in (terms or {}).items():
            exps = tuple(exps)
            if len(exps) != NVARS or any(e < 0 for e in exps):
                raise PolyError(f"bad exponent vector {exps}")
            coef = _as_fraction(coef)
            if coef:
                clean[exps] = clean.get(exps, Fraction(0)) + coef
                if not clean[exps]:
                    del clean[exps]
        self._terms = clean
        self._hash = None

    # construction -----------------------------------------------------
    @classmethod
    def _raw(cls, terms: dict) -> "MultiPoly":
        obj = cls.__new__(cls)
        obj._terms = terms
        obj._hash = None
        return obj

    @classmethod
    def const(cls, value: Scalar) -> "MultiPoly":
        value = _as_fraction(value)
        return cls._raw({(0,) * NVARS: value} if value else {})

    @classmethod
    def var(cls, name, power: int = 1) -> "MultiPoly":
        exps = [0] * NVARS
        exps[_var_index(name)] = power
        return cls._raw({tuple(exps): Fraction(1)})

    @classmethod
    def monomial(cls, coef: Scalar, **powers: int) -> "MultiPoly":
        exps = [0] * NVARS
        for name, p in powers.items():
            exps[_var_index(name)] = p
        return cls({tuple(exps): coef})

    @classmethod
    def coerce(cls, value) -> "MultiPoly":
        if isinstance(value, MultiPoly):
            return value
        return cls.const(value)

    # inspection -------------------------------------------------------
    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def __len__(self):
        return len(self._terms)

    def __bool__(self):
        return bool(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return all(not any(e) for e in self._terms)

    def constant_term(self) -> Fraction:
        return self._terms.get((0,) * NVARS, Fraction(0))

    def coefficient(self, **powers: int) -> Fraction:
        exps = [0] * NVARS
        for name, p in powers.items():
            exps[_var_index(name)] = p
        return self._terms.get(tuple(exps), Fraction(0))

    def variables(self) -> tuple:
        used = set()
        for exps in self._terms:
            used.update(i for i, e in enumerate(exps) if e)
        return tuple(VARIABLES[i] for i in sorted(used))

    def degree(self, var=None) -> int:
        if not self._terms:
            return -1
        if var is None:
            return max(sum(e) for e in self._terms)
        i = _var_index(var)
        return max(e[i] for e in self._terms)

    def weights(self, weight: Mapping[str, int]) -> set:
        """Set of weighted degrees of the monomials present."""
        w = [weight.get(v, 0) for v in VARIABLES]
        return {sum(a * b for a, b in zip(exps, w)) for exps in self._terms}

    def monomial_gcd(self) -> tuple:
        if not self._terms:
            return (0,) * NVARS
        return tuple(min(col) for col in zip(*self._terms))

    # arithmetic -------------------------------------------------------
    def __add__(self, other):
        other = MultiPoly.coerce(other)
        out = dict(self._terms)
        for exps, coef in other._terms.items():
            s = out.get(exps, 0) + coef
            if s:
                out[exps] = s
            else:
                out.pop(exps, None)
        return MultiPoly._raw(out)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly._raw({e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-MultiPoly.coerce(other))

    def __rsub__(self, other):
        return MultiPoly.coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, MultiPoly):
            return self.scale(other)
        out: dict = {}
        for e1, a in self._terms.items():
            for e2, b in other._terms.items():
                e = tuple(i + j for i, j in zip(e1, e2))
                s = out.get(e, 0) + a * b
                if s:
                    out[e] = s
                else:
                    out.pop(e, None)
        return MultiPoly._raw(out)

    def __rmul__(self, other):
        return self.scale(other)

    def scale(self, factor: Scalar) -> "MultiPoly":
        factor = _as_fraction(factor)
        if not factor:
            return MultiPoly()
        return MultiPoly._raw({e: c * factor for e, c in self._terms.items()})

    def __truediv__(self, other):
        return self.scale(1 / _as_fraction(other))

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise PolyError("only non-negative integer powers are supported")
        result = MultiPoly.const(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, MultiPoly):
            return self._terms == other._terms
        if isinstance(other, (int, Fraction)):
            return self._terms == MultiPoly.const(other)._terms
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    # calculus / substitution -----------------------------------------
    def diff(self, var) -> "MultiPoly":
        i = _var_index(var)
        out = {}
        for exps, coef in self._terms.items():
            if exps[i]:
                e = list(exps)
                e[i] -= 1
                out[tuple(e)] = coef * exps[i]
        return MultiPoly._raw(out)

    def divide_monomial(self, exps: tuple) -> "MultiPoly":
        out = {}
        for e, coef in self._terms.items():
            q = tuple(a - b for a, b in zip(e, exps))
            if any(v < 0 for v in q):
                raise PolyError("monomial does not divide polynomial")
            out[q] = coef
        return MultiPoly._raw(out)

    def subs(self, mapping: Mapping) -> "MultiPoly":
        """Substitute variables by polynomials or rationals (simultaneously)."""
        repl = {_var_index(k): MultiPoly.coerce(v) for k, v in mapping.items()}
        powers: dict = {}

        def power(i, p):
            key = (i, p)
            if key not in powers:
                powers[key] = repl[i] ** p
            return powers[key]

        result = MultiPoly()
        for exps, coef in self._terms.items():
            kept = list(exps)
            term = MultiPoly.const(coef)
            for i in repl:
                if exps[i]:
                    term = term * power(i, exps[i])
                    kept[i] = 0
            result = result + term * MultiPoly._raw({tuple(kept): Fraction(1)})
        return result

    def eval(self, assignment: Mapping):
        """Evaluate at a point.  Exact when every assigned value is rational."""
        values = [None] * NVARS
        for k, v in assignment.items():
            values[_var_index(k)] = v
        total = 0
        for exps, coef in self._terms.items():
            term = coef
            for i, e in enumerate(exps):
                if e:
                    if values[i] is None:
                        raise UnboundVariable(f"variable {VARIABLES[i]} is not assigned")
                    term = term * values[i] ** e
            total = total + term
        if isinstance(total, int):
            return Fraction(total)
        if isinstance(total, Fraction) or isinstance(total, Number):
            return total
        return total

    def __call__(self, **assignment):
        return self.eval(assignment)

    # text -------------------------------------------------------------
    def sorted_terms(self) -> list:
        """Terms in degree-lexicographic order, highest first."""
        return sorted(self._terms.items(), key=lambda t: (sum(t[0]), t[0]), reverse=True)

    def __str__(self):
        return to_text(self)

    def __repr__(self):
        return f"MultiPoly({to_text(self)!r})"


def _fmt_coef(value: Fraction) -> str:
    return str(value.numerator) if value.denominator == 1 else f"{value.numerator}/{value.denominator}"


def to_text(p: MultiPoly) -> str:
    """Canonical rendering, e.g. ``4*c1^4*c2 + 8*c1^3*c3 - 23*c1^2*c2^2``."""
    if p.is_zero():
        return "0"
    pieces = []
    for exps, coef in p.sorted_terms():
        factors = [
            name if e == 1 else f"{name}^{e}" for name, e in zip(VARIABLES, exps) if e
        ]
        mag = abs(coef)
        if not factors:
            body = _fmt_coef(mag)
        elif mag == 1:
            body = "*".join(factors)
        else:
            body = "*".join([_fmt_coef(mag)] + factors)
        pieces.append(("-" if coef < 0 else "+", body))
    sign, body = pieces[0]
    out = [("-" if sign == "-" else "") + body]
    for sign, body in pieces[1:]:
        out.append(f" {sign} {body}")
    return "".join(out)


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_]\w*)|(\*\*|[-+*/^()]))")


def parse(text: str) -> MultiPoly:
    """Parse the canonical grammar (also accepts parentheses and ``**``)."""
    tokens = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character at {pos}: {text[pos:pos + 10]!r}")
        num, name, op = m.groups()
        if num is not None:
            tokens.append(("num", int(num)))
        elif name is not None:
            if name not in _INDEX:
                raise ParseError(f"unknown variable {name!r}")
            tokens.append(("var", name))
        else:
            tokens.append(("op", "^" if op == "**" else op))
        pos = m.end()
    tokens.append(("end", None))
    return _Parser(tokens).parse()


class _Parser:
    def __init__(self, tokens):
        self.tokens = tokens
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, op):
        tok = self.take()
        if tok != ("op", op):
            raise ParseError(f"expected {op!r}, got {tok[1]!r}")

    def parse(self):
        value = self.expr()
        if self.peek()[0] != "end":
            raise ParseError(f"trailing input at token {self.peek()[1]!r}")
        return value

    def expr(self):
        value = self.term()
        while self.peek() in (("op", "+"), ("op", "-")):
            op = self.take()[1]
            rhs = self.term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def term(self):
        value = self.unary()
        while self.peek() in (("op", "*"), ("op", "/")):
            op = self.take()[1]
            rhs = self.unary()
            if op == "*":
                value = value * rhs
            else:
                if not rhs.is_constant() or rhs.is_zero():
                    raise ParseError("division only by nonzero rational constants")
                value = value / rhs.constant_term()
        return value

    def unary(self):
        if self.peek() == ("op", "-"):
            self.take()
            return -self.unary()
        if self.peek() == ("op", "+"):
            self.take()
            return self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek() == ("op", "^"):
            self.take()
            kind, val = self.take()
            if kind != "num":
                raise ParseError("exponent must be a non-negative integer")
            base = base ** val
        return base

    def atom(self):
        kind, val = self.take()
        if kind == "num":
            return MultiPoly.const(val)
        if kind == "var":
            return MultiPoly.var(val)
        if (kind, val) == ("op", "("):
            value = self.expr()
            self.expect(")")
            return value
        raise ParseError(f"unexpected token {val!r}")


def poly_arith(op: str, p: MultiPoly, q) -> MultiPoly:
    """Dispatch form used by the CLI and tests: add, sub, mul, scale."""
    if op == "add":
        return p + q
    if op == "sub":
        return p - q
    if op == "mul":
        return p * MultiPoly.coerce(q)
    if op == "scale":
        return p.scale(q)
    raise PolyError(f"unknown operation {op!r}")


# convenient handles
c1, c2, c3, c4, x, y = (MultiPoly.var(v) for v in VARIABLES)
ONE = MultiPoly.const(1)
ZERO = MultiPoly()


class TruncSeries:
    """Power series in z truncated after z^order, with MultiPoly coefficients."""

    __slots__ = ("order", "coeffs")

    def __init__(self, coeffs: Iterable, order: int | None = None):
        coeffs = [MultiPoly.coerce(c) for c in coeffs]
        if order is None:
            order = len(coeffs) - 1
        if order < 0:
            raise PolyError("order must be non-negative")
        coeffs = coeffs[: order + 1]
        coeffs += [ZERO] * (order + 1 - len(coeffs))
        self.order = order
        self.coeffs = tuple(coeffs)

    @classmethod
    def z(cls, order: int) -> "TruncSeries":
        return cls([ZERO, ONE], order)

    def __getitem__(self, k: int) -> MultiPoly:
        return self.coeffs[k] if 0 <= k <= self.order else ZERO

    def _coerce(self, other) -> "TruncSeries":
        if isinstance(other, TruncSeries):
            return other
        return TruncSeries([MultiPoly.coerce(other)], self.order)

    def __add__(self, other):
        other = self._coerce(other)
        n = min(self.order, other.order)
        return TruncSeries([self[k] + other[k] for k in range(n + 1)], n)

    __radd__ = __add__

    def __neg__(self):
        return TruncSeries([-c for c in self.coeffs], self.order)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        n = min(self.order, other.order)
        out = []
        for k in range(n + 1):
            acc = ZERO
            for j in range(k + 1):
                if self[j] and other[k - j]:
                    acc = acc + self[j] * other[k - j]
            out.append(acc)
        return TruncSeries(out, n)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        lead = other[0]
        if not lead.is_constant() or lead.is_zero():
            raise DivisorNotUnit("divisor constant term must be a nonzero rational")
        inv = 1 / lead.constant_term()
        n = min(self.order, other.order)
        out = []
        for k in range(n + 1):
            acc = self[k]
            for j in range(1, k + 1):
                if other[j]:
                    acc = acc - other[j] * out[k - j]
            out.append(acc.scale(inv))
        return TruncSeries(out, n)

    def differentiate(self) -> "TruncSeries":
        if self.order == 0:
            return TruncSeries([ZERO], 0)
        return TruncSeries([self[k].scale(k) for k in range(1, self.order + 1)], self.order - 1)

    def shift(self) -> "TruncSeries":
        """Multiply by z; the result is known one order further."""
        return TruncSeries([ZERO, *self.coeffs], self.order + 1)

    def truncate(self, order: int) -> "TruncSeries":
        return TruncSeries(self.coeffs, min(order, self.order))

    def __eq__(self, other):
        if not isinstance(other, TruncSeries):
            return NotImplemented
        return self.order == other.order and self.coeffs == other.coeffs

    def __repr__(self):
        parts = [f"({c})*z^{k}" for k, c in enumerate(self.coeffs) if c]
        return f"TruncSeries(order={self.order}: {' + '.join(parts) or '0'})"


def series_arith(op: str, s: TruncSeries, t: TruncSeries | None = None) -> TruncSeries:
    if op == "add":
        return s + t
    if op == "mul":
        return s * t
    if op == "div":
        return s / t
    if op == "differentiate":
        return s.differentiate()
    if op in ("shift", "shift-mul-by-z"):
        return s.shift()
    raise PolyError(f"unknown series operation {op!r}")
