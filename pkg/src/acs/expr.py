"""Exponential-polynomial coefficient expressions.

A :class:`CoeffExpr` is a finite sum of terms ``c * prod(v**p) * exp(sum(l_v * v))``
in complex chart coordinates and their conjugates.  Conjugate coordinates are
independent symbols (Wirtinger convention), so ``diff(e, w)`` leaves ``w_``
untouched.  The class is closed under ``+ - *``, differentiation and
conjugation, and equality is decided on the canonical (merged) form.

Coefficients are exact Gaussian rationals whenever the input allows it
(integer and fraction literals, ``i``); decimal literals, ``pi`` and
exponentials of non-zero constants switch a coefficient to complex floats.
"""

from __future__ import annotations

import cmath
import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Union

__all__ = [
    "GaussRat",
    "VarTable",
    "CoeffExpr",
    "ExprError",
    "ExprSyntaxError",
    "UnknownIdentifier",
    "NonAffineExp",
    "EvalError",
    "parse",
    "parse_constant",
    "diff",
    "evaluate",
]


class ExprError(ValueError):
    pass


class ExprSyntaxError(ExprError):
    def __init__(self, msg: str, pos: int):
        super().__init__(f"{msg} at position {pos}")
        self.pos = pos


class UnknownIdentifier(ExprError):
    pass


class NonAffineExp(ExprError):
    pass


class EvalError(ExprError):
    pass


class GaussRat:
    """Exact complex number ``re + im*i`` with rational parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = Fraction(re)
        self.im = Fraction(im)

    @staticmethod
    def coerce(x) -> "GaussRat | complex":
        if isinstance(x, GaussRat):
            return x
        if isinstance(x, (int, Fraction)):
            return GaussRat(x)
        return complex(x)

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def conjugate(self):
        return GaussRat(self.re, -self.im)

    def __neg__(self):
        return GaussRat(-self.re, -self.im)

    def __add__(self, other):
        o = GaussRat.coerce(other)
        if isinstance(o, GaussRat):
            return GaussRat(self.re + o.re, self.im + o.im)
        return complex(self) + o

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-GaussRat.coerce(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = GaussRat.coerce(other)
        if isinstance(o, GaussRat):
            return GaussRat(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)
        return complex(self) * o

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = GaussRat.coerce(other)
        if isinstance(o, GaussRat):
            d = o.re * o.re + o.im * o.im
            if d == 0:
                raise ZeroDivisionError("division by exact zero")
            return self * GaussRat(o.re / d, -o.im / d)
        return complex(self) / o

    def __rtruediv__(self, other):
        return GaussRat.coerce(other) / self if isinstance(GaussRat.coerce(other), GaussRat) else complex(other) / complex(self)

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            return complex(self) ** k
        out = GaussRat(1)
        for _ in range(k):
            out = out * self
        return out

    def __abs__(self):
        return abs(complex(self))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __eq__(self, other):
        if isinstance(other, GaussRat):
            return self.re == other.re and self.im == other.im
        if isinstance(other, (int, Fraction)):
            return self.im == 0 and self.re == other
        if isinstance(other, (float, complex)):
            return complex(self) == complex(other)
        return NotImplemented

    def __hash__(self):
        if self.im == 0:
            return hash(self.re)
        return hash(complex(self))

    def is_real(self) -> bool:
        return self.im == 0

    def __repr__(self):
        return f"GaussRat({self.re}, {self.im})"

    def __str__(self):
        return _fmt_coeff(self)


Number = Union[GaussRat, complex]


def _num(x) -> Number:
    """Normalize a scalar into the coefficient domain."""
    if isinstance(x, GaussRat):
        return x
    if isinstance(x, bool):
        return GaussRat(int(x))
    if isinstance(x, (int, Fraction)):
        return GaussRat(x)
    return complex(x)


def _fmt_frac(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def _fmt_coeff(c: Number) -> str:
    if isinstance(c, GaussRat):
        if c.im == 0:
            return f"({_fmt_frac(c.re)})"
        if c.re == 0:
            return f"({_fmt_frac(c.im)}*i)"
        return f"({_fmt_frac(c.re)} + {_fmt_frac(c.im)}*i)"
    c = complex(c)
    return f"({c.real!r} + {c.imag!r}*i)"


@dataclass(frozen=True)
class VarTable:
    """Ordered complex coordinate names; ids ``0..n-1`` are the coordinates,
    ids ``n..2n-1`` their conjugates (written with a trailing underscore)."""

    names: tuple[str, ...]

    def __post_init__(self):
        names = tuple(self.names)
        object.__setattr__(self, "names", names)
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate coordinate names in {names}")
        for nm in names:
            if not re.fullmatch(r"[A-Za-z][A-Za-z0-9]*", nm) or nm in _RESERVED:
                raise ValueError(f"invalid coordinate name {nm!r}")

    @property
    def n(self) -> int:
        return len(self.names)

    def conj(self, vid: int) -> int:
        n = self.n
        return vid + n if vid < n else vid - n

    def name(self, vid: int) -> str:
        n = self.n
        return self.names[vid] if vid < n else self.names[vid - n] + "_"

    def lookup(self, token: str) -> int:
        base, bar = (token[:-1], True) if token.endswith("_") else (token, False)
        try:
            k = self.names.index(base)
        except ValueError:
            raise UnknownIdentifier(f"unknown identifier {token!r}") from None
        return k + self.n if bar else k

    def var_id(self, v: "int | str") -> int:
        if isinstance(v, str):
            return self.lookup(v)
        if not 0 <= v < 2 * self.n:
            raise UnknownIdentifier(f"variable id {v} out of range")
        return v


_RESERVED = {"i", "pi", "exp"}

# term key: (sorted ((var, power), ...), sorted ((var, lambda), ...))
Key = tuple


def _key_sort(key: Key):
    mono, ex = key
    return (mono, tuple((v, complex(l).real, complex(l).imag) for v, l in ex))


class CoeffExpr:
    """Immutable canonical exponential polynomial over a :class:`VarTable`."""

    __slots__ = ("vars", "_terms", "_hash")

    def __init__(self, vars: VarTable, terms: Mapping[Key, Number] | None = None):
        self.vars = vars
        clean = {}
        for k, c in (terms or {}).items():
            c = _num(c)
            if c != 0:
                clean[k] = c
        self._terms = clean
        self._hash = None

    # construction ----------------------------------------------------
    @classmethod
    def const(cls, vars: VarTable, c) -> "CoeffExpr":
        return cls(vars, {((), ()): c})

    @classmethod
    def var(cls, vars: VarTable, v: "int | str") -> "CoeffExpr":
        vid = vars.var_id(v)
        return cls(vars, {(((vid, 1),), ()): GaussRat(1)})

    @classmethod
    def zero(cls, vars: VarTable) -> "CoeffExpr":
        return cls(vars, {})

    @classmethod
    def exp_affine(cls, vars: VarTable, c0, lam: Mapping[int, Number]) -> "CoeffExpr":
        c0 = _num(c0)
        coef = GaussRat(1) if c0 == 0 else cmath.exp(complex(c0))
        ex = tuple(sorted((v, _num(l)) for v, l in lam.items() if _num(l) != 0))
        return cls(vars, {((), ex): coef})

    # inspection ------------------------------------------------------
    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return all(k == ((), ()) for k in self._terms)

    def constant_value(self) -> Number:
        if not self.is_constant():
            raise ExprError("expression is not constant")
        return self._terms.get(((), ()), GaussRat(0))

    def is_exact(self) -> bool:
        return all(isinstance(c, GaussRat) for c in self._terms.values()) and all(
            isinstance(l, GaussRat) for (_, ex) in self._terms for _, l in ex
        )

    def free_vars(self) -> set[int]:
        out = set()
        for mono, ex in self._terms:
            out.update(v for v, _ in mono)
            out.update(v for v, _ in ex)
        return out

    def affine_parts(self):
        """Return ``(c0, {v: coeff})`` if the expression is affine, else None."""
        c0 = GaussRat(0)
        lin = {}
        for (mono, ex), c in self._terms.items():
            if ex:
                return None
            if not mono:
                c0 = c0 + c
            elif len(mono) == 1 and mono[0][1] == 1:
                lin[mono[0][0]] = c
            else:
                return None
        return c0, lin

    # arithmetic ------------------------------------------------------
    def _coerce(self, other) -> "CoeffExpr":
        if isinstance(other, CoeffExpr):
            if other.vars != self.vars:
                raise ExprError("expressions over different variable tables")
            return other
        return CoeffExpr.const(self.vars, other)

    def __add__(self, other):
        o = self._coerce(other)
        out = dict(self._terms)
        for k, c in o._terms.items():
            out[k] = out[k] + c if k in out else c
        return CoeffExpr(self.vars, out)

    __radd__ = __add__

    def __neg__(self):
        return CoeffExpr(self.vars, {k: -c for k, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        o = self._coerce(other)
        out: dict = {}
        for (m1, e1), c1 in self._terms.items():
            for (m2, e2), c2 in o._terms.items():
                k = (_merge(m1, m2, int.__add__), _merge(e1, e2, lambda a, b: a + b))
                c = c1 * c2
                out[k] = out[k] + c if k in out else c
        return CoeffExpr(self.vars, out)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if not o.is_constant() or o.is_zero():
            raise ExprError("division only by a non-zero constant")
        d = o.constant_value()
        return CoeffExpr(self.vars, {k: c / d for k, c in self._terms.items()})

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ExprError("only non-negative integer powers")
        out = CoeffExpr.const(self.vars, 1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    # calculus --------------------------------------------------------
    def diff(self, v: "int | str") -> "CoeffExpr":
        vid = self.vars.var_id(v)
        out: dict = {}

        def put(k, c):
            out[k] = out[k] + c if k in out else c

        for (mono, ex), c in self._terms.items():
            md = dict(mono)
            p = md.get(vid, 0)
            if p:
                md2 = dict(md)
                if p == 1:
                    del md2[vid]
                else:
                    md2[vid] = p - 1
                put((tuple(sorted(md2.items())), ex), c * p)
            lam = dict(ex).get(vid)
            if lam is not None:
                put((mono, ex), c * lam)
        return CoeffExpr(self.vars, out)

    def conj(self) -> "CoeffExpr":
        cj = self.vars.conj
        out = {}
        for (mono, ex), c in self._terms.items():
            m2 = tuple(sorted((cj(v), p) for v, p in mono))
            e2 = tuple(sorted((cj(v), _conj(l)) for v, l in ex))
            out[(m2, e2)] = _conj(c)
        return CoeffExpr(self.vars, out)

    def evaluate(self, point: Mapping) -> complex:
        vals = _point_values(self.vars, point, self.free_vars())
        total = 0j
        for (mono, ex), c in self._terms.items():
            t = complex(c)
            for v, p in mono:
                t *= vals[v] ** p
            if ex:
                t *= cmath.exp(sum(complex(l) * vals[v] for v, l in ex))
            total += t
        return total

    def evaluate_exact(self, point: Mapping) -> "GaussRat | None":
        """Exact value at a Gaussian-rational point, or None if not representable."""
        if not self.is_exact():
            return None
        vals: dict[int, GaussRat] = {}
        for key, val in point.items():
            vid = self.vars.var_id(key)
            if isinstance(val, (int, Fraction)):
                val = GaussRat(val)
            if not isinstance(val, GaussRat):
                return None
            vals[vid] = val
            vals.setdefault(self.vars.conj(vid), val.conjugate())
        total = GaussRat(0)
        for (mono, ex), c in self._terms.items():
            t = c
            for v, p in mono:
                if v not in vals:
                    raise EvalError(f"missing assignment for {self.vars.name(v)}")
                t = t * vals[v] ** p
            if ex:
                arg = GaussRat(0)
                for v, l in ex:
                    arg = arg + l * vals[v]
                if arg != 0:
                    return None
            total = total + t
        return total

    # comparison and printing ----------------------------------------
    def __eq__(self, other):
        if isinstance(other, CoeffExpr):
            return self.vars == other.vars and self._terms == other._terms
        if isinstance(other, (int, float, complex, Fraction, GaussRat)):
            return self == CoeffExpr.const(self.vars, other)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.vars, frozenset(self._terms.items())))
        return self._hash

    def __str__(self):
        if not self._terms:
            return "0"
        parts = []
        for key in sorted(self._terms, key=_key_sort):
            mono, ex = key
            factors = [_fmt_coeff(self._terms[key])]
            for v, p in mono:
                nm = self.vars.name(v)
                factors.append(nm if p == 1 else f"{nm}^{p}")
            if ex:
                arg = " + ".join(f"{_fmt_coeff(l)}*{self.vars.name(v)}" for v, l in ex)
                factors.append(f"exp({arg})")
            parts.append("*".join(factors))
        return " + ".join(parts)

    def __repr__(self):
        return f"CoeffExpr({self})"


def _conj(c: Number) -> Number:
    return c.conjugate()


def _merge(a: tuple, b: tuple, op) -> tuple:
    if not a:
        return b
    if not b:
        return a
    d = dict(a)
    for k, v in b:
        d[k] = op(d[k], v) if k in d else v
    return tuple(sorted((k, v) for k, v in d.items() if v != 0))


def _point_values(vars: VarTable, point: Mapping, needed: Iterable[int]) -> dict[int, complex]:
    vals: dict[int, complex] = {}
    for key, val in point.items():
        vid = vars.var_id(key)
        val = complex(val)
        other = vars.conj(vid)
        if other in vals:
            expect = vals[other].conjugate()
            if abs(expect - val) > 1e-12 * max(1.0, abs(val)):
                raise EvalError(f"conjugate-inconsistent assignment for {vars.name(vid)}")
        vals[vid] = val
        vals.setdefault(other, val.conjugate())
    missing = [vars.name(v) for v in needed if v not in vals]
    if missing:
        raise EvalError(f"missing assignment for {', '.join(sorted(missing))}")
    return vals


# ---------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------

_TOKEN = re.compile(
    r"\s*(?:(?P<num>(?:\d+\.\d*|\.\d+|\d+)(?:[eE][+-]?\d+)?)|(?P<id>[A-Za-z][A-Za-z0-9]*_?)|(?P<op>[-+*/^()]))"
)


def _tokenize(text: str):
    pos = 0
    out = []
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ExprSyntaxError(f"unexpected character {text[pos:pos + 1]!r}", pos)
        kind = m.lastgroup
        start = m.start(kind)
        out.append((kind, m.group(kind), start))
        pos = m.end()
    out.append(("end", "", len(text)))
    return out


class _Parser:
    def __init__(self, text: str, vars: VarTable):
        self.toks = _tokenize(text)
        self.i = 0
        self.vars = vars

    def peek(self):
        return self.toks[self.i]

    def take(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect(self, val: str):
        kind, v, pos = self.take()
        if v != val or kind == "end":
            raise ExprSyntaxError(f"expected {val!r}, found {v or 'end of input'!r}", pos)

    def parse(self) -> CoeffExpr:
        e = self.expr()
        kind, v, pos = self.peek()
        if kind != "end":
            raise ExprSyntaxError(f"unexpected token {v!r}", pos)
        return e

    def expr(self) -> CoeffExpr:
        e = self.term()
        while self.peek()[1] in ("+", "-") and self.peek()[0] == "op":
            op = self.take()[1]
            t = self.term()
            e = e + t if op == "+" else e - t
        return e

    def term(self) -> CoeffExpr:
        e = self.factor()
        while self.peek()[0] == "op" and self.peek()[1] in ("*", "/"):
            op, pos = self.take()[1:]
            f = self.factor()
            if op == "*":
                e = e * f
            else:
                if not f.is_constant() or f.is_zero():
                    raise ExprSyntaxError("divisor must be a non-zero constant", pos)
                e = e / f
        return e

    def factor(self) -> CoeffExpr:
        kind, v, pos = self.peek()
        if kind == "op" and v == "-":
            # unary minus binds looser than '^': -w^2 == -(w^2)
            self.take()
            return -self.factor()
        b = self.base()
        if self.peek()[0] == "op" and self.peek()[1] == "^":
            self.take()
            kind, v, pos = self.take()
            if kind != "num" or not v.isdigit():
                raise ExprSyntaxError("exponent must be an unsigned integer", pos)
            b = b ** int(v)
        return b

    def base(self) -> CoeffExpr:
        kind, v, pos = self.take()
        vt = self.vars
        if kind == "num":
            if re.fullmatch(r"\d+", v):
                return CoeffExpr.const(vt, GaussRat(int(v)))
            return CoeffExpr.const(vt, complex(float(v)))
        if kind == "id":
            if v == "i":
                return CoeffExpr.const(vt, GaussRat(0, 1))
            if v == "pi":
                return CoeffExpr.const(vt, complex(math.pi))
            if v == "exp":
                self.expect("(")
                arg = self.expr()
                self.expect(")")
                aff = arg.affine_parts()
                if aff is None:
                    raise NonAffineExp(f"argument of exp at position {pos} is not affine: {arg}")
                c0, lin = aff
                return CoeffExpr.exp_affine(vt, c0, lin)
            return CoeffExpr.var(vt, vt.lookup(v))
        if kind == "op" and v == "(":
            e = self.expr()
            self.expect(")")
            return e
        if kind == "op" and v == "-":
            return -self.base()
        raise ExprSyntaxError(f"unexpected {v or 'end of input'!r}", pos)


def parse(text: str, vars: VarTable) -> CoeffExpr:
    """Parse ``text`` into a canonical :class:`CoeffExpr` over ``vars``."""
    return _Parser(text, vars).parse()


_EMPTY = VarTable(())


def parse_constant(text: str) -> Number:
    """Parse a constant expression (no identifiers except ``i``/``pi``)."""
    return parse(text, _EMPTY).constant_value()


def diff(e: CoeffExpr, v) -> CoeffExpr:
    return e.diff(v)


def evaluate(e: CoeffExpr, point: Mapping) -> complex:
    return e.evaluate(point)
