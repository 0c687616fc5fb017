"""Sparse multivariate Laurent polynomials with integer coefficients and
unreduced rational functions built from them.

Exponent vectors are tuples over a fixed ordered tuple of variable names.
Terms are stored as ``{exponents: coefficient}`` with no zero coefficients,
so two polynomials over the same variables are equal iff their dicts are.
"""

from __future__ import annotations

import heapq
from fractions import Fraction
from numbers import Rational
from operator import add, sub
from typing import Iterable, Mapping, Sequence, Union

import numpy as np

__all__ = [
    "LaurentPoly",
    "RationalFunction",
    "NotDivisible",
    "VariableMismatch",
    "UnboundVariable",
    "lp_arith",
    "lp_exact_div",
    "lp_substitute",
    "symbols",
]

Exps = tuple


class NotDivisible(ArithmeticError):
    """No Laurent polynomial quotient exists."""


class VariableMismatch(ValueError):
    pass


class UnboundVariable(KeyError):
    pass


def _vadd(a: Exps, b: Exps) -> Exps:
    return tuple(map(add, a, b))


def _vsub(a: Exps, b: Exps) -> Exps:
    return tuple(map(sub, a, b))


# products with at least this many term pairs go through _mul_packed
_PACKED_MIN_PAIRS = 256
_I64 = 1 << 62


def _mul_packed(a: dict, b: dict, nvars: int) -> dict | None:
    """Term-dict product with exponents packed into int64 keys.

    Returns None when the packed keys or the int64 coefficient sums could
    overflow; the caller then falls back to the pure-Python loop.
    """
    ca = list(a.values())
    cb = list(b.values())
    bound = max(map(abs, ca)) * max(map(abs, cb)) * min(len(ca), len(cb))
    if bound >= _I64:
        return None
    ea = np.array(list(a), dtype=np.int64).reshape(len(a), nvars)
    eb = np.array(list(b), dtype=np.int64).reshape(len(b), nvars)
    lo_a, lo_b = ea.min(axis=0), eb.min(axis=0)
    span = (ea.max(axis=0) - lo_a) + (eb.max(axis=0) - lo_b) + 1
    radix = np.ones(nvars, dtype=object)
    for i in range(nvars - 2, -1, -1):
        radix[i] = radix[i + 1] * int(span[i + 1])
    if nvars and radix[0] * int(span[0]) >= _I64:
        return None
    radix = radix.astype(np.int64)
    ka = (ea - lo_a) @ radix
    kb = (eb - lo_b) @ radix
    keys = (ka[:, None] + kb[None, :]).ravel()
    coeffs = np.outer(np.array(ca, dtype=np.int64), np.array(cb, dtype=np.int64)).ravel()
    uniq, inv = np.unique(keys, return_inverse=True)
    sums = np.zeros(len(uniq), dtype=np.int64)
    np.add.at(sums, inv, coeffs)
    nz = sums != 0
    uniq, sums = uniq[nz], sums[nz]
    digits = np.empty((len(uniq), nvars), dtype=np.int64)
    rest = uniq
    for i in range(nvars - 1, -1, -1):
        rest, digits[:, i] = np.divmod(rest, span[i])
    digits += lo_a + lo_b
    return dict(zip(map(tuple, digits.tolist()), sums.tolist()))


class LaurentPoly:
    __slots__ = ("vars", "terms", "_hash")

    def __init__(self, vars: Sequence[str], terms: Mapping[Exps, int] | None = None):
        self.vars = tuple(vars)
        n = len(self.vars)
        clean = {}
        for e, c in (terms or {}).items():
            e = tuple(int(x) for x in e)
            if len(e) != n:
                raise ValueError(f"exponent vector {e} has length {len(e)}, expected {n}")
            if isinstance(c, Fraction):
                if c.denominator != 1:
                    raise ValueError("coefficients must be integers")
                c = c.numerator
            c = int(c)
            if c:
                clean[e] = clean.get(e, 0) + c
                if not clean[e]:
                    del clean[e]
        self.terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, vars: tuple, terms: dict) -> "LaurentPoly":
        obj = cls.__new__(cls)
        obj.vars = vars
        obj.terms = terms
        obj._hash = None
        return obj

    # -- constructors --------------------------------------------------------

    @classmethod
    def zero(cls, vars: Sequence[str]) -> "LaurentPoly":
        return cls._raw(tuple(vars), {})

    @classmethod
    def const(cls, c: int, vars: Sequence[str]) -> "LaurentPoly":
        vars = tuple(vars)
        return cls._raw(vars, {(0,) * len(vars): int(c)} if c else {})

    @classmethod
    def one(cls, vars: Sequence[str]) -> "LaurentPoly":
        return cls.const(1, vars)

    @classmethod
    def monomial(cls, exps: Sequence[int], vars: Sequence[str], coeff: int = 1) -> "LaurentPoly":
        return cls(vars, {tuple(exps): coeff})

    @classmethod
    def var(cls, name: str, vars: Sequence[str]) -> "LaurentPoly":
        vars = tuple(vars)
        e = [0] * len(vars)
        e[vars.index(name)] = 1
        return cls._raw(vars, {tuple(e): 1})

    # -- basic queries -------------------------------------------------------

    @property
    def nvars(self) -> int:
        return len(self.vars)

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and not any(next(iter(self.terms))))

    def is_polynomial(self) -> bool:
        """True when no exponent is negative."""
        return all(x >= 0 for e in self.terms for x in e)

    def constant_value(self) -> int:
        if not self.is_constant():
            raise ValueError("not a constant")
        return next(iter(self.terms.values()), 0)

    def leading_term(self) -> tuple[Exps, int]:
        """Lex-largest term; variable order gives significance."""
        e = max(self.terms)
        return e, self.terms[e]

    def total_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=0)

    def min_exponents(self) -> Exps:
        return tuple(min(col) for col in zip(*self.terms)) if self.terms else (0,) * self.nvars

    def max_exponents(self) -> Exps:
        return tuple(max(col) for col in zip(*self.terms)) if self.terms else (0,) * self.nvars

    def degree_in(self, name: str) -> int:
        i = self.vars.index(name)
        return max((e[i] for e in self.terms), default=0)

    def support_vars(self) -> set[str]:
        used = set()
        for e in self.terms:
            used.update(v for v, x in zip(self.vars, e) if x)
        return used

    # -- arithmetic ----------------------------------------------------------

    def _coerce(self, other) -> "LaurentPoly":
        if isinstance(other, LaurentPoly):
            if other.vars != self.vars:
                raise VariableMismatch(f"{self.vars} vs {other.vars}")
            return other
        if isinstance(other, int) or (isinstance(other, Fraction) and other.denominator == 1):
            return LaurentPoly.const(int(other), self.vars)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self.terms)
        for e, c in other.terms.items():
            s = out.get(e, 0) + c
            if s:
                out[e] = s
            else:
                out.pop(e, None)
        return LaurentPoly._raw(self.vars, out)

    __radd__ = __add__

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly._raw(self.vars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other - self

    def __mul__(self, other):
        if isinstance(other, RationalFunction):
            return NotImplemented
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b = self.terms, other.terms
        if len(a) < len(b):
            a, b = b, a
        if len(a) * len(b) >= _PACKED_MIN_PAIRS and self.nvars:
            out = _mul_packed(a, b, self.nvars)
            if out is not None:
                return LaurentPoly._raw(self.vars, out)
        out: dict = {}
        get = out.get
        for eb, cb in b.items():
            for ea, ca in a.items():
                e = _vadd(ea, eb)
                out[e] = get(e, 0) + ca * cb
        return LaurentPoly._raw(self.vars, {e: c for e, c in out.items() if c})

    __rmul__ = __mul__

    def scale(self, c: int) -> "LaurentPoly":
        if not c:
            return LaurentPoly.zero(self.vars)
        return LaurentPoly._raw(self.vars, {e: c * v for e, v in self.terms.items()})

    def shift(self, exps: Exps) -> "LaurentPoly":
        """Multiply by the monomial with exponent vector ``exps``."""
        return LaurentPoly._raw(self.vars, {_vadd(e, exps): c for e, c in self.terms.items()})

    def __pow__(self, k: int) -> "LaurentPoly":
        if k < 0:
            if not self.is_monomial():
                raise NotDivisible("negative power of a non-monomial")
            (e, c), = self.terms.items()
            if c not in (1, -1):
                raise NotDivisible("negative power of a non-unit coefficient")
            return LaurentPoly._raw(self.vars, {tuple(k * x for x in e): c ** (-k)})
        result = LaurentPoly.one(self.vars)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __eq__(self, other) -> bool:
        if isinstance(other, LaurentPoly):
            return self.vars == other.vars and self.terms == other.terms
        if isinstance(other, int):
            return self.terms == ({(0,) * self.nvars: other} if other else {})
        if isinstance(other, RationalFunction):
            return other == self
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.vars, frozenset(self.terms.items())))
        return self._hash

    # -- division --------------------------------------------------------------

    def exact_div(self, other: "LaurentPoly") -> "LaurentPoly":
        """Return q with q * other == self, or raise NotDivisible.

        Lex-leading-term division. A true quotient has Newton polytope
        Newton(self) - Newton(other), so candidate quotient exponents outside
        the box [min(self) - min(other), max(self) - max(other)] mean failure;
        this also guarantees termination.
        """
        other = self._coerce(other)
        if not other.terms:
            raise ZeroDivisionError("division by the zero polynomial")
        if not self.terms:
            return LaurentPoly.zero(self.vars)
        if len(other.terms) == 1:
            (eb, cb), = other.terms.items()
            out = {}
            for e, c in self.terms.items():
                q, r = divmod(c, cb)
                if r:
                    raise NotDivisible("coefficient not divisible")
                out[_vsub(e, eb)] = q
            return LaurentPoly._raw(self.vars, out)
        lo = _vsub(self.min_exponents(), other.min_exponents())
        hi = _vsub(self.max_exponents(), other.max_exponents())
        if any(a > b for a, b in zip(lo, hi)):
            raise NotDivisible("Newton polytope mismatch")
        lead_e, lead_c = other.leading_term()
        rem = dict(self.terms)
        quot = {}
        bt = [(eb, cb) for eb, cb in other.terms.items() if eb != lead_e]
        # max-heap of remainder exponents (negated); stale entries are skipped
        heap = [tuple(-x for x in e) for e in rem]
        heapq.heapify(heap)
        while rem:
            e = tuple(-x for x in heapq.heappop(heap))
            if e not in rem:
                continue
            qe = _vsub(e, lead_e)
            if any(x < a or x > b for x, a, b in zip(qe, lo, hi)):
                raise NotDivisible("quotient term leaves the admissible box")
            qc, r = divmod(rem[e], lead_c)
            if r:
                raise NotDivisible("coefficient not divisible")
            quot[qe] = qc
            del rem[e]
            for eb, cb in bt:
                t = _vadd(qe, eb)
                v = rem.get(t, 0) - qc * cb
                if v:
                    if t not in rem:
                        heapq.heappush(heap, tuple(-x for x in t))
                    rem[t] = v
                else:
                    rem.pop(t, None)
        return LaurentPoly._raw(self.vars, quot)

    def divides(self, other: "LaurentPoly") -> bool:
        try:
            other.exact_div(self)
        except NotDivisible:
            return False
        return True

    # -- calculus, evaluation, substitution ------------------------------------

    def diff(self, name: str) -> "LaurentPoly":
        i = self.vars.index(name)
        out = {}
        for e, c in self.terms.items():
            if e[i]:
                ne = list(e)
                ne[i] -= 1
                out[tuple(ne)] = c * e[i]
        return LaurentPoly._raw(self.vars, out)

    def evaluate(self, point: Mapping[str, Rational] | Sequence[Rational]) -> Fraction:
        if isinstance(point, Mapping):
            vals = [Fraction(point[v]) for v in self.vars]
        else:
            vals = [Fraction(x) for x in point]
        total = Fraction(0)
        for e, c in self.terms.items():
            t = Fraction(c)
            for v, x in zip(vals, e):
                if x:
                    t *= v ** x
            total += t
        return total

    def substitute(self, bindings: Mapping[str, "RationalFunction | LaurentPoly"],
                   target_vars: Sequence[str] | None = None) -> "RationalFunction":
        return lp_substitute(self, bindings, target_vars)

    def reembed(self, new_vars: Sequence[str]) -> "LaurentPoly":
        """Same polynomial viewed over a different (compatible) variable tuple."""
        new_vars = tuple(new_vars)
        if new_vars == self.vars:
            return self
        pos = {v: i for i, v in enumerate(new_vars)}
        used = self.support_vars()
        missing = used - pos.keys()
        if missing:
            raise VariableMismatch(f"variables {sorted(missing)} absent from target")
        idx = [(i, pos[v]) for i, v in enumerate(self.vars) if v in pos]
        out = {}
        for e, c in self.terms.items():
            ne = [0] * len(new_vars)
            for i, j in idx:
                ne[j] = e[i]
            out[tuple(ne)] = c
        return LaurentPoly._raw(new_vars, out)

    # -- display ---------------------------------------------------------------

    def sorted_terms(self) -> list[tuple[Exps, int]]:
        return sorted(self.terms.items(), reverse=True)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.sorted_terms():
            mono = "*".join(
                v if x == 1 else f"{v}^{x}" for v, x in zip(self.vars, e) if x
            )
            if not mono:
                s = str(abs(c))
            elif abs(c) == 1:
                s = mono
            else:
                s = f"{abs(c)}*{mono}"
            parts.append(("- " if c < 0 else "+ ") + s)
        out = " ".join(parts)
        return out[2:] if out.startswith("+ ") else "-" + out[2:]

    def __repr__(self) -> str:
        return f"LaurentPoly({self})"


def symbols(names: Iterable[str] | str) -> tuple[LaurentPoly, ...]:
    """Generators of the Laurent ring over ``names`` (space-separated or list)."""
    if isinstance(names, str):
        names = names.split()
    names = tuple(names)
    return tuple(LaurentPoly.var(v, names) for v in names)


Scalar = Union[int, LaurentPoly]


class RationalFunction:
    """Quotient of Laurent polynomials, kept unreduced.

    Equality is decided by cross-multiplication; no gcd is ever taken.
    """

    __slots__ = ("num", "den")

    def __init__(self, num: LaurentPoly, den: LaurentPoly | None = None):
        if den is None:
            den = LaurentPoly.one(num.vars)
        if num.vars != den.vars:
            raise VariableMismatch(f"{num.vars} vs {den.vars}")
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        self.num = num
        self.den = den

    @property
    def vars(self) -> tuple:
        return self.num.vars

    @classmethod
    def lift(cls, x, vars: Sequence[str] | None = None) -> "RationalFunction":
        if isinstance(x, RationalFunction):
            return x
        if isinstance(x, LaurentPoly):
            return cls(x)
        if isinstance(x, int):
            if vars is None:
                raise TypeError("variables needed to lift a constant")
            return cls(LaurentPoly.const(x, vars))
        raise TypeError(f"cannot lift {type(x).__name__}")

    def _coerce(self, other) -> "RationalFunction":
        if isinstance(other, RationalFunction):
            if other.vars != self.vars:
                raise VariableMismatch(f"{self.vars} vs {other.vars}")
            return other
        if isinstance(other, LaurentPoly):
            if other.vars != self.vars:
                raise VariableMismatch(f"{self.vars} vs {other.vars}")
            return RationalFunction(other)
        if isinstance(other, int):
            return RationalFunction(LaurentPoly.const(other, self.vars))
        return NotImplemented

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_laurent(self) -> bool:
        return self.den.divides(self.num)

    def as_laurent(self) -> LaurentPoly:
        """The Laurent polynomial equal to this function, or NotDivisible."""
        return self.num.exact_div(self.den)

    def simplified(self) -> "RationalFunction":
        """Collapse to denominator 1 when the quotient is a Laurent polynomial."""
        if self.den == 1:
            return self
        try:
            return RationalFunction(self.num.exact_div(self.den))
        except NotDivisible:
            return self

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if self.den == other.den:
            return RationalFunction(self.num + other.num, self.den)
        return RationalFunction(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction(-self.num, self.den)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other - self

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return RationalFunction(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def inverse(self) -> "RationalFunction":
        if self.num.is_zero():
            raise ZeroDivisionError("inverse of zero")
        return RationalFunction(self.den, self.num)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other * self.inverse()

    def __pow__(self, k: int) -> "RationalFunction":
        if k < 0:
            return self.inverse() ** (-k)
        return RationalFunction(self.num ** k, self.den ** k)

    def __eq__(self, other) -> bool:
        if isinstance(other, (LaurentPoly, int)):
            other = self._coerce(other)
        if not isinstance(other, RationalFunction):
            return NotImplemented
        if self.vars != other.vars:
            return False
        return self.num * other.den == other.num * self.den

    __hash__ = None  # equality is not canonical

    def evaluate(self, point) -> Fraction:
        d = self.den.evaluate(point)
        if d == 0:
            raise ZeroDivisionError("denominator vanishes at point")
        return self.num.evaluate(point) / d

    def substitute(self, bindings, target_vars=None) -> "RationalFunction":
        return lp_substitute(self.num, bindings, target_vars) / lp_substitute(self.den, bindings, target_vars)

    def degrees(self) -> tuple[int, int]:
        return self.num.total_degree(), self.den.total_degree()

    def __str__(self) -> str:
        if self.den == 1:
            return str(self.num)
        return f"({self.num})/({self.den})"

    def __repr__(self) -> str:
        return f"RationalFunction({self})"


def lp_arith(op: str, a: LaurentPoly, b: LaurentPoly) -> LaurentPoly:
    if a.vars != b.vars:
        raise VariableMismatch(f"{a.vars} vs {b.vars}")
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown op {op!r}")


def lp_exact_div(a: LaurentPoly, b: LaurentPoly) -> LaurentPoly:
    return a.exact_div(b)


def lp_substitute(a: LaurentPoly, bindings: Mapping[str, RationalFunction | LaurentPoly],
                  target_vars: Sequence[str] | None = None) -> RationalFunction:
    """Compose ``a`` with the given bindings.

    Unbound variables whose name is also a variable of the target ring pass
    through unchanged. The result uses a single common denominator built from
    the extreme exponents of each variable, so no per-term denominators pile up.
    """
    values = {k: RationalFunction.lift(v) for k, v in bindings.items()}
    if target_vars is None:
        rings = {v.vars for v in values.values()}
        if len(rings) > 1:
            raise VariableMismatch("bindings live in different rings")
        if not rings:
            raise UnboundVariable("no bindings and no target ring given")
        target_vars = rings.pop()
    target_vars = tuple(target_vars)
    for v in values.values():
        if v.vars != target_vars:
            raise VariableMismatch(f"binding over {v.vars}, target {target_vars}")
    for name in a.support_vars():
        if name not in values:
            if name in target_vars:
                values[name] = RationalFunction(LaurentPoly.var(name, target_vars))
            else:
                raise UnboundVariable(name)
    if a.is_zero():
        return RationalFunction(LaurentPoly.zero(target_vars))
    lo, hi = a.min_exponents(), a.max_exponents()
    one = LaurentPoly.one(target_vars)
    cache: dict = {}

    def power(p: LaurentPoly, k: int, key) -> LaurentPoly:
        if k == 0:
            return one
        if p.is_monomial():
            (e, c), = p.terms.items()
            return LaurentPoly._raw(target_vars, {tuple(k * x for x in e): c ** k})
        ck = (key, k)
        if ck not in cache:
            cache[ck] = p ** k
        return cache[ck]

    active = [(i, name, values[name]) for i, name in enumerate(a.vars)
              if lo[i] or hi[i]]
    den = one
    for i, name, v in active:
        den = den * power(v.den, max(hi[i], 0), (name, "d")) * power(v.num, max(-lo[i], 0), (name, "n"))
    num = LaurentPoly.zero(target_vars)
    for e, c in a.terms.items():
        t = LaurentPoly.const(c, target_vars)
        for i, name, v in active:
            t = t * power(v.num, e[i] + max(-lo[i], 0), (name, "n"))
            t = t * power(v.den, max(hi[i], 0) - e[i], (name, "d"))
        num = num + t
    return RationalFunction(num, den)
