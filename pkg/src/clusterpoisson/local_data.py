"""Birational maps of the plane built from local mutation data.

Local data is a function ``phi`` and a family ``psi_w`` of rational functions
of one variable. For two log-canonical coordinates (x, y) with coefficient
matrix [[0, w], [-w, 0]], the transformation F_1 sends (x, y) to
(phi(x), y psi_w(x)); F_2 acts the same way on y. The maps here are exact
(integer-coefficient numerators and denominators, rational parameters
absorbed into the constants) and composition is unreduced.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from clusterpoisson.exact import LaurentPoly, RationalFunction

__all__ = [
    "XY",
    "BirationalMap2D",
    "IdenticallyZeroDenominator",
    "NotFoundWithin",
    "LocalData",
    "compose",
    "iterate",
    "is_identity",
    "order_up_to",
    "degree_growth",
    "order5_map",
    "order4_map",
    "pq11_map",
    "lemma13_psi",
    "type_ii_psi",
    "scaled_psi",
    "local_transform",
    "type_ii_data",
]

XY = ("x", "y")
XI = ("xi",)


class IdenticallyZeroDenominator(ZeroDivisionError):
    pass


def _const(c, vars=XY) -> RationalFunction:
    c = Fraction(c)
    return RationalFunction(LaurentPoly.const(c.numerator, vars), LaurentPoly.const(c.denominator, vars))


def _var(name: str, vars=XY) -> RationalFunction:
    return RationalFunction(LaurentPoly.var(name, vars))


@dataclass(frozen=True)
class BirationalMap2D:
    """(x, y) -> (X(x, y), Y(x, y)) with X, Y rational functions over ``XY``."""

    X: RationalFunction
    Y: RationalFunction
    label: str = ""

    def __post_init__(self):
        for comp in (self.X, self.Y):
            if comp.vars != XY:
                raise ValueError(f"components must live over {XY}, got {comp.vars}")
            if comp.den.is_zero():
                raise IdenticallyZeroDenominator("component denominator is zero")

    @classmethod
    def identity(cls) -> "BirationalMap2D":
        return cls(_var("x"), _var("y"), "id")

    @classmethod
    def swap(cls) -> "BirationalMap2D":
        return cls(_var("y"), _var("x"), "sigma")

    def __call__(self, x, y) -> tuple[Fraction, Fraction]:
        pt = {"x": Fraction(x), "y": Fraction(y)}
        return self.X.evaluate(pt), self.Y.evaluate(pt)

    def degrees(self) -> tuple[int, int]:
        """max(deg numerator, deg denominator) of each component, as stored."""
        return max(self.X.degrees()), max(self.Y.degrees())


def compose(f: BirationalMap2D, g: BirationalMap2D) -> BirationalMap2D:
    """f o g, substituting g's components into f without cancelling."""
    sub = {"x": g.X, "y": g.Y}
    comps = []
    for c in (f.X, f.Y):
        den = c.den.substitute(sub, XY)
        if den.num.is_zero():
            raise IdenticallyZeroDenominator("composition has a zero denominator")
        comps.append(c.num.substitute(sub, XY) / den)
    return BirationalMap2D(comps[0], comps[1], f"{f.label}o{g.label}")


def _nonzero_div(a: RationalFunction, b: RationalFunction) -> RationalFunction:
    if b.num.is_zero():
        raise IdenticallyZeroDenominator("division by an identically zero function")
    return a / b


def iterate(f: BirationalMap2D, r: int) -> BirationalMap2D:
    out = BirationalMap2D.identity()
    for _ in range(r):
        out = compose(f, out)
    return out


def is_identity(f: BirationalMap2D) -> bool:
    """Cross-multiplied check X = x and Y = y."""
    x, y = LaurentPoly.var("x", XY), LaurentPoly.var("y", XY)
    return f.X.num == x * f.X.den and f.Y.num == y * f.Y.den


@dataclass(frozen=True)
class NotFoundWithin:
    bound: int


def _random_point(rng: random.Random) -> tuple[Fraction, Fraction]:
    return tuple(Fraction(rng.randint(-97, 97), rng.randint(1, 97)) for _ in range(2))


def _moves(f: BirationalMap2D, r: int, points) -> bool:
    """True when some point is provably not fixed by f^r (exact arithmetic)."""
    for p in points:
        q = p
        try:
            for _ in range(r):
                q = f(*q)
        except ZeroDivisionError:
            continue
        if q != p:
            return True
    return False


def order_up_to(f: BirationalMap2D, N: int, points: int = 4, rng: random.Random | None = None):
    """Smallest r <= N with f^r = id, else NotFoundWithin(N).

    A point moved by f^r proves f^r != id. When every sample point is fixed,
    f^r is composed symbolically and compared by cross-multiplication.
    """
    if N < 1:
        raise ValueError("N must be >= 1")
    rng = rng or random.Random(0)
    pts = [_random_point(rng) for _ in range(points)]
    for r in range(1, N + 1):
        if not _moves(f, r, pts) and is_identity(iterate(f, r)):
            return r
    return NotFoundWithin(N)


# -- degree growth ------------------------------------------------------------------


_PRIME = (1 << 61) - 1


def _utrim(p: list) -> list:
    while p and p[-1] == 0:
        p.pop()
    return p


def _umul(a: list, b: list) -> list:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % _PRIME
    return _utrim(out)


def _uadd(a: list, b: list) -> list:
    n = max(len(a), len(b))
    return _utrim([((a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0)) % _PRIME for i in range(n)])


def _udivmod(a: list, b: list) -> tuple[list, list]:
    a, q = list(a), [0] * max(len(a) - len(b) + 1, 0)
    inv = pow(b[-1], -1, _PRIME)
    while a and len(a) >= len(b):
        c = a[-1] * inv % _PRIME
        s = len(a) - len(b)
        q[s] = c
        for i, y in enumerate(b):
            a[s + i] = (a[s + i] - c * y) % _PRIME
        _utrim(a)
    return _utrim(q), a


def _ugcd(a: list, b: list) -> list:
    while b:
        a, b = b, _udivmod(a, b)[1]
    return a


def _ureduce(num: list, den: list) -> tuple[list, list]:
    g = _ugcd(num, den)
    return _udivmod(num, g)[0], _udivmod(den, g)[0]


def _upow(p: list, k: int) -> list:
    out = [1]
    for _ in range(k):
        out = _umul(out, p)
    return out


def _restrict(P: LaurentPoly, vals: dict) -> tuple[list, list]:
    """P at univariate rational functions mod p, as (num, den) coefficient lists."""
    lo, hi = P.min_exponents(), P.max_exponents()
    num: list = []
    den = [1]
    for i, name in enumerate(P.vars):
        n_, d_ = vals[name]
        den = _umul(den, _umul(_upow(d_, max(hi[i], 0)), _upow(n_, max(-lo[i], 0))))
    for e, c in P.terms.items():
        t = [c % _PRIME]
        for i, name in enumerate(P.vars):
            n_, d_ = vals[name]
            t = _umul(t, _umul(_upow(n_, e[i] + max(-lo[i], 0)), _upow(d_, max(hi[i], 0) - e[i])))
        num = _uadd(num, t)
    return num, den


def degree_growth(f: BirationalMap2D, iterations: int, reduce: bool = False,
                  symbolic: bool = False, rng: random.Random | None = None) -> list[tuple[int, int]]:
    """Component degrees of f, f^2, ..., f^N.

    Each entry is max(deg numerator, deg denominator) per component. By
    default the iterates are followed along a random line
    (x, y) = (a1 t + b1, a2 t + b2) modulo the prime 2^61 - 1, which gives
    the total degrees for a generic line and prime. Without ``reduce`` the
    numerators and denominators are combined exactly as ``compose`` does, so
    the degrees are those of the unreduced symbolic iterates; with ``reduce``
    a univariate gcd is cancelled at every step. ``symbolic=True`` composes
    the bivariate iterates instead (unreduced only, exponential cost).
    """
    if iterations < 1:
        raise ValueError("iterations must be >= 1")
    out = []
    if symbolic:
        if reduce:
            raise ValueError("symbolic iteration is unreduced")
        g = BirationalMap2D.identity()
        for _ in range(iterations):
            g = compose(f, g)
            out.append(g.degrees())
        return out
    rng = rng or random.Random(0)
    a1, b1, a2, b2 = (rng.randrange(1, _PRIME) for _ in range(4))
    cur = {"x": ([b1, a1], [1]), "y": ([b2, a2], [1])}
    for _ in range(iterations):
        nxt = {}
        for name, comp in (("x", f.X), ("y", f.Y)):
            pn, pd = _restrict(comp.num, cur)
            qn, qd = _restrict(comp.den, cur)
            num, den = _umul(pn, qd), _umul(pd, qn)
            if not den:
                raise IdenticallyZeroDenominator("iterate is undefined on the sample line")
            if reduce:
                num, den = _ureduce(num, den) if num else ([], [1])
            nxt[name] = (num, den)
        cur = nxt
        out.append(tuple(max(len(cur[v][0]), len(cur[v][1])) - 1 for v in ("x", "y")))
    return out


# -- the maps ------------------------------------------------------------------------


def order5_map(b=1, sign: int = 1) -> BirationalMap2D:
    """(x, y) -> (+-y (x + b)/b, b^2/x)."""
    b = Fraction(b)
    x, y = _var("x"), _var("y")
    X = y * (x + _const(b)) * _const(sign / b)
    return BirationalMap2D(X, _const(b * b) / x, f"T5(b={b})")


def order4_map(a=1, sign: int = 1) -> BirationalMap2D:
    """(x, y) -> (+-y, a/x)."""
    x, y = _var("x"), _var("y")
    return BirationalMap2D(y * _const(sign), _const(a) / x, f"T4(a={a})")


def pq11_map(b=1, sign: int = 1) -> BirationalMap2D:
    """(x, y) -> (+-y (x + b)/(x - b), b^2/x): both psi_1 factors linear."""
    b = Fraction(b)
    x, y = _var("x"), _var("y")
    X = _nonzero_div(y * (x + _const(b)) * _const(sign), x - _const(b))
    return BirationalMap2D(X, _const(b * b) / x, f"T11(b={b})")


# -- local data -----------------------------------------------------------------------


@dataclass(frozen=True)
class LocalData:
    """phi and psi_w as rational functions of ``xi``."""

    phi: RationalFunction
    psi: Callable[[int], RationalFunction]


def _at(expr: RationalFunction, t: RationalFunction) -> RationalFunction:
    """expr(xi := t)."""
    return expr.num.substitute({"xi": t}, t.vars) / expr.den.substitute({"xi": t}, t.vars)


def _xi() -> RationalFunction:
    return _var("xi", XI)


def lemma13_psi(w: int) -> RationalFunction:
    """(xi + 1)^w for w >= 0 and ((xi + 1)/xi)^w for w < 0."""
    xi = _xi()
    one = _const(1, XI)
    return (xi + one) ** w if w >= 0 else ((xi + one) / xi) ** w


def type_ii_psi(w: int, b=1, sign: int = 1, a_w: int = 1) -> RationalFunction:
    """(+-1)^w a_w ((xi + b)/b)^w for w >= 0 and (+-1)^w a_{-w} ((xi + b)/xi)^w for w < 0."""
    xi, bb = _xi(), _const(b, XI)
    c = _const(sign ** abs(w) * a_w, XI)
    return c * ((xi + bb) / bb) ** w if w >= 0 else c * ((xi + bb) / xi) ** w


def scaled_psi(psi: RationalFunction, b) -> RationalFunction:
    """psi(xi / b): the same data after rescaling the coordinate by b."""
    return _at(psi, _xi() * _const(Fraction(1) / Fraction(b), XI))


def type_ii_data(b=1, sign: int = 1) -> LocalData:
    xi = _xi()
    return LocalData(_const(Fraction(b) ** 2, XI) / xi, lambda w: type_ii_psi(w, b, sign))


def local_transform(data: LocalData, i: int, w: int) -> BirationalMap2D:
    """F_i for coefficient matrix [[0, w], [-w, 0]] in coordinates (x, y), i in {1, 2}."""
    if i not in (1, 2):
        raise ValueError("i must be 1 or 2")
    src, other = ("x", "y") if i == 1 else ("y", "x")
    t = _var(src)
    # omega_{i, other} is w for i = 1 and -w for i = 2
    coeff = w if i == 1 else -w
    new_src = _at(data.phi, t)
    new_other = _var(other) * _at(data.psi(coeff), t)
    if i == 1:
        return BirationalMap2D(new_src, new_other, "F1")
    return BirationalMap2D(new_other, new_src, "F2")
