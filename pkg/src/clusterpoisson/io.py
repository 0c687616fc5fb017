"""JSON encodings for seeds, matrices and polynomials.

Coefficients and matrix entries are decimal strings ("p/q" for rationals) so
big integers survive any JSON reader; shapes, exponents and D are plain
integers. Keys are sorted and polynomial terms are listed in descending
exponent order, so the encoding of a given object is unique.

    polynomial  {"vars": [names], "terms": [{"e": [ints], "c": "int"}]}
    matrix      {"rows": r, "cols": c, "data": [["..."]]}
    seed        {"Z": matrix, "D": [ints], "labels": [names],
                 "vars": [polynomial or {"num": polynomial, "den": polynomial}]}
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Any

from clusterpoisson.exact import LaurentPoly, Matrix, RationalFunction
from clusterpoisson.exchange import ExchangeMatrix, Seed

__all__ = [
    "MalformedInput",
    "num_str",
    "parse_num",
    "matrix_to_json",
    "matrix_from_json",
    "poly_to_json",
    "poly_from_json",
    "rational_to_json",
    "rational_from_json",
    "seed_to_json",
    "seed_from_json",
    "dumps",
    "load_seed",
]


class MalformedInput(ValueError):
    pass


def num_str(x) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def parse_num(s) -> Fraction | int:
    """Decimal string (or JSON integer) to int, or Fraction when not integral."""
    if isinstance(s, bool) or not isinstance(s, (str, int)):
        raise MalformedInput(f"expected a decimal string, got {s!r}")
    try:
        x = Fraction(s)
    except (ValueError, ZeroDivisionError) as exc:
        raise MalformedInput(f"bad number {s!r}") from exc
    return x.numerator if x.denominator == 1 else x


def _int(s) -> int:
    x = parse_num(s)
    if not isinstance(x, int):
        raise MalformedInput(f"expected an integer, got {s!r}")
    return x


def matrix_to_json(M: Matrix) -> dict:
    return {"cols": M.cols, "data": [[num_str(x) for x in row] for row in M.data], "rows": M.rows}


def matrix_from_json(obj) -> Matrix:
    """Accepts the encoded form or a bare list of rows."""
    if isinstance(obj, dict):
        try:
            rows, cols, data = _int(obj["rows"]), _int(obj["cols"]), obj["data"]
        except KeyError as exc:
            raise MalformedInput(f"matrix lacks {exc}") from exc
    else:
        rows = cols = None
        data = obj
    if not isinstance(data, list) or not all(isinstance(r, list) for r in data):
        raise MalformedInput("matrix data must be a list of rows")
    try:
        return Matrix([[parse_num(x) for x in r] for r in data], rows, cols)
    except ValueError as exc:
        raise MalformedInput(str(exc)) from exc


def poly_to_json(P: LaurentPoly) -> dict:
    return {"terms": [{"c": num_str(c), "e": list(e)} for e, c in P.sorted_terms()], "vars": list(P.vars)}


def poly_from_json(obj, ring=None) -> LaurentPoly:
    if not isinstance(obj, dict) or "terms" not in obj:
        raise MalformedInput("polynomial must be an object with 'terms'")
    names = obj.get("vars", ring)
    if not isinstance(names, list) or not all(isinstance(v, str) for v in names):
        raise MalformedInput("polynomial needs a list of variable names")
    if ring is not None and list(ring) != names:
        raise MalformedInput("polynomial variables differ from the seed ring")
    out: dict = {}
    for t in obj["terms"]:
        if not isinstance(t, dict) or not isinstance(t.get("e"), list) or len(t["e"]) != len(names):
            raise MalformedInput(f"bad term {t!r}")
        e = tuple(_int(x) for x in t["e"])
        out[e] = out.get(e, 0) + _int(t.get("c"))
    return LaurentPoly(tuple(names), out)


def rational_to_json(f: RationalFunction) -> dict:
    if f.den == 1:
        return poly_to_json(f.num)
    return {"den": poly_to_json(f.den), "num": poly_to_json(f.num)}


def rational_from_json(obj, ring=None) -> RationalFunction:
    if isinstance(obj, dict) and "num" in obj:
        try:
            return RationalFunction(poly_from_json(obj["num"], ring), poly_from_json(obj["den"], ring))
        except KeyError as exc:
            raise MalformedInput("ratio needs 'num' and 'den'") from exc
        except ZeroDivisionError as exc:
            raise MalformedInput("zero denominator") from exc
    return RationalFunction(poly_from_json(obj, ring))


def seed_to_json(s: Seed) -> dict:
    return {
        "D": list(s.exchange.D),
        "Z": matrix_to_json(s.exchange.Z),
        "labels": list(s.labels),
        "vars": [rational_to_json(v) for v in s.vars],
    }


def seed_from_json(obj: Any) -> Seed:
    """Seed from its JSON form. Only ``Z`` is required; ``D`` defaults to ones,
    ``labels`` to f1..fn, and without ``vars`` the seed is the initial one."""
    if not isinstance(obj, dict) or "Z" not in obj:
        raise MalformedInput("seed must be an object with a 'Z' matrix")
    unknown = set(obj) - {"D", "Z", "labels", "vars"}
    if unknown:
        raise MalformedInput(f"unknown seed fields {sorted(unknown)}")
    Z = matrix_from_json(obj["Z"])
    D = obj.get("D")
    if D is not None and not isinstance(D, list):
        raise MalformedInput("D must be a list")
    try:
        E = ExchangeMatrix.from_rows(Z.data, None if D is None else [_int(d) for d in D])
    except ValueError as exc:
        raise MalformedInput(str(exc)) from exc
    labels = obj.get("labels")
    if labels is not None and (not isinstance(labels, list) or len(labels) != E.n
                               or not all(isinstance(x, str) for x in labels) or len(set(labels)) != E.n):
        raise MalformedInput("labels must be n distinct strings")
    if "vars" not in obj:
        return Seed.initial(E, labels)
    vs = obj["vars"]
    if not isinstance(vs, list) or len(vs) != E.n:
        raise MalformedInput("need one variable per column of Z")
    first = vs[0].get("num", vs[0]) if isinstance(vs[0], dict) else None
    ring = first.get("vars") if isinstance(first, dict) else None
    vars_ = tuple(rational_from_json(v, ring) for v in vs)
    labels = labels or [f"f{j}" for j in range(1, E.n + 1)]
    try:
        return Seed(E, vars_, tuple(labels))
    except ValueError as exc:
        raise MalformedInput(str(exc)) from exc


def dumps(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def load_seed(path: str) -> Seed:
    try:
        with open(path, encoding="utf-8") as fh:
            obj = json.load(fh)
    except (OSError, UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise MalformedInput(f"cannot read seed {path}: {exc}") from exc
    return seed_from_json(obj)
