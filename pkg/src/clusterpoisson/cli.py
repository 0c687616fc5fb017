"""Command-line front end. Every subcommand prints one JSON document.

Exit codes: 0 success, 2 malformed input, 3 direction out of range,
4 rank-deficient exchange matrix, 5 enumeration too large.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass
from fractions import Fraction

from clusterpoisson import components as comp
from clusterpoisson import grassmannian as gr
from clusterpoisson import local_data as ld
from clusterpoisson import tau as tp
from clusterpoisson.exchange import DirectionError, graph_of, laurent_check, mutate_word, parse_word
from clusterpoisson.io import MalformedInput, dumps, load_seed, matrix_from_json, matrix_to_json, num_str, \
    poly_to_json, seed_to_json

EXIT_MALFORMED, EXIT_DIRECTION, EXIT_RANK, EXIT_TOO_LARGE = 2, 3, 4, 5


@dataclass(frozen=True)
class RunConfig:
    subcommand: str
    seed: str | None = None
    out: str | None = None
    word: str = ""
    method: str = "auto"
    max_bits: int | None = None
    threads: int = 1
    rng_seed: int = 0

    def __post_init__(self):
        if self.max_bits is not None and self.max_bits <= 0:
            raise MalformedInput("--max-bits must be positive")
        if self.threads <= 0:
            raise MalformedInput("--threads must be positive")
        if self.seed is not None and not self.seed:
            raise MalformedInput("--seed path is empty")


def _emit(obj, out: str | None) -> None:
    text = dumps(obj)
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _word(text: str):
    try:
        return parse_word(text)
    except ValueError as exc:
        raise MalformedInput(f"bad mutation word {text!r}") from exc


def _nums(xs) -> list:
    return [num_str(x) for x in xs]


# -- subcommands -------------------------------------------------------------------


def cmd_mutate(cfg: RunConfig) -> dict:
    s = mutate_word(load_seed(cfg.seed), _word(cfg.word))
    return seed_to_json(s)


def cmd_laurent_check(cfg: RunConfig) -> dict:
    s = mutate_word(load_seed(cfg.seed), _word(cfg.word))
    reps = laurent_check(s)
    return {
        "all_laurent": all(r.laurent for r in reps),
        "variables": [{"label": r.label, "laurent": r.laurent,
                       "value": str(r.poly) if r.poly is not None else None} for r in reps],
        "word": _nums(_word(cfg.word)),
    }


def _lambdas(text: str | None, space: tp.BracketSpace) -> list:
    if not text:
        return [1] * space.r + [0] * (space.dimension - space.r)
    try:
        vals = [Fraction(x) for x in text.split(",")]
    except ValueError as exc:
        raise MalformedInput(f"bad --lambda list {text!r}") from exc
    if len(vals) != space.dimension:
        raise MalformedInput(f"--lambda needs {space.dimension} values")
    return vals


def cmd_poisson(cfg: RunConfig) -> dict:
    E = load_seed(cfg.seed).exchange
    space = tp.compatible_brackets(E)
    Zp = tp.extend_matrix(E)
    kappa = tp.find_kappa(E, Zp)
    gens = []
    for g in space.generators:
        Of = tp.omega_f_from_tau(g.Omega, Zp, kappa)
        ok, delta = tp.verify_compatibility(E, Of)
        gens.append({"omega_tau": matrix_to_json(g.Omega), "omega_f": matrix_to_json(Of),
                     "compatible": ok, "delta": _nums(delta)})
    Omega = tp.combine(space.generators, _lambdas(None, space))
    labels = load_seed(cfg.seed).labels
    cas = tp.casimir_basis(Omega.Omega, Zp, kappa)
    return {"dimension": num_str(space.dimension), "r": num_str(space.r),
            "classes": [_nums(c) for c in space.classes], "kappa": _nums(kappa),
            "scale": num_str(space.scale), "generators": gens,
            "generators_tau": [matrix_to_json(g.Omega) for g in space.generators],
            "casimirs": [poly_to_json(c.monomial(labels)) for c in cas]}


def cmd_casimirs(cfg: RunConfig, lambdas: str | None = None) -> dict:
    s = load_seed(cfg.seed)
    E = s.exchange
    space = tp.compatible_brackets(E)
    coeffs = _lambdas(lambdas, space)
    Omega = tp.combine(space.generators, coeffs)
    Zp = tp.extend_matrix(E)
    kappa = tp.find_kappa(E, Zp)
    cas = tp.casimir_basis(Omega.Omega, Zp, kappa)
    return {"casimirs": [{"alpha": _nums(c.alpha), "display": str(c.monomial(s.labels)),
                          "monomial": poly_to_json(c.monomial(s.labels)), "u": _nums(c.u)}
                         for c in cas],
            "corank": num_str(Omega.corank()), "kappa": _nums(kappa), "lambda": _nums(coeffs)}


def cmd_toric(cfg: RunConfig) -> dict:
    E = load_seed(cfg.seed).exchange
    if E.rank() < E.m:
        raise tp.RankDeficient(f"rank Z = {E.rank()} < m = {E.m}")
    return {"basis": [_nums(w) for w in tp.toric_weight_basis(E)]}


def _report(rep: comp.OrbitReport) -> dict:
    out = {"count": num_str(rep.count), "method": rep.method}
    if rep.t is not None:
        out["t"] = num_str(rep.t)
    if rep.kernel_dim is not None:
        out["kernel_dim"] = num_str(rep.kernel_dim)
    return out


def cmd_components(cfg: RunConfig, z4: str | None = None) -> dict:
    E = load_seed(cfg.seed).exchange
    Z4 = None
    if z4:
        import json

        try:
            Z4 = matrix_from_json(json.loads(z4))
        except json.JSONDecodeError as exc:
            raise MalformedInput(f"bad --z4 {z4!r}") from exc
    try:
        eta = comp.SignForm.from_exchange(E, Z4)
    except ValueError as exc:
        raise MalformedInput(str(exc)) from exc
    graph = comp.induced(comp.undirected(graph_of(E)), range(1, E.m + 1))
    rep = comp.orbit_count(eta, graph, method=cfg.method, max_bits=cfg.max_bits, threads=cfg.threads)
    return _report(rep)


def cmd_grassmannian(cfg: RunConfig, k: int, n: int, report: str) -> dict:
    try:
        p = gr.GrassmannParams(k, n)
    except ValueError as exc:
        raise MalformedInput(str(exc)) from exc
    out: dict = {"k": num_str(p.k), "n": num_str(p.n), "m": num_str(p.m), "l": num_str(p.l)}
    if report in ("seed", "full"):
        E = gr.grid_exchange_matrix(p)
        cl, tr = gr.vertex_order(p)
        out["seed"] = {
            "Z": matrix_to_json(E.Z),
            "labels": list(gr.vertex_labels(p)),
            "cluster": [_nums(v) for v in cl],
            "tropic": [_nums(v) for v in tr],
            "minors": {lab: {"cols": _nums(f.cols), "rows": _nums(f.rows), "sign": num_str(f.sign)}
                       for lab, f in zip(gr.vertex_labels(p), (gr.initial_cluster_fn(p, i, j) for i, j in cl + tr))},
        }
    if report in ("poisson", "full"):
        out["omega_km"] = matrix_to_json(gr.omega_km(p))
        out["omega_f"] = matrix_to_json(gr.omega_f_grid(p))
    if report in ("corank", "full", "poisson"):
        c = gr.corank_and_casimirs(p)
        out["corank"] = {
            "corank": num_str(c.corank),
            "rank_corank": num_str(c.rank_corank),
            "formula": num_str(c.formula),
            "d_km": num_str(c.d_km),
            "casimirs": [{f"J{r}": num_str(e) for r, e in sorted(cas.items())} for cas in c.casimirs],
            "kernel": [[_nums(row) for row in V] for V in c.kernel],
        }
    if report in ("components", "full"):
        rep, closed = gr.count_components(p, method=cfg.method, max_bits=cfg.max_bits, threads=cfg.threads)
        body = _report(rep)
        body["closed_form"] = num_str(closed) if closed is not None else None
        if report == "components":
            out.update(body)
        else:
            out["components"] = body
    return out


_MAPS = {"order5": ld.order5_map, "order4": ld.order4_map, "pq11": ld.pq11_map}


def cmd_local_data(cfg: RunConfig, name: str, param: str, sign: int, bound: int, degrees: int,
                   reduce: bool) -> dict:
    try:
        f = _MAPS[name](Fraction(param), sign)
    except (ValueError, ZeroDivisionError) as exc:
        raise MalformedInput(str(exc)) from exc
    if bound < 1 or degrees < 0:
        raise MalformedInput("--bound must be >= 1 and --degrees >= 0")
    import random

    order = ld.order_up_to(f, bound, rng=random.Random(cfg.rng_seed))
    out = {"map": name, "param": num_str(Fraction(param)), "sign": num_str(sign), "X": str(f.X), "Y": str(f.Y),
           "order": num_str(order) if isinstance(order, int) else None, "bound": num_str(bound)}
    if degrees:
        out["degrees"] = [_nums(d) for d in ld.degree_growth(f, degrees, reduce=reduce,
                                                               rng=random.Random(cfg.rng_seed))]
        out["reduced"] = reduce
    return out


# -- argument parsing ----------------------------------------------------------------


def _parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="clusterpoisson", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="cmd", required=True)

    def seeded(name, help_):
        p = sub.add_parser(name, help=help_)
        p.add_argument("--seed", required=True, help="seed JSON file")
        p.add_argument("--out", help="write the report here instead of stdout")
        return p

    p = seeded("mutate", "apply a mutation word to a seed")
    p.add_argument("--word", default="", help="comma-separated 1-based directions")
    p = seeded("laurent-check", "mutate, then test every cluster variable for the Laurent property")
    p.add_argument("--word", default="")
    seeded("poisson", "basis of compatible Poisson brackets")
    p = seeded("casimirs", "Casimir monomials of a compatible bracket")
    p.add_argument("--lambda", dest="lambdas", help="comma-separated generator coefficients")
    seeded("toric", "basis of toric weights")

    def counting(p):
        p.add_argument("--method", choices=("auto", "enumerate", "formula"), default="auto")
        p.add_argument("--max-bits", type=int, default=None, help="enumeration limit (default CLUSTER_MAX_BITS or 24)")
        p.add_argument("--threads", type=int, default=1)

    p = seeded("components", "orbit count of the sign form")
    p.add_argument("--z4", help="tropic-tropic block as a JSON matrix")
    counting(p)
    p = sub.add_parser("grassmannian", help="reports for the cluster structure on G(k, n)")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--report", choices=("seed", "poisson", "corank", "components", "full"), default="full")
    p.add_argument("--out")
    counting(p)
    p = sub.add_parser("local-data", help="order and degree growth of the planar maps")
    p.add_argument("--map", dest="name", choices=sorted(_MAPS), required=True)
    p.add_argument("--param", default="1", help="b (order5, pq11) or a (order4)")
    p.add_argument("--sign", type=int, choices=(1, -1), default=1)
    p.add_argument("--bound", type=int, default=12)
    p.add_argument("--degrees", type=int, default=0, help="number of iterates to report degrees for")
    p.add_argument("--reduce", action="store_true", help="report degrees of the reduced iterates")
    p.add_argument("--rng-seed", type=int, default=0)
    p.add_argument("--out")
    return ap


def run(argv=None) -> int:
    try:
        args = _parser().parse_args(argv)
    except SystemExit as exc:
        return EXIT_MALFORMED if exc.code else 0
    try:
        cfg = RunConfig(args.cmd, getattr(args, "seed", None), getattr(args, "out", None),
                        getattr(args, "word", ""), getattr(args, "method", "auto"),
                        getattr(args, "max_bits", None), getattr(args, "threads", 1),
                        getattr(args, "rng_seed", 0))
        if args.cmd == "mutate":
            result = cmd_mutate(cfg)
        elif args.cmd == "laurent-check":
            result = cmd_laurent_check(cfg)
        elif args.cmd == "poisson":
            result = cmd_poisson(cfg)
        elif args.cmd == "casimirs":
            result = cmd_casimirs(cfg, args.lambdas)
        elif args.cmd == "toric":
            result = cmd_toric(cfg)
        elif args.cmd == "components":
            result = cmd_components(cfg, args.z4)
        elif args.cmd == "grassmannian":
            result = cmd_grassmannian(cfg, args.k, args.n, args.report)
        else:
            result = cmd_local_data(cfg, args.name, args.param, args.sign, args.bound, args.degrees, args.reduce)
        _emit(result, cfg.out)
        return 0
    except DirectionError as exc:
        return _fail(EXIT_DIRECTION, exc)
    except tp.RankDeficient as exc:
        return _fail(EXIT_RANK, exc)
    except comp.TooLarge as exc:
        return _fail(EXIT_TOO_LARGE, exc)
    except (MalformedInput, comp.PreconditionNotMet, tp.AlphaLeadingBlockNonzero) as exc:
        return _fail(EXIT_MALFORMED, exc)


def _fail(code: int, exc: Exception) -> int:
    sys.stderr.write(f"error: {exc}\n")
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
