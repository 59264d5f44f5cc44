"""Command line front end: presentations, queries, batch spectra and a distance cache."""

from __future__ import annotations

import argparse
import csv
import hashlib
import json
import math
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, TextIO

from .defgraph import MAX_VERTICES, DefGraph, DefGraphError
from .dynamics import classify_on_omega
from .groups import GroupSpecError, VertexGroupSpec, spec_from_json
from .hypermetric import OmegaError
from .hyperplanes import HyperplaneError
from .oracle import OracleError, graph_product_ratio, staircase_ratio
from .qm import BackendError, GeodesicCapExceeded, OrientedEdge, StaircaseParams
from .space import Budget, BudgetExceeded, Space, parse_shift
from .translation import TranslationCertificate, VerificationError, translation_length_omega
from .words import GraphProduct, WordError

EXIT_CONFIG = 1
EXIT_BUDGET = 2
EXIT_VERIFY = 3

CACHE_HEADER = "QMTLCACHE v1"


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class PresentationConfig:
    name: str
    graph: Optional[DefGraph] = None
    groups: tuple[VertexGroupSpec, ...] = ()
    staircase: Optional[StaircaseParams] = None
    digest: str = ""

    def build(self, fast: bool = True) -> Space:
        if self.staircase is not None:
            return Space.from_staircase(self.staircase, fast=fast)
        return Space.from_graph_product(GraphProduct(self.graph, self.groups), fast=fast)


def parse_config(obj: dict, name: str = "presentation") -> PresentationConfig:
    if not isinstance(obj, dict):
        raise ConfigError("the configuration must be a JSON object")
    digest = hashlib.sha256(json.dumps(obj, sort_keys=True).encode()).hexdigest()[:16]
    name = obj.get("name", name)
    if "staircase" in obj:
        if "graph" in obj or "groups" in obj:
            raise ConfigError("'staircase' excludes 'graph' and 'groups'")
        s = obj["staircase"]
        try:
            params = StaircaseParams(int(s["n"]), int(s.get("w", 1)), int(s.get("h", 1)))
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigError(f"bad staircase block: {exc}") from None
        return PresentationConfig(name, staircase=params, digest=digest)
    try:
        g = obj["graph"]
        vertices = [str(v) for v in g["vertices"]]
        edges = [tuple(str(x) for x in e) for e in g.get("edges", [])]
    except (KeyError, TypeError) as exc:
        raise ConfigError(f"bad graph block: {exc}") from None
    if len(vertices) > MAX_VERTICES:
        raise ConfigError(f"at most {MAX_VERTICES} vertices are supported, got {len(vertices)}")
    graph = DefGraph.build(vertices, edges)
    groups = obj.get("groups")
    if groups is None:
        raise ConfigError("missing 'groups'")
    if not isinstance(groups, dict):
        groups = {v: groups for v in vertices}
    missing = [v for v in vertices if v not in groups and "*" not in groups]
    if missing:
        raise ConfigError(f"no vertex group for {missing}")
    extra = [v for v in groups if v not in vertices and v != "*"]
    if extra:
        raise ConfigError(f"groups given for unknown vertices {extra}")
    specs = tuple(spec_from_json(groups.get(v, groups.get("*"))) for v in vertices)
    return PresentationConfig(name, graph, specs, digest=digest)


def load_config(path: str) -> PresentationConfig:
    try:
        with open(path, encoding="utf-8") as fh:
            obj = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON ({exc})") from None
    return parse_config(obj, os.path.splitext(os.path.basename(path))[0])


# ----- cache -------------------------------------------------------------------


class CacheFile:
    """Persisted ΩX distances; advisory, keyed by presentation digest."""

    def __init__(self, path: str, digest: str):
        self.path = path
        self.digest = digest

    def load(self) -> dict[tuple[str, str, str], float]:
        out: dict[tuple[str, str, str], float] = {}
        if not os.path.exists(self.path):
            return out
        with open(self.path, encoding="utf-8") as fh:
            lines = fh.read().splitlines()
        if len(lines) < 2 or lines[0] != CACHE_HEADER or lines[1] != f"presentation {self.digest}":
            return out
        for line in lines[2:]:
            parts = line.split("\t")
            if len(parts) != 4:
                continue
            mode, a, b, v = parts
            out[(mode, a, b)] = math.inf if v == "inf" else int(v)
        return out

    def save(self, entries: dict[tuple[str, str, str], float]) -> None:
        tmp = self.path + ".tmp"
        with open(tmp, "w", encoding="utf-8") as fh:
            fh.write(CACHE_HEADER + "\n")
            fh.write(f"presentation {self.digest}\n")
            for (mode, a, b), v in sorted(entries.items()):
                fh.write(f"{mode}\t{a}\t{b}\t{'inf' if math.isinf(v) else int(v)}\n")
        os.replace(tmp, self.path)


# ----- parsing helpers ---------------------------------------------------------


def parse_vertex(space: Space, text: str):
    if space.is_staircase:
        x, y = parse_shift(text)
        if not space.qm.contains((x, y)):
            raise ConfigError(f"({x},{y}) is not in the staircase region")
        return (x, y)
    return space.gp.parse(text)


_STEPS = {"right": (1, 0), "left": (-1, 0), "up": (0, 1), "down": (0, -1)}


def parse_edge(space: Space, text: str) -> OrientedEdge:
    """'<word>+<generator-token>' or, for staircases, '<x>,<y>+right|left|up|down'."""
    if "+" not in text:
        raise ConfigError(f"an edge is written <vertex>+<step>, got {text!r}")
    base, step = (s.strip() for s in text.rsplit("+", 1))
    tail = parse_vertex(space, base or "1")
    if space.is_staircase:
        if step not in _STEPS:
            raise ConfigError(f"staircase steps are {sorted(_STEPS)}")
        dx, dy = _STEPS[step]
        head = (tail[0] + dx, tail[1] + dy)
    else:
        gp = space.gp
        s = gp.parse(step)
        if len(s) != 1:
            raise ConfigError(f"{step!r} is not a single nontrivial syllable")
        head = gp.mul(tail, s)
    if not space.qm.adjacent(tail, head):
        raise ConfigError(f"{text!r} is not an edge")
    return OrientedEdge(tail, head)


def format_tau(t: Fraction) -> str:
    return f"{t.numerator}/{t.denominator}"


def format_certificate(space: Space, c: TranslationCertificate) -> str:
    if c.elliptic:
        return f"tau = {format_tau(c.tau)} (elliptic)"
    return (
        f"tau = {format_tau(c.tau)}  k = {c.witness_k}  K = {space.format_handle(c.witness_hyperplane)}"
        f"  d = {c.witness_distance}  verified j<={c.verified_depth}"
    )


# ----- commands ----------------------------------------------------------------


def _need_gp(space: Space, what: str) -> None:
    if space.gp is None:
        raise ConfigError(f"'{what}' needs a graph product presentation")


def cmd_nf(space: Space, args, out: TextIO) -> None:
    _need_gp(space, "nf")
    print(space.gp.format(space.gp.parse(args.word)), file=out)


def cmd_eq(space: Space, args, out: TextIO) -> None:
    _need_gp(space, "eq")
    gp = space.gp
    print("true" if gp.eq(gp.parse(args.w1), gp.parse(args.w2)) else "false", file=out)


def cmd_dist(space: Space, args, out: TextIO) -> None:
    print(space.qm.distance(parse_vertex(space, args.w1), parse_vertex(space, args.w2)), file=out)


def cmd_interval(space: Space, args, out: TextIO) -> None:
    x, y = parse_vertex(space, args.w1), parse_vertex(space, args.w2)
    qm = space.qm
    pts = sorted(qm.interval(x, y), key=lambda v: (qm.distance(x, v), qm.format_vertex(v)))
    for v in pts:
        print(qm.format_vertex(v), file=out)


def cmd_hyp(space: Space, args, out: TextIO) -> None:
    hs = space.hs
    e, f = parse_edge(space, args.e1), parse_edge(space, args.e2)
    rel = args.relation
    if rel == "same":
        ans = hs.same_hyperplane(e, f)
    elif rel == "transverse":
        ans = hs.transverse(e, f)
    elif rel == "contact":
        ans = not hs.same(e, f) and hs.in_contact(e, f)
    else:
        ans = not hs.same(e, f) and hs.strongly_separated(e, f)
    print("true" if ans else "false", file=out)


def cmd_omega_dist(space: Space, args, out: TextIO) -> None:
    hs = space.hs
    a, b = hs.handle(parse_edge(space, args.e1)), hs.handle(parse_edge(space, args.e2))
    r = space.metric.distance(a, b, args.mode)
    print(f"d = {'inf' if math.isinf(r.value) else r.value}", file=out)
    if r.witness_chain:
        print("chain: " + " -- ".join(space.format_handle(h) for h in r.witness_chain), file=out)


def cmd_classify(space: Space, args, out: TextIO) -> None:
    g = space.isometry(args.word)
    h, _ = space.cyclic_reduce(g)
    c = classify_on_omega(space, h, args.mode, args.fixed_power, budget=Budget(args.budget))
    tag = "certified" if c.certified else "uncertified"
    print(f"{c.verdict} ({tag}: {c.method})", file=out)


def cmd_tlen(space: Space, args, out: TextIO) -> None:
    g = space.isometry(args.word)
    c = translation_length_omega(
        space, g, args.mode, jmax=args.jmax, budget=Budget(args.budget),
        radius=args.radius, fixed_power=args.fixed_power,
    )
    print(format_certificate(space, c), file=out)


def cmd_diagnose(space: Space, args, out: TextIO) -> None:
    print(f"cliques per vertex N = {space.N}", file=out)
    print(f"delta_contact = {format_tau(space.delta('contact'))}", file=out)
    print(f"delta_crossing = {format_tau(space.delta('crossing'))}", file=out)
    print(f"crossing graph connected = {'yes' if space.metric.crossing_ok else 'no'}", file=out)
    p = space.profile
    if p is None:
        return
    V = len(space.gp.graph)
    print(f"clique number = {p.clique_number}", file=out)
    print(f"qm_delta = {p.qm_delta if p.qm_delta is not None else 'not hyperbolic (induced 4-cycle)'}", file=out)
    if p.denom_bound_hyperbolic is not None:
        print(f"denominator bound (hyperbolic X) = {space.N}^{8 * p.qm_delta}", file=out)
    print(f"denominator bound (graph product) = {V}^{40 * p.clique_number}", file=out)


def batch_spectrum(
    space: Space, elements: Sequence[str], mode: str, jmax: int = 4, budget: Optional[float] = None, threads: int = 1
) -> list[dict]:
    def one(word: str) -> dict:
        t0 = time.perf_counter()
        row = {"element": word, "tau_num": "", "tau_den": "", "k": "", "d": "", "elapsed_ms": "", "verified": "", "error": ""}
        try:
            c = translation_length_omega(space, space.isometry(word), mode, jmax=jmax, budget=Budget(budget))
            row.update(
                tau_num=c.tau.numerator, tau_den=c.tau.denominator, k=c.witness_k,
                d=c.witness_distance, verified=c.verified_depth,
            )
        except Exception as exc:  # one bad row must not stop the run
            row["error"] = f"{type(exc).__name__}: {exc}"
        row["elapsed_ms"] = int((time.perf_counter() - t0) * 1000)
        return row

    if threads > 1:
        with ThreadPoolExecutor(threads) as pool:
            return list(pool.map(one, elements))
    return [one(w) for w in elements]


CSV_FIELDS = ["element", "tau_num", "tau_den", "k", "d", "elapsed_ms", "verified", "error"]


def cmd_batch(space: Space, args, out: TextIO) -> None:
    try:
        with open(args.infile, encoding="utf-8") as fh:
            words = [ln.strip() for ln in fh if ln.strip() and not ln.lstrip().startswith("#")]
    except OSError as exc:
        raise ConfigError(f"cannot read {args.infile}: {exc.strerror}") from None
    rows = batch_spectrum(space, words, args.mode, args.jmax, args.budget, args.threads)
    with open(args.outfile, "w", newline="", encoding="utf-8") as fh:
        w = csv.DictWriter(fh, fieldnames=CSV_FIELDS)
        w.writeheader()
        w.writerows(rows)
    bad = sum(1 for r in rows if r["error"])
    print(f"{len(rows)} rows written to {args.outfile} ({bad} errors)", file=out)


def cmd_oracle(space: Space, args, out: TextIO) -> None:
    if space.is_staircase:
        s = staircase_ratio(space.qm, parse_shift(args.word), args.n, args.mode)
    else:
        gp = space.gp
        J = parse_edge(space, args.edge) if args.edge else OrientedEdge(gp.identity, gp.generator(0))
        s = graph_product_ratio(space.qm, gp, gp.parse(args.word), J, args.n, args.mode)
    for n, d in s.samples:
        print(f"n = {n}  d = {d}  d/n = {format_tau(Fraction(int(d), n)) if not math.isinf(d) else 'inf'}", file=out)
    lo = max(1, args.n - 4)
    slope = s.stabilized_slope(lo, args.n)
    print(f"slope[{lo}..{args.n}] = {format_tau(slope) if slope is not None else 'unstable'}", file=out)


# ----- parser --------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def _add_common(p: argparse.ArgumentParser, suppress: bool) -> None:
    def d(value):
        return argparse.SUPPRESS if suppress else value

    p.add_argument("--config", "-c", default=d(os.environ.get("QMTL_CONFIG")), help="presentation JSON")
    p.add_argument("--cache", metavar="PATH", default=d(None), help="persistent ΩX distance cache")
    p.add_argument("--budget", type=float, metavar="SECS", default=d(None), help="wall-clock budget")
    p.add_argument("--threads", type=int, default=d(1))
    p.add_argument("--generic", action="store_true", default=d(False), help="disable backend fast paths")


def build_parser() -> argparse.ArgumentParser:
    # options are accepted before or after the subcommand
    common = argparse.ArgumentParser(add_help=False)
    _add_common(common, suppress=True)

    modeful = argparse.ArgumentParser(add_help=False)
    modeful.add_argument("--mode", choices=("crossing", "contact"), required=True)

    p = _Parser(prog="qmtl", description="Translation lengths on crossing and contact graphs.")
    _add_common(p, suppress=False)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("nf", parents=[common], help="canonical normal form")
    s.add_argument("word")
    s.set_defaults(func=cmd_nf)
    s = sub.add_parser("eq", parents=[common], help="equality of two words")
    s.add_argument("w1")
    s.add_argument("w2")
    s.set_defaults(func=cmd_eq)
    s = sub.add_parser("dist", parents=[common], help="distance in X")
    s.add_argument("w1")
    s.add_argument("w2")
    s.set_defaults(func=cmd_dist)
    s = sub.add_parser("interval", parents=[common], help="vertices of I(x, y)")
    s.add_argument("w1")
    s.add_argument("w2")
    s.set_defaults(func=cmd_interval)
    s = sub.add_parser("hyp", parents=[common], help="hyperplane relations")
    s.add_argument("relation", choices=("same", "transverse", "contact", "ss"))
    s.add_argument("e1")
    s.add_argument("e2")
    s.set_defaults(func=cmd_hyp)
    s = sub.add_parser("omega-dist", parents=[common, modeful], help="distance in ΩX")
    s.add_argument("e1")
    s.add_argument("e2")
    s.set_defaults(func=cmd_omega_dist)
    s = sub.add_parser("classify", parents=[common, modeful], help="elliptic or loxodromic on ΩX")
    s.add_argument("word")
    s.add_argument(
        "--paper-faithful", dest="fixed_power", action="store_true", help="single fixed-power displacement test"
    )
    s.set_defaults(func=cmd_classify)
    s = sub.add_parser("tlen", parents=[common, modeful], help="translation length on ΩX")
    s.add_argument("word")
    s.add_argument("--jmax", type=int, default=4)
    s.add_argument("--radius", choices=("proof", "statement"), default="proof")
    s.add_argument(
        "--paper-faithful", dest="fixed_power", action="store_true", help="single fixed-power displacement test"
    )
    s.set_defaults(func=cmd_tlen)
    s = sub.add_parser("diagnose", parents=[common], help="hyperbolicity constants and bounds")
    s.set_defaults(func=cmd_diagnose)
    s = sub.add_parser("batch", parents=[common, modeful], help="translation lengths of many elements")
    s.add_argument("--in", dest="infile", required=True)
    s.add_argument("--out", dest="outfile", required=True)
    s.add_argument("--jmax", type=int, default=4)
    s.set_defaults(func=cmd_batch)
    s = sub.add_parser("oracle", parents=[common], help="reference computations")
    osub = s.add_subparsers(dest="oracle_command", required=True, parser_class=_Parser)
    r = osub.add_parser("ratio", parents=[common, modeful], help="d(J, g^n J) for n <= NMAX")
    r.add_argument("word")
    r.add_argument("--n", type=int, default=12)
    r.add_argument("--edge", help="base edge J (default: 1 + first generator)")
    r.set_defaults(func=cmd_oracle)
    return p


def run(argv: Optional[Sequence[str]] = None, out: TextIO = sys.stdout, err: TextIO = sys.stderr) -> int:
    args = build_parser().parse_args(argv)
    try:
        if not args.config:
            raise ConfigError("no presentation given (use --config or QMTL_CONFIG)")
        cfg = load_config(args.config)
        space = cfg.build(fast=not args.generic)
        cache = CacheFile(args.cache, cfg.digest) if args.cache and not args.generic else None
        if cache is not None:
            space.metric.persisted = cache.load()
        args.func(space, args, out)
        if cache is not None:
            cache.save(space.metric.export())
        return 0
    except BudgetExceeded as exc:
        print(f"budget exceeded: {exc}", file=err)
        return EXIT_BUDGET
    except (VerificationError, OracleError) as exc:
        print(f"verification failure: {exc}", file=err)
        return EXIT_VERIFY
    except (
        ConfigError, DefGraphError, GroupSpecError, WordError, BackendError,
        HyperplaneError, OmegaError, GeodesicCapExceeded, ValueError,
    ) as exc:
        print(f"error: {exc}", file=err)
        return EXIT_CONFIG


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
