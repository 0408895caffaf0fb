"""Command-line driver: ``graphlim <command> [options]``.

Exit status: 0 on success, 1 when a checked identity or acceptance criterion
fails, 2 for invalid configuration, 3 when a size cap is exceeded.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from fractions import Fraction
from pathlib import Path
from typing import Callable, Sequence

from . import spectral
from .acceptance import RUNTIME_BUDGET, AcceptanceConfig, run_suite
from .config import CapExceeded, GraphlimError, InfeasibleError, InvariantViolation, caps, set_caps
from .density import alpha_regularity_report, convergence_table, essential_girth_profile, parse_pattern
from .graph_core import (
    AdmissiblePair,
    Graph,
    RandomSource,
    complete,
    complete_bipartite,
    configuration_model,
    cycle,
    grid,
    hypercube,
    pair,
    path,
    projective_incidence,
    random_graph,
    star,
)
from .graphoning import (
    DEFAULT_DEPTH,
    DigitPoint,
    GaugeFunction,
    acyclicity_test,
    block_structure,
    covering_sum,
    gauge_growth_check,
    mc_rooted_tree_density,
    validate_mixed_radix,
)
from .polynomials.chromatic import chromatic_polynomial, chromatic_root_measure, chvalue_identity_check, star_sequence
from .polynomials.matching import (
    heilmann_lieb_check,
    matching_measure,
    matching_profile,
    matchpar_check,
    rho_moment_via_walks,
)
from .polynomials.roots import real_roots
from .report import canonical_json, csv_text, write_text

log = logging.getLogger("graphlim")

EXIT_OK, EXIT_ASSERT, EXIT_CONFIG, EXIT_CAP = 0, 1, 2, 3


class ConfigError(GraphlimError, ValueError):
    """The experiment configuration is invalid."""


# -- parameter ranges and families ----------------------------------------------
def parse_range(text: str | int | Sequence) -> list[int]:
    """``"4..10"``, ``"4..12..2"``, ``"2,3,5"`` or a single integer."""
    if isinstance(text, int):
        return [text]
    if isinstance(text, (list, tuple)):
        return [int(x) for x in text]
    text = str(text).strip()
    try:
        if ".." in text:
            parts = [int(p) for p in text.split("..")]
            if len(parts) == 2:
                lo, hi, step = parts[0], parts[1], 1
            elif len(parts) == 3:
                lo, hi, step = parts
            else:
                raise ValueError
            if step <= 0 or hi < lo:
                raise ValueError
            return list(range(lo, hi + 1, step))
        return [int(p) for p in text.split(",") if p]
    except ValueError:
        raise ConfigError(f"cannot parse range {text!r}") from None


@dataclass
class Family:
    name: str
    build: Callable[[dict, RandomSource | None], AdmissiblePair]
    params: tuple[str, ...]
    sweep: str  # the parameter that ranges
    random: bool = False


def _fixed(G: Graph, label: str, d=None) -> AdmissiblePair:
    return pair(G, d, label)


FAMILIES: dict[str, Family] = {
    "hypercube": Family("hypercube", lambda p, r: _fixed(hypercube(p["d"]), f"Q{p['d']}", p["d"]), ("d",), "d"),
    "projective": Family(
        "projective", lambda p, r: projective_incidence(p["q"], p.get("r", 2)), ("q", "r"), "q"
    ),
    "complete": Family("complete", lambda p, r: _fixed(complete(p["n"]), f"K{p['n']}"), ("n",), "n"),
    "cycle": Family("cycle", lambda p, r: _fixed(cycle(p["n"]), f"C{p['n']}"), ("n",), "n"),
    "path": Family("path", lambda p, r: _fixed(path(p["n"]), f"P{p['n']}"), ("n",), "n"),
    "star": Family("star", lambda p, r: _fixed(star(p["n"]), f"S{p['n']}", p["n"]), ("n",), "n"),
    "kdd": Family(
        "kdd", lambda p, r: _fixed(complete_bipartite(p["d"], p["d"]), f"K{p['d']},{p['d']}", p["d"]), ("d",), "d"
    ),
    "grid": Family(
        "grid",
        lambda p, r: _fixed(grid(p["dim"], p["side"]), f"grid{p['dim']}x{p['side']}", 2 * p["dim"]),
        ("dim", "side"),
        "dim",
    ),
    "config": Family(
        "config",
        lambda p, r: _fixed(configuration_model(p["n"], p["d"], r)[1], f"CM{p['n']}_{p['d']}", p["d"]),
        ("n", "d"),
        "n",
        random=True,
    ),
    "random": Family(
        "random",
        lambda p, r: _fixed(random_graph(p["n"], p["p"], r), f"G{p['n']}_{p['p']}"),
        ("n", "p"),
        "n",
        random=True,
    ),
}


def build_sequence(args) -> list[AdmissiblePair]:
    if args.graph_file:
        text = Path(args.graph_file).read_text()
        G = Graph.from_edgelist(text)
        return [pair(G, args.degree_bound, Path(args.graph_file).stem)]
    if not args.family:
        raise ConfigError("give --family or --graph-file")
    fam = FAMILIES.get(args.family)
    if fam is None:
        raise ConfigError(f"unknown family {args.family!r}; choose from {sorted(FAMILIES)}")
    if fam.random and args.seed is None:
        raise ConfigError(f"family {fam.name!r} is random: --seed is required")
    raw = {k: getattr(args, k, None) for k in ("d", "q", "r", "n", "dim", "side", "p")}
    missing = [k for k in fam.params if raw.get(k) is None and not (k == "r" and fam.name == "projective")]
    if missing:
        raise ConfigError(f"family {fam.name!r} needs --{' --'.join(missing)}")
    values = parse_range(raw[fam.sweep])
    rngs = RandomSource(args.seed).fork(len(values)) if fam.random else [None] * len(values)
    out = []
    for v, rng in zip(values, rngs):
        params = {}
        for k in fam.params:
            if k == fam.sweep:
                params[k] = v
            elif k == "p":
                params[k] = float(raw[k])
            elif raw.get(k) is not None:
                params[k] = parse_range(raw[k])[0]
        try:
            pr = fam.build(params, rng)
        except (CapExceeded, InfeasibleError):
            raise
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
        if args.degree_bound is not None:
            pr = AdmissiblePair(pr.graph, Fraction(args.degree_bound), pr.name)
        out.append(pr)
    return out


# -- helpers -------------------------------------------------------------------
def _header(args) -> dict:
    return {
        "caps": caps().to_dict(),
        "command": args.command,
        "seed": args.seed,
        "workers": args.workers,
    }


def _emit(args, name: str, text: str) -> None:
    if args.out:
        write_text(Path(args.out) / name, text)
    else:
        sys.stdout.write(text)


def _pmap(args, fn, items):
    """Ordered parallel map; results do not depend on the worker count."""
    items = list(items)
    if args.workers <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=args.workers) as ex:
        return list(ex.map(fn, items))


def _patterns(args) -> list[str]:
    pats = args.patterns if isinstance(args.patterns, list) else str(args.patterns).split(",")
    pats = [p.strip() for p in pats if p.strip()]
    for p in pats:
        try:
            parse_pattern(p)
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
    return pats


# -- commands ------------------------------------------------------------------
def cmd_gen(args) -> int:
    seq = build_sequence(args)
    manifest = []
    for pr in seq:
        fname = f"{pr.name or 'graph'}.edgelist"
        manifest.append({"name": pr.name, "file": fname, "n": pr.graph.n, "edges": pr.graph.num_edges, "d": pr.d})
        if args.out:
            write_text(Path(args.out) / fname, pr.graph.to_edgelist())
    _emit(args, "manifest.json", canonical_json({**_header(args), "graphs": manifest}))
    return EXIT_OK


def cmd_density(args) -> int:
    seq = build_sequence(args)
    meta = {"caps": json.dumps(caps().to_dict(), sort_keys=True), "seed": args.seed, "family": args.family}
    table = convergence_table(seq, _patterns(args), kind=args.kind, meta=meta)
    if args.format == "json":
        _emit(args, "density.json", table.to_json())
    else:
        _emit(args, "density.csv", table.to_csv())
    return EXIT_OK


def cmd_converge(args) -> int:
    seq = build_sequence(args)
    report = {**_header(args), "alpha_regularity": alpha_regularity_report(seq)}
    if args.girth_k:
        report["essential_girth"] = essential_girth_profile(seq, args.girth_k)
    spectra = _pmap(args, lambda pr: spectral.adjacency_spectrum(pr.graph), seq)
    sig = [spectral.sigma(pr, s) for pr, s in zip(seq, spectra)]
    report["sigma_consecutive_kolmogorov"] = spectral.consecutive_distances(sig)
    _emit(args, "converge.json", canonical_json(report))
    return EXIT_OK


def cmd_spectra(args) -> int:
    seq = build_sequence(args)
    spectra = _pmap(args, lambda pr: spectral.adjacency_spectrum(pr.graph, method=args.method), seq)
    rows, ok = [], True
    measures = []
    for pr, spec in zip(seq, spectra):
        spectral.check_spectrum(pr, spec)
        m = {
            "sigma": spectral.sigma(pr, spec),
            "sigma_sqrt": spectral.sigma_sqrt(pr, spec),
        }
        if args.top:
            m["sigma_top"] = spectral.sigma_top(pr, min(args.top, pr.graph.n), spec)
            m["sigma_bottom"] = spectral.sigma_bottom(pr, min(args.top, pr.graph.n), spec)
        row = {"graph": pr.name, "n": pr.graph.n, "d": pr.d}
        row["moments"] = {k: spectral.moment(m["sigma"], k) for k in range(0, args.kmax + 1)}
        row["sqrt_moments"] = {k: spectral.moment(m["sigma_sqrt"], k) for k in range(0, args.kmax + 1)}
        row["dirac"] = {}
        for eps in args.eps:
            holds = spectral.dirac_concentration_check(pr, eps, spec)
            row["dirac"][str(eps)] = {"mass": spectral.dirac_mass(pr, eps, spec), "bound_holds": holds}
            ok &= holds
        row["gaussian_kolmogorov"] = spectral.gaussian_cdf_distance(m["sigma_sqrt"])
        rows.append(row)
        measures.append(m["sigma"])
        if args.out:
            for kind, meas in m.items():
                write_text(Path(args.out) / "measures" / f"{pr.name}_{kind}.csv", meas.to_csv())
    report = {**_header(args), "graphs": rows, "sigma_consecutive_kolmogorov": spectral.consecutive_distances(measures)}
    _emit(args, "spectra.json", canonical_json(report))
    return EXIT_OK if ok else EXIT_ASSERT


def cmd_matching(args) -> int:
    seq = build_sequence(args)
    rows, ok = [], True
    for pr in seq:
        row = {"graph": pr.name, "n": pr.graph.n, "d": pr.d}
        row["walk_moments"] = {k: rho_moment_via_walks(pr, k) for k in range(0, args.kmax + 1, 2)}
        try:
            prof = matching_profile(pr.graph)
        except InfeasibleError as exc:
            row["profile"] = None
            row["note"] = str(exc)
            rows.append(row)
            continue
        roots = real_roots(prof.mu).roots
        row["profile"] = [str(x) for x in prof.m]
        row["mu"] = json.loads(prof.mu.to_json())
        row["M"], row["Pm"] = prof.total, prof.perfect
        hl = heilmann_lieb_check(pr, roots)
        row["heilmann_lieb"] = hl
        ok &= hl
        if pr.d >= 2:
            try:
                res = matchpar_check(pr)
                row["matchpar"] = {**asdict(res), "residual": res.residual}
            except InvariantViolation as exc:
                row["matchpar"] = {"error": str(exc)}
                ok = False
            if args.out:
                write_text(Path(args.out) / "measures" / f"{pr.name}_rho.csv", matching_measure(pr, roots).to_csv())
        rows.append(row)
    _emit(args, "matching.json", canonical_json({**_header(args), "graphs": rows}))
    return EXIT_OK if ok else EXIT_ASSERT


def cmd_chromatic(args) -> int:
    xi = complex(args.xi)
    report = {**_header(args), "xi": [xi.real, xi.imag]}
    ok = True
    if args.stars:
        rows = star_sequence(parse_range(args.stars), xi)
        report["stars"] = rows
    if args.family or args.graph_file:
        rows = []
        rng = RandomSource(args.seed if args.seed is not None else 0)
        for pr in build_sequence(args):
            poly = chromatic_polynomial(pr.graph)
            nu = chromatic_root_measure(pr, poly, rng)
            residual = chvalue_identity_check(pr, xi, poly, rng)
            ok &= residual <= 1e-8
            rows.append(
                {
                    "graph": pr.name,
                    "n": pr.graph.n,
                    "d": pr.d,
                    "polynomial": json.loads(poly.to_json()),
                    "identity_residual": residual,
                    "root_bound_violations": nu.meta["bound_violations"],
                }
            )
            if args.out:
                write_text(Path(args.out) / "measures" / f"{pr.name}_nu.csv", nu.to_csv())
        report["graphs"] = rows
    _emit(args, "chromatic.json", canonical_json(report))
    return EXIT_OK if ok else EXIT_ASSERT


def _gauge(args) -> GaugeFunction:
    if args.set == "mixed":
        if not (args.gammas and args.deltas):
            raise ConfigError("mixed-radix sets need --gammas and --deltas")
        try:
            return GaugeFunction.mixed_radix(parse_range(args.gammas), parse_range(args.deltas))
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
    return GaugeFunction.cube() if args.set == "cube" else GaugeFunction.proj()


def cmd_graphoning(args) -> int:
    g = _gauge(args)
    spec = block_structure(g)
    report = {**_header(args), "spec": spec.describe(), "depth": args.depth}
    ok = True
    if args.covering:
        report["covering"] = {n: covering_sum(spec, g, n) for n in parse_range(args.covering)}
        if g.kind == "mixed_radix":
            report["mixed_radix_validation"] = validate_mixed_radix(g)
        else:
            ok &= all(v == 1 for v in report["covering"].values())
    if args.acyclicity or args.mc_pattern:
        if args.seed is None:
            raise ConfigError("sampling needs --seed")
    if args.acyclicity:
        rng = RandomSource(args.seed)
        report["acyclicity"] = [
            acyclicity_test(spec, k, args.samples, args.depth, rng, args.min_blocks).to_dict()
            for k in parse_range(args.acyclicity)
        ]
    if args.mc_pattern:
        F = parse_pattern(args.mc_pattern)
        x = DigitPoint.from_fraction(Fraction(args.x), [int(r) for r in spec.radices(args.depth)])
        est = mc_rooted_tree_density(
            F, args.root, spec, x, args.samples, RandomSource(args.seed), args.alpha, args.workers
        )
        report["mc"] = {"pattern": args.mc_pattern, "root": args.root, "x": x.serialize(), **json.loads(est.to_json())}
    if args.growth:
        if g.kind == "cube":
            seq = [AdmissiblePair(hypercube(d), d, f"Q{d}") for d in parse_range(args.growth)]
        elif g.kind == "proj":
            seq = [projective_incidence(q) for q in parse_range(args.growth)]
        else:
            raise ConfigError("growth sequences are defined for cube and proj")
        report["growth"] = gauge_growth_check(g, seq)
    _emit(args, "graphoning.json", canonical_json(report))
    return EXIT_OK if ok else EXIT_ASSERT


def cmd_verify(args) -> int:
    if args.suite != "acceptance":
        raise ConfigError(f"unknown suite {args.suite!r}")
    seed = 0 if args.seed is None else args.seed
    cfg = AcceptanceConfig(seed=seed)
    only = parse_range(args.only) if args.only else None
    if only and any(not 1 <= n <= 10 for n in only):
        raise ConfigError("criteria are numbered 1..10")

    def done(res, secs):
        budget = RUNTIME_BUDGET.get(res.number)
        status = "PASS" if res.passed else "FAIL"
        extra = "" if res.passed else f" failed={','.join(res.failed_checks())}"
        limit = f"budget {budget}s" if budget else "no budget"
        print(f"criterion {res.number}: {status} ({secs:.1f}s, {limit}){extra}", file=sys.stderr, flush=True)

    results = run_suite(cfg, only, done)
    report = {
        "caps": caps().to_dict(),
        "config": cfg.to_dict(),
        "criteria": [r.to_dict() for r in results],
        "passed": all(r.passed for r in results),
        "suite": args.suite,
    }
    _emit(args, "acceptance.json", canonical_json(report))
    return EXIT_OK if report["passed"] else EXIT_ASSERT


COMMANDS = {
    "gen": cmd_gen,
    "density": cmd_density,
    "converge": cmd_converge,
    "spectra": cmd_spectra,
    "matching": cmd_matching,
    "chromatic": cmd_chromatic,
    "graphoning": cmd_graphoning,
    "verify": cmd_verify,
}


# -- parser --------------------------------------------------------------------
class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_CONFIG)


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out", default=None, help="output directory (stdout if omitted)")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--caps", default=None, help="JSON object or path to a JSON file of cap overrides")
    p.add_argument("--config", default=None, help="JSON file whose keys set option defaults")
    p.add_argument("-v", "--verbose", action="store_true")


def _family_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--family", default=None, help=f"one of {', '.join(sorted(FAMILIES))}")
    p.add_argument("--graph-file", default=None, help="edge list file instead of a family")
    for k in ("d", "q", "r", "n", "dim", "side"):
        p.add_argument(f"--{k}", default=None, help="integer, list a,b,c or range lo..hi[..step]")
    p.add_argument("--p", default=None, help="edge probability for the random family")
    p.add_argument("--degree-bound", default=None, help="override the degree bound d of every pair")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="graphlim", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    subs = {}
    for name in COMMANDS:
        p = sub.add_parser(name)
        _common(p)
        subs[name] = p
    for name in ("gen", "density", "converge", "spectra", "matching", "chromatic"):
        _family_args(subs[name])
    subs["density"].add_argument("--patterns", default="K2,P3,C4")
    subs["density"].add_argument("--kind", choices=["t", "t_inj"], default="t")
    subs["density"].add_argument("--format", choices=["csv", "json"], default="csv")
    subs["converge"].add_argument("--girth-k", type=int, default=6)
    subs["spectra"].add_argument("--top", type=int, default=0, help="r for the top and bottom r eigenvalue measures")
    subs["spectra"].add_argument("--kmax", type=int, default=8)
    subs["spectra"].add_argument("--eps", type=float, nargs="+", default=[0.25, 0.5])
    subs["spectra"].add_argument("--method", choices=["auto", "inrepo", "lapack"], default="auto")
    subs["matching"].add_argument("--kmax", type=int, default=6)
    subs["chromatic"].add_argument("--xi", default="10")
    subs["chromatic"].add_argument("--stars", default=None, help="star sizes m for the K_{1,m} sequence")
    g = subs["graphoning"]
    g.add_argument("--set", choices=["cube", "proj", "mixed"], default="cube")
    g.add_argument("--gammas", default=None)
    g.add_argument("--deltas", default=None)
    g.add_argument("--depth", type=int, default=DEFAULT_DEPTH)
    g.add_argument("--covering", default=None, help="levels, e.g. 1..12")
    g.add_argument("--acyclicity", default=None, help="values of k, e.g. 2,3")
    g.add_argument("--samples", type=int, default=10_000)
    g.add_argument("--min-blocks", type=int, default=6)
    g.add_argument("--mc-pattern", default=None, help="tree pattern for the rooted density, e.g. P4")
    g.add_argument("--root", type=int, default=0)
    g.add_argument("--x", default="1/2", help="base point as a rational")
    g.add_argument("--alpha", type=float, default=1.0)
    g.add_argument("--growth", default=None, help="d range (cube) or q list (proj)")
    v = subs["verify"]
    v.add_argument("--suite", default="acceptance")
    v.add_argument("--only", default=None, help="criterion numbers, e.g. 1,4..6")
    return parser


def _load_json_arg(text: str) -> dict:
    path = Path(text)
    try:
        raw = path.read_text() if path.exists() else text
        obj = json.loads(raw)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read JSON from {text!r}: {exc}") from exc
    if not isinstance(obj, dict):
        raise ConfigError("expected a JSON object")
    return obj


def parse_args(argv: Sequence[str] | None) -> argparse.Namespace:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.config:
        cfg = _load_json_arg(args.config)
        cmd = cfg.pop("command", args.command)
        if cmd != args.command:
            raise ConfigError(f"config is for {cmd!r}, not {args.command!r}")
        sub = parser._subparsers._group_actions[0].choices[args.command]
        known = {a.dest for a in sub._actions}
        unknown = set(k.replace("-", "_") for k in cfg) - known
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        sub.set_defaults(**{k.replace("-", "_"): v for k, v in cfg.items()})
        args = parser.parse_args(argv)
    return args


def main(argv: Sequence[str] | None = None) -> int:
    try:
        args = parse_args(argv)
    except ConfigError as exc:
        print(f"graphlim: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    old = caps()
    try:
        if args.caps:
            try:
                set_caps(old.updated(**_load_json_arg(args.caps)))
            except (TypeError, ValueError) as exc:
                raise ConfigError(str(exc)) from exc
        if args.workers < 1:
            raise ConfigError("--workers must be >= 1")
        return COMMANDS[args.command](args)
    except (CapExceeded, InfeasibleError) as exc:
        print(f"graphlim: cap exceeded: {exc}", file=sys.stderr)
        return EXIT_CAP
    except InvariantViolation as exc:
        print(f"graphlim: check failed: {exc}", file=sys.stderr)
        return EXIT_ASSERT
    except (ConfigError, ValueError) as exc:
        print(f"graphlim: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    finally:
        set_caps(old)


if __name__ == "__main__":
    sys.exit(main())
