"""Command-line interface: ``rigest <command> [options]``."""

from __future__ import annotations

import argparse
import json
import sys
from collections.abc import Sequence
from pathlib import Path

from . import __version__
from .catalog import MOTIF_NAMES, get_motif
from .covering import balanced_form, density_polynomial, enumerate_mcf, simplify_sparse
from .errors import RigError
from .estimators import estimate_all
from .experiments import load_config, run_experiment
from .graph import generate, induced_subgraph, sample_nodes
from .io import read_edgelist, read_node_list, write_attributes, write_edgelist
from .model import ModelParams, RegimeParams, regime_flags, regime_to_model
from .motifs import count_pairs_and_stars, count_triangles, degree_moments


def _echo(config: dict) -> None:
    print("# " + " ".join(f"{k}={v}" for k, v in config.items()))


def _fmt(value) -> str:
    if value is None:
        return "undefined"
    if isinstance(value, float):
        return f"{value:.6g}"
    return str(value)


def cmd_generate(args: argparse.Namespace) -> int:
    raw = args.m is not None or args.p is not None
    regime = args.lam is not None or args.mu is not None
    if raw == regime or (raw and (args.m is None or args.p is None)) or (
        regime and (args.lam is None or args.mu is None)
    ):
        raise RigError("give exactly one of (--m, --p) or (--lambda, --mu) together with --n")
    flags: list[str] = []
    if regime:
        r = RegimeParams(args.lam, args.mu, args.n)
        params = regime_to_model(r)
        flags = regime_flags(r)
    else:
        params = ModelParams(args.n, args.m, args.p)
    assignment, g = generate(params, args.seed)
    meta = {"n": params.n, "m": params.m, "p": repr(params.p), "seed": args.seed}
    _echo({"command": "generate", **meta, "edges": g.num_edges, "flags": ",".join(flags) or "-"})
    print(f"n={params.n} m={params.m} p={params.p!r} edges={g.num_edges}")
    write_edgelist(g, args.out, meta)
    if args.attrs:
        write_attributes(assignment, args.attrs, meta)
    return 0


def cmd_sample(args: argparse.Namespace) -> int:
    g = read_edgelist(args.input)
    sample = sample_nodes(g.n, args.n0, args.seed)
    sub, nodes = induced_subgraph(g, sample)
    meta = {"source": Path(args.input).name, "n": g.n, "n0": args.n0, "seed": args.seed}
    _echo({"command": "sample", **meta})
    write_edgelist(sub, args.out, meta)
    if args.nodes_out:
        Path(args.nodes_out).write_text(" ".join(str(i + 1) for i in nodes.tolist()) + "\n")
    print(f"n0={sub.n} edges={sub.num_edges}")
    return 0


def cmd_count(args: argparse.Namespace) -> int:
    g = read_edgelist(args.input)
    counts = count_pairs_and_stars(g)
    moments = degree_moments(g)
    n_k3 = None if args.fast_only else count_triangles(g)
    t = None if n_k3 is None or counts.n_s2 == 0 else 3 * n_k3 / counts.n_s2
    out = {
        "n0": g.n,
        "n_k2": counts.n_k2,
        "n_s2": counts.n_s2,
        "n_k3": n_k3,
        "a1": moments.a1,
        "a2": moments.a2,
        "d_max": moments.d_max,
        "transitivity": t,
    }
    if args.json:
        print(json.dumps(out))
    else:
        _echo({"command": "count", "input": args.input, "fast_only": args.fast_only})
        for k, v in out.items():
            print(f"{k:14s} {_fmt(v)}")
    return 0


def cmd_estimate(args: argparse.Namespace) -> int:
    g = read_edgelist(args.input)
    ambient = args.ambient_n if args.ambient_n is not None else g.n
    if args.n0 is not None and args.nodes_file is not None:
        raise RigError("--n0 and --nodes-file are mutually exclusive")
    if args.nodes_file is not None:
        g, _ = induced_subgraph(g, read_node_list(args.nodes_file, g.n))
    elif args.n0 is not None and args.n0 < g.n:
        g, _ = induced_subgraph(g, sample_nodes(g.n, args.n0, args.seed))
    if ambient < g.n:
        raise RigError(f"--ambient-n ({ambient}) is smaller than the observed node count ({g.n})")
    report = estimate_all(g, ambient, fast_only=args.fast_only)
    data = report.to_dict()
    if args.json:
        print(json.dumps(data))
    else:
        _echo({"command": "estimate", "input": args.input, "ambient_n": ambient,
               "n0": g.n, "seed": args.seed, "fast_only": args.fast_only})
        for k, v in data.items():
            if k == "flags":
                v = ",".join(v) or "-"
            print(f"{k:14s} {_fmt(v)}")
    return 0


def cmd_mcf(args: argparse.Namespace) -> int:
    motif = get_motif(args.motif)
    families = enumerate_mcf(motif)
    if args.json:
        print(json.dumps({"motif": motif.name, "families": [f.to_json() for f in families]}))
        return 0
    print(f"# {motif.name}: |V|={motif.n_vertices} |E|={motif.n_edges} families={len(families)}")
    for f in families:
        print(f"{f}  m^{f.size} p^{f.weight}")
    return 0


def _parse_at(text: str) -> tuple[float, float]:
    try:
        m_text, p_text = text.split(",")
        return float(m_text), float(p_text)
    except ValueError:
        raise RigError(f"--at expects m,p, got {text!r}") from None


def cmd_density(args: argparse.Namespace) -> int:
    motif = get_motif(args.motif)
    full = density_polynomial(motif)
    sparse = simplify_sparse(full)
    balanced = balanced_form(sparse)
    out: dict = {"motif": motif.name}
    if args.regime in ("full", "all"):
        out["full"] = str(full)
    if args.regime in ("sparse", "all"):
        out["sparse"] = str(sparse)
    if args.regime in ("balanced", "all"):
        out["balanced"] = str(balanced)
        if args.mu is not None:
            out["balanced_coefficient_at_mu"] = balanced.evaluate(args.mu)
    if args.at is not None:
        m, p = _parse_at(args.at)
        out["at"] = {"m": m, "p": p}
        out["value"] = full.evaluate(m, p)
        if m * p * p >= 0.25:
            out["warning"] = f"m p^2 = {m * p * p:.4g} is not small; asymptotic density unreliable"
    if args.json:
        out["terms"] = {"full": full.to_json(), "sparse": sparse.to_json()}
        print(json.dumps(out))
        return 0
    for k, v in out.items():
        if k == "warning":
            print(f"warning: {v}", file=sys.stderr)
            continue
        print(f"{k:10s} {v}")
    return 0


def cmd_experiment(args: argparse.Namespace) -> int:
    cfg = load_config(args.config)
    _echo({"command": "experiment", **{k: v for k, v in cfg.to_dict().items()}})
    result = run_experiment(cfg, threads=args.threads)
    for path in result.write(args.out, plot_data=args.plot_data):
        print(path)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rigest",
        description="Binomial random intersection graphs: simulation, motif counts, "
        "moment estimators and covering densities.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="sample G(n, m, p) and write an edge list")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int)
    p.add_argument("--p", type=float)
    p.add_argument("--lambda", dest="lam", type=float)
    p.add_argument("--mu", type=float)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True, help="edge-list output path")
    p.add_argument("--attrs", help="optional attribute-list output path")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("sample", help="induced subgraph on a uniform node sample")
    p.add_argument("input")
    p.add_argument("--n0", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.add_argument("--nodes-out", help="write the sampled 1-based node ids here")
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("count", help="edge, 2-star and triangle counts")
    p.add_argument("input")
    p.add_argument("--fast-only", action="store_true", help="skip triangle counting")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_count)

    p = sub.add_parser("estimate", help="estimate lambda and mu from an observed graph")
    p.add_argument("input")
    p.add_argument("--ambient-n", type=int, help="size n of the full graph (default: file n)")
    p.add_argument("--n0", type=int, help="observe a uniform sample of this many nodes")
    p.add_argument("--nodes-file", help="observe the nodes listed in this file (1-based)")
    p.add_argument("--seed", type=int, default=0, help="seed for --n0 sampling")
    p.add_argument("--fast-only", action="store_true", help="skip triangle counting")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_estimate)

    p = sub.add_parser("mcf", help="list minimal covering families of a motif")
    p.add_argument("motif", help=", ".join(MOTIF_NAMES))
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_mcf)

    p = sub.add_parser("density", help="covering-density polynomial of a motif")
    p.add_argument("motif", help=", ".join(MOTIF_NAMES))
    p.add_argument("--regime", choices=("all", "full", "sparse", "balanced"), default="all")
    p.add_argument("--mu", type=float, help="evaluate the balanced coefficient at this mu")
    p.add_argument("--at", help="evaluate the full polynomial at m,p")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_density)

    p = sub.add_parser("experiment", help="run an experiment from a key=value config file")
    p.add_argument("config")
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--plot-data", action="store_true", help="also write plot_data.json")
    p.add_argument("--threads", type=int, default=None,
                   help="worker threads, 0 = all cores (default: $RIGEST_THREADS or 1)")
    p.set_defaults(func=cmd_experiment)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (RigError, OSError) as exc:
        print(f"rigest {args.command}: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
