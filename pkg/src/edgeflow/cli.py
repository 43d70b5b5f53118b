"""``edgeflow`` command line: decompose, filter, spectrum, schematic, compare, gen.

Errors are reported on stderr as ``error: <ErrorName>: <message>`` and the
process exits with status 1 (argument errors: status 2).
"""
from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

import numpy as np

from . import experiments as ex
from .filters import FilterSpec, apply_filter, frequency_response, is_lowpass
from .flowgen import FlowRecipe, synthesize
from .graph import Graph
from .hodge import cycle_space_dimension, hodge_decompose
from .io import read_edge_list, read_signal, write_signal
from .spectral import RANK_TOL
from .svg import render_flow_svg

log = logging.getLogger("edgeflow")

_OPERATORS = ("L", "L1", "LLG")


class CLIError(ValueError):
    pass


def _load_graph(args, default: str | None = None) -> tuple[Graph, str]:
    if args.graph:
        return read_edge_list(args.graph), Path(args.graph).name
    if default is None:
        raise CLIError("--graph is required")
    return ex.load_standin(default), f"{default}.tsv"


def _out_dir(args) -> Path:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _write_flow(out: Path, name: str, values, g: Graph, graph_name: str, domain: str = "edge") -> Path:
    path = out / f"{name}.{'flow' if domain == 'edge' else 'signal'}"
    write_signal(path, values, domain=domain, graph=g, graph_name=graph_name)
    log.info("wrote %s", path)
    return path


def _write_svgs(out: Path, g: Graph, panels: dict, seed: int) -> None:
    scale = max(float(np.abs(v).max(initial=0.0)) for v in panels.values())
    for name, values in panels.items():
        path = out / f"{name}.svg"
        path.write_text(render_flow_svg(g, values, title=name, seed=seed, scale=scale), encoding="utf-8")
        log.info("wrote %s", path)


def _filter_spec(args) -> FilterSpec:
    spec = FilterSpec.from_record(Path(args.filter).read_text(encoding="utf-8")) if args.filter else None
    overrides = {n: getattr(args, n) for n in ("alpha", "beta", "mu", "k") if getattr(args, n) is not None}
    if spec is None:
        if not args.kind:
            raise CLIError("give --kind or --filter")
        spec = FilterSpec(args.kind, **overrides)
    else:
        if args.kind:
            overrides["kind"] = args.kind
        spec = spec.with_(**overrides)
    return spec


def _recipe(args, g: Graph, default) -> FlowRecipe:
    recipe = FlowRecipe.from_record(Path(args.recipe).read_text(encoding="utf-8")) if args.recipe else default(g)
    changes = {
        "harmonic_weight": args.harmonic,
        "gradient_weight": args.gradient,
        "linegraph_smooth_weight": args.linegraph,
        "noise_sigma": args.sigma,
        "amplitude": args.amplitude,
        "cutoff": args.cutoff,
        "seed": args.seed,
    }
    from dataclasses import replace

    return replace(recipe, **{k: v for k, v in changes.items() if v is not None})


def cmd_decompose(args) -> int:
    g, gname = _load_graph(args)
    f, _ = read_signal(args.flow, g)
    dec = hodge_decompose(g, f)
    out = _out_dir(args)
    _write_flow(out, "cyclic", dec.cyclic, g, gname)
    _write_flow(out, "gradient", dec.gradient, g, gname)
    ec, eg = dec.energies
    line = f"energy total={float(f @ f)!r} cyclic={ec!r} gradient={eg!r} cycle_dimension={cycle_space_dimension(g)}"
    (out / "energies.txt").write_text(line + "\n", encoding="utf-8")
    print(line)
    if args.svg:
        _write_svgs(out, g, {"input": f, "cyclic": dec.cyclic, "gradient": dec.gradient}, args.seed or 0)
    return 0


def cmd_filter(args) -> int:
    g, gname = _load_graph(args)
    spec = _filter_spec(args)
    if args.phi:
        phi, _ = read_signal(args.phi)
        spec = spec.with_(potential=phi)
    for note in spec.validate():
        log.warning(note)
    x, _ = read_signal(args.flow, g)
    expected = g.num_nodes if spec.domain == "node" else g.num_edges
    if x.size != expected:
        raise CLIError(f"{spec.kind} acts on {spec.domain} signals ({expected} values), input has {x.size}")
    y = apply_filter(g, x, spec)
    out = _out_dir(args)
    _write_flow(out, "filtered", y, g, gname, spec.domain)
    (out / "filter.txt").write_text(spec.to_record(), encoding="utf-8")
    print(f"input_change = {float(np.linalg.norm(x - y))!r}")
    if args.truth:
        truth, _ = read_signal(args.truth, g)
        print(f"truth_error = {float(np.linalg.norm(truth - y))!r}")
    if args.svg and spec.domain == "edge":
        _write_svgs(out, g, {"input": x, "filtered": y}, args.seed or 0)
    return 0


def cmd_spectrum(args) -> int:
    g, _ = _load_graph(args)
    from .filters import _float_op
    from .spectral import eig_sym

    lam = eig_sym(_float_op(g, args.operator)).eigenvalues
    out = _out_dir(args)
    (out / "eigenvalues.txt").write_text("".join(f"{v!r}\n" for v in lam), encoding="utf-8")
    top = float(np.abs(lam).max(initial=0.0))
    zeros = int(np.count_nonzero(np.abs(lam) <= RANK_TOL * top))
    print(f"operator = {args.operator}")
    print(f"eigenvalues = {' '.join(f'{v:.10g}' for v in lam)}")
    print(f"zero_eigenvalues = {zeros}")
    print(f"cycle_dimension = {cycle_space_dimension(g)}")
    if args.kind or args.filter:
        spec = _filter_spec(args)
        resp = frequency_response(g, spec, args.operator)
        lowpass = is_lowpass(resp)
        (out / "response.txt").write_text(
            "".join(f"{l!r} {h!r}\n" for l, h in zip(resp.eigenvalues, resp.values)) + f"# lowpass {str(lowpass).lower()}\n",
            encoding="utf-8",
        )
        print(f"response = {' '.join(f'{v:.10g}' for v in resp.values)}")
        print(f"lowpass = {str(lowpass).lower()}")
    return 0


def _write_report(out: Path, rep: ex.ExperimentReport) -> None:
    (out / "report.txt").write_text(rep.to_text(), encoding="utf-8")
    (out / "report.json").write_text(rep.to_json() + "\n", encoding="utf-8")


def cmd_schematic(args) -> int:
    g, gname = _load_graph(args, "fig1_like")
    recipe = _recipe(args, g, ex.schematic_recipe)
    rep = ex.run_schematic(g, recipe, args.mu, args.k)
    out = _out_dir(args)
    _write_report(out, rep)
    for name, values in rep.signals.items():
        _write_flow(out, name, values, g, gname)
    if args.svg:
        _write_svgs(out, g, rep.signals, recipe.seed)
    sys.stdout.write(rep.to_text())
    return 0


def cmd_compare(args) -> int:
    g, gname = _load_graph(args, "london_like")
    recipe = _recipe(args, g, ex.london_recipe)
    alphas = tuple(args.alphas) if args.alphas else ex.DEFAULT_ALPHAS
    betas = tuple(args.betas) if args.betas else ex.DEFAULT_BETAS
    seeds = tuple(args.grid_seeds or ())
    grids = {
        "linegraph_denoise": ex.GridSpec({"alpha": alphas}, seeds),
        "flow_denoise": ex.GridSpec({"alpha": alphas}, seeds),
        "mixed": ex.GridSpec({"alpha": alphas, "beta": betas}, seeds),
    }
    rep = ex.run_denoising_comparison(g, recipe, grids)
    out = _out_dir(args)
    _write_report(out, rep)
    for name, values in rep.signals.items():
        _write_flow(out, name, values, g, gname)
    if args.svg:
        _write_svgs(out, g, rep.signals, recipe.seed)
    sys.stdout.write(rep.to_text())
    return 0


def cmd_gen(args) -> int:
    g, gname = _load_graph(args)
    recipe = _recipe(args, g, lambda _g: FlowRecipe())
    f0, f = synthesize(g, recipe)
    out = _out_dir(args)
    _write_flow(out, "f0", f0, g, gname)
    _write_flow(out, "f", f, g, gname)
    (out / "recipe.txt").write_text(recipe.to_record(), encoding="utf-8")
    print(f"noise_norm = {float(np.linalg.norm(f - f0))!r}")
    if args.svg:
        _write_svgs(out, g, {"f0": f0, "f": f}, recipe.seed)
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="edgeflow", description="Signal processing for flows on graph edges")
    p.add_argument("-v", "--verbose", action="count", default=0)
    sub = p.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--graph", help="edge-list file (tail<TAB>head per line)")
    common.add_argument("--out", default=".", help="output directory")
    common.add_argument("--seed", type=int, help="random seed (u64)")
    common.add_argument("--svg", action="store_true", help="also write SVG flow maps")

    filt = argparse.ArgumentParser(add_help=False)
    filt.add_argument("--filter", help="filter record file (key = value lines)")
    filt.add_argument("--kind", help="filter kind, e.g. flow_denoise, mixed, linegraph_smooth")
    filt.add_argument("--alpha", type=float)
    filt.add_argument("--beta", type=float)
    filt.add_argument("--mu", type=float)
    filt.add_argument("--k", type=int)

    recipe = argparse.ArgumentParser(add_help=False)
    recipe.add_argument("--recipe", help="flow recipe file (key = value lines)")
    recipe.add_argument("--harmonic", type=float, help="harmonic component weight")
    recipe.add_argument("--gradient", type=float, help="gradient component weight")
    recipe.add_argument("--linegraph", type=float, help="line-graph-smooth component weight")
    recipe.add_argument("--sigma", type=float, help="noise standard deviation per edge")
    recipe.add_argument("--amplitude", type=float, help="norm of the clean flow")
    recipe.add_argument("--cutoff", type=int, help="line-graph modes in the smooth component")

    s = sub.add_parser("decompose", parents=[common], help="split a flow into cyclic and gradient parts")
    s.add_argument("--flow", required=True)
    s.set_defaults(func=cmd_decompose)

    s = sub.add_parser("filter", parents=[common, filt], help="apply a filter to a flow or node signal")
    s.add_argument("--flow", required=True, help="input signal file")
    s.add_argument("--truth", help="clean signal to report the error against")
    s.add_argument("--phi", help="node divergence file for flow_denoise_sources")
    s.set_defaults(func=cmd_filter)

    s = sub.add_parser("spectrum", parents=[common, filt], help="eigenvalues and filter responses")
    s.add_argument("--operator", choices=_OPERATORS, default="L1")
    s.set_defaults(func=cmd_spectrum)

    s = sub.add_parser("schematic", parents=[common, recipe], help="line-graph vs flow smoothing demo")
    s.add_argument("--mu", type=float, default=0.2)
    s.add_argument("--k", type=int, default=10)
    s.set_defaults(func=cmd_schematic)

    s = sub.add_parser("compare", parents=[common, recipe], help="grid-tuned denoising comparison")
    s.add_argument("--alphas", type=float, nargs="+", help="alpha grid (default logspace(-2, 2, 25))")
    s.add_argument("--betas", type=float, nargs="+", help="beta grid (default logspace(-3, 1, 25))")
    s.add_argument("--grid-seeds", type=int, nargs="+", help="tune on the mean error over these seeds")
    s.set_defaults(func=cmd_compare)

    s = sub.add_parser("gen", parents=[common, recipe], help="synthesise a clean and a noisy flow")
    s.set_defaults(func=cmd_gen)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.WARNING - 10 * min(args.verbose, 2), format="%(levelname)s: %(message)s")
    try:
        return args.func(args)
    except (ValueError, ArithmeticError, OSError, KeyError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
