"""Command-line interface: ``skglab generate|predict|analyze|compare``."""

from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path

from . import __version__, theory
from .analysis import core_decomposition, degree_histogram, isolated_count, oscillation_score
from .edgeio import generation_metadata, read_edges, read_sidecar, sidecar_path, write_edges, write_sidecar
from .errors import InvalidMatrix, InvalidParams, SkgError
from .experiments import compare_degree_distribution
from .generate import ChunkPlan, DEFAULT_CHUNK_SIZE, deduplicate, generate, symmetrize_upper, undirect
from .params import GeneratorMatrix, NoiseMode, NoiseSpec, SkgParams, derive_params
from .presets import get_preset


class CliError(Exception):
    def __init__(self, token, message):
        super().__init__(message)
        self.token = token


# --- shared argument handling -----------------------------------------------


def _add_model_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--preset", help="graph500, cahepph or webnotredame")
    p.add_argument("--matrix", help="t1,t2,t3,t4")
    p.add_argument("--levels", type=int, help="number of levels (n = 2^levels)")
    p.add_argument("--edges", type=int, help="number of edge insertions m")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--noise", type=float, default=0.0, help="noise amplitude b")
    p.add_argument("--noise-mode", choices=[m.value for m in NoiseMode])
    p.add_argument("--chunk-size", type=int, default=DEFAULT_CHUNK_SIZE)
    p.add_argument("--threads", type=int, default=1)


def _model(args) -> tuple[SkgParams, str | None]:
    preset = get_preset(args.preset) if args.preset else None
    if args.matrix:
        try:
            matrix = GeneratorMatrix.from_sequence(args.matrix.split(","))
        except ValueError as exc:
            if isinstance(exc, SkgError):
                raise
            raise InvalidMatrix(f"cannot parse --matrix {args.matrix!r}") from None
    elif preset:
        matrix = preset.matrix
    else:
        raise InvalidParams("either --preset or --matrix is required")
    levels = args.levels if args.levels is not None else (preset.levels if preset else None)
    if levels is None:
        raise InvalidParams("--levels is required without a preset")
    if args.edges is not None:
        edges = args.edges
    elif preset:
        edges = preset.edges(levels)
    else:
        edges = 16 << levels
    mode = args.noise_mode or (NoiseMode.PER_LEVEL.value if args.noise > 0 else NoiseMode.NONE.value)
    params = SkgParams(matrix, levels, edges, args.seed, NoiseSpec(mode, args.noise))
    return params, preset.name if preset else None


def _reports(value: str, allowed) -> list[str]:
    names = [v.strip() for v in value.split(",") if v.strip()]
    bad = [v for v in names if v not in allowed]
    if bad or not names:
        raise InvalidParams(f"unknown report(s) {bad}; choose from {', '.join(allowed)}")
    return names


def _fmt(x) -> str:
    if isinstance(x, float):
        return repr(x) if math.isfinite(x) else str(x)
    return str(x)


def _tsv(header, rows) -> str:
    lines = ["#" + "\t".join(header)]
    lines += ["\t".join(_fmt(v) for v in row) for row in rows]
    return "\n".join(lines) + "\n"


def _emit(reports: dict[str, str], out: str | None) -> None:
    if out is None:
        sys.stdout.write("\n".join(reports.values()))
        return
    if len(reports) == 1:
        Path(out).write_text(next(iter(reports.values())))
        return
    for name, text in reports.items():
        Path(f"{out}.{name}.tsv").write_text(text)


# --- generate ---------------------------------------------------------------


def cmd_generate(args) -> int:
    if args.from_meta:
        meta = read_sidecar(args.from_meta)
        params = SkgParams(
            GeneratorMatrix.from_sequence(meta["matrix"].split(",")),
            int(meta["levels"]),
            int(meta["edges"]),
            int(meta["seed"]),
            NoiseSpec(meta["noise_mode"], float(meta["noise"])),
        )
        preset = meta.get("preset") or None
        chunk = int(meta["chunk_size"])
        simple = meta["graph"] == "simple"
        fmt = meta["format"]
    else:
        params, preset = _model(args)
        chunk = args.chunk_size
        simple = not args.multigraph
        fmt = args.format
    edges = generate(params, ChunkPlan(chunk, args.threads))
    if simple:
        edges = deduplicate(edges)
    out = Path(args.out)
    try:
        write_edges(out, edges, fmt)
        write_sidecar(out, generation_metadata(edges, params.matrix, fmt, preset))
    except OSError as exc:
        raise CliError("UnwritablePath", f"{out}: {exc.strerror}") from None
    return 0


# --- predict ----------------------------------------------------------------


def cmd_predict(args) -> int:
    params, _ = _model(args)
    dp = derive_params(params)
    matrix = params.matrix
    reports = {}
    for name in _reports(args.report, ("degree-dist", "isolated", "repeats", "summary")):
        if name == "summary":
            rows = [
                ("levels", dp.levels),
                ("nodes", dp.n),
                ("edges", dp.insertions),
                ("avg_degree", dp.delta),
                ("sigma", dp.sigma),
                ("tau", dp.tau),
                ("lambda", dp.lam),
            ]
            reports[name] = _tsv(("quantity", "value"), rows)
        elif name == "isolated":
            iso = theory.isolated_expectation(dp, matrix)
            distinct = theory.expected_distinct_edges(matrix, dp.levels, dp.insertions)
            row = (dp.levels, dp.n, dp.insertions, iso, iso / dp.n, distinct / (dp.n - iso))
            reports[name] = _tsv(
                ("levels", "nodes", "edges", "isolated_expectation", "isolated_fraction", "nonisolated_avg_degree"),
                [row],
            )
        elif name == "repeats":
            distinct = theory.expected_distinct_edges(matrix, dp.levels, dp.insertions)
            row = (dp.levels, dp.insertions, distinct, 1.0 - distinct / dp.insertions)
            reports[name] = _tsv(("levels", "edges", "distinct_edge_expectation", "repeat_fraction"), [row])
        else:
            dmin = args.dmin if args.dmin is not None else 1
            dmax = args.dmax if args.dmax is not None else math.isqrt(dp.n)
            curve = theory.degree_curve(dp, range(dmin, dmax + 1), args.method)
            rows = [(d, f.value, int(f.out_of_regime)) for d, f in curve.items()]
            reports[name] = _tsv(("degree", args.method, "out_of_regime"), rows)
    _emit(reports, args.out)
    return 0


# --- analyze ----------------------------------------------------------------


def cmd_analyze(args) -> int:
    path = Path(args.edge_file)
    if not path.exists():
        raise CliError("MissingFile", f"{path} does not exist")
    edges = read_edges(path)
    if args.nodes is not None:
        n = args.nodes
    elif sidecar_path(path).exists():
        n = int(read_sidecar(path)["nodes"])
    else:
        n = edges.n
    levels = max(1, (n - 1).bit_length())
    if args.simple:
        edges = deduplicate(edges)
    reports = {}
    for name in _reports(args.report, ("degree-dist", "isolated", "kcore", "oscillation")):
        if name == "degree-dist":
            h = degree_histogram(edges, n, args.orientation)
            rows = [(d, int(c)) for d, c in h.as_dict().items()]
            reports[name] = _tsv(("degree", "count"), rows)
        elif name == "isolated":
            iso = isolated_count(edges, n)
            reports[name] = _tsv(("nodes", "isolated", "fraction"), [(n, iso, iso / n)])
        elif name == "oscillation":
            h = degree_histogram(edges, n, args.orientation)
            reports[name] = _tsv(("orientation", "levels", "score"), [(args.orientation, levels, oscillation_score(h, levels))])
        else:
            if args.core_kind == "undirected":
                g = undirect(edges) if args.symmetrize == "remove-direction" else symmetrize_upper(edges)
            else:
                g = deduplicate(edges)
            prof = core_decomposition(g, n, args.core_kind)
            rows = [(k, int(prof.sizes[k])) for k in range(prof.max_core + 1)]
            rows.append(("max_core", prof.max_core))
            reports[name] = _tsv(("k", "size"), rows)
    _emit(reports, args.out)
    return 0


# --- compare ----------------------------------------------------------------


def cmd_compare(args) -> int:
    params, _ = _model(args)
    methods = _reports(args.methods, ("exact", "lemma", "theorem"))
    rows, summary = compare_degree_distribution(
        params,
        count=args.instances,
        methods=methods,
        simple=not args.multigraph,
        dmin=args.dmin or 1,
        dmax=args.dmax,
        plan=ChunkPlan(args.chunk_size, args.threads),
    )
    table = _tsv(
        ("degree", "empirical_mean", *methods),
        [(r.d, r.empirical, *(r.predicted[m] for m in methods)) for r in rows],
    )
    stats = _tsv(
        ("method", "compared_degrees", "max_rel_error", "mean_rel_error"),
        [(s.method, s.compared, s.max_rel_error, s.mean_rel_error) for s in summary],
    )
    _emit({"degree": table, "summary": stats}, args.out)
    return 0


# --- entry point ------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="skglab", description=__doc__)
    parser.add_argument("--version", action="version", version=f"skglab {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="generate an SKG edge file")
    _add_model_args(g)
    mode = g.add_mutually_exclusive_group()
    mode.add_argument("--simple", action="store_true", help="remove repeated edges (default)")
    mode.add_argument("--multigraph", action="store_true", help="keep every insertion")
    g.add_argument("--format", choices=("tsv", "bin"), default="tsv")
    g.add_argument("--from-meta", help="regenerate from a sidecar .meta file")
    g.add_argument("--out", required=True)
    g.set_defaults(func=cmd_generate)

    p = sub.add_parser("predict", help="closed-form predictions")
    _add_model_args(p)
    p.add_argument("--report", default="summary", help="comma list of degree-dist,isolated,repeats,summary")
    p.add_argument("--method", choices=("exact", "lemma", "theorem", "poisson"), default="exact")
    p.add_argument("--dmin", type=int)
    p.add_argument("--dmax", type=int)
    p.add_argument("--out")
    p.set_defaults(func=cmd_predict)

    a = sub.add_parser("analyze", help="measure an edge file")
    a.add_argument("edge_file")
    a.add_argument("--nodes", type=int, help="vertex count (default: from the sidecar)")
    a.add_argument("--report", default="degree-dist", help="comma list of degree-dist,isolated,kcore,oscillation")
    a.add_argument("--orientation", choices=("out", "in", "undirected"), default="out")
    a.add_argument("--core-kind", choices=("undirected", "out"), default="undirected")
    a.add_argument("--symmetrize", choices=("remove-direction", "upper"), default="remove-direction")
    a.add_argument("--simple", action="store_true", help="remove repeated edges before measuring")
    a.add_argument("--out")
    a.set_defaults(func=cmd_analyze)

    c = sub.add_parser("compare", help="averaged empirical degree counts vs predictions")
    _add_model_args(c)
    c.add_argument("--instances", type=int, default=25)
    c.add_argument("--methods", default="exact,lemma,theorem")
    c.add_argument("--multigraph", action="store_true", help="compare multigraph degrees")
    c.add_argument("--dmin", type=int)
    c.add_argument("--dmax", type=int)
    c.add_argument("--out")
    c.set_defaults(func=cmd_compare)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except SkgError as exc:
        print(f"error: {exc.token}: {exc}", file=sys.stderr)
    except CliError as exc:
        print(f"error: {exc.token}: {exc}", file=sys.stderr)
    return 1


if __name__ == "__main__":
    sys.exit(main())
