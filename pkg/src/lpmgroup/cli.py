"""Command-line pipeline: validate, matrix, cluster, diversity, render.

Exit codes: 0 on success, 1 on input errors, and 2 when a degenerate
clustering result (no silhouette-selectable threshold) is escalated by
``--strict``. Distances are quantized to the CSV precision before
clustering, so running from a cached matrix file and running end to end
produce identical outputs.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .analysis import (
    DEFAULT_CURVE_NS,
    DEFAULT_DIVERSITY_NS,
    diversity_report,
    map_ranks,
    reduction_curve,
)
from .clustering import representatives, sweep
from .exports import export_clusters, export_dot, export_matrix, export_reports, load_matrix
from .manifest import ManifestError, load_manifest
from .matrix import DistanceMatrix, MatrixParams, distance_matrix
from .measures import DEFAULT_GED_BUDGET, DEFAULT_LANG_CAP, Measure
from .petri import DEFAULT_BOUND, DEFAULT_ENUM_CAP


class CliError(Exception):
    """Input error; reported on stderr with exit code 1."""


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # keep exit code 2 for degenerate warnings only
        raise CliError(message)


def _parse_thresholds(spec: str) -> tuple[float, ...]:
    try:
        lo, hi, step = (float(part) for part in spec.split(":"))
    except ValueError:
        raise CliError(f"bad threshold spec {spec!r}, expected lo:hi:step") from None
    if not (0.0 <= lo <= hi <= 1.0) or step <= 0.0:
        raise CliError(f"threshold spec {spec!r} out of range")
    values = []
    k = 0
    while True:
        value = round(lo + k * step, 10)
        if value > hi + 1e-9:
            break
        values.append(min(value, 1.0))
        k += 1
    return tuple(values)


def _parse_ns(spec: str) -> tuple[int, ...]:
    try:
        values = tuple(int(part) for part in spec.split(","))
    except ValueError:
        raise CliError(f"bad n list {spec!r}, expected comma-separated integers") from None
    if not values or any(v < 1 for v in values):
        raise CliError("n values must be positive")
    return values


def _add_common(parser: argparse.ArgumentParser, with_measure: bool = True) -> None:
    parser.add_argument("--manifest", required=True, help="model-set manifest JSON")
    parser.add_argument("--skip-invalid", action="store_true", help="drop invalid models instead of aborting")
    parser.add_argument("--strict", action="store_true", help="escalate degenerate-result warnings to exit code 2")
    if with_measure:
        parser.add_argument("--measure", choices=[m.value for m in Measure], help="similarity measure")
        parser.add_argument("--bound", type=int, default=None, help=f"max firing-sequence length for efg/full (default {DEFAULT_BOUND})")
        parser.add_argument("--lang-cap", type=int, default=None, help=f"max traces per side for full (default {DEFAULT_LANG_CAP})")
        parser.add_argument("--enum-cap", type=int, default=None, help=f"max explored prefixes per model (default {DEFAULT_ENUM_CAP})")
        parser.add_argument("--ged-budget", type=int, default=None, help=f"search-node budget per ged pair (default {DEFAULT_GED_BUDGET})")
        parser.add_argument("--workers", type=int, default=1, help="worker processes for pairwise distances")


def build_parser() -> _Parser:
    parser = _Parser(prog="lpmgroup", description="Group local process models by similarity")
    sub = parser.add_subparsers(dest="command", required=True)

    p_validate = sub.add_parser("validate", help="check the manifest and its models")
    _add_common(p_validate, with_measure=False)

    p_matrix = sub.add_parser("matrix", help="compute the pairwise distance matrix")
    _add_common(p_matrix)
    p_matrix.add_argument("--out", required=True, help="output directory")

    p_cluster = sub.add_parser("cluster", help="sweep thresholds, cluster, pick representatives")
    _add_common(p_cluster)
    p_cluster.add_argument("--matrix", default=None, help="reuse a previously exported matrix CSV")
    p_cluster.add_argument("--thresholds", default="0.1:1.0:0.1", help="lo:hi:step sweep (default 0.1:1.0:0.1)")
    p_cluster.add_argument("--repr", dest="repr_strategy", choices=["rank", "dist"], default="dist")
    p_cluster.add_argument("--out", required=True, help="output directory")

    p_div = sub.add_parser("diversity", help="reduction curve and diversity report")
    _add_common(p_div)
    p_div.add_argument("--thresholds", default="0.1:1.0:0.1", help="lo:hi:step sweep (default 0.1:1.0:0.1)")
    p_div.add_argument("--repr", dest="repr_strategy", choices=["rank", "dist"], default="dist")
    p_div.add_argument("--ns", default=",".join(str(n) for n in DEFAULT_DIVERSITY_NS), help="top-n sizes for the diversity comparison")
    p_div.add_argument("--curve-ns", default=",".join(str(n) for n in DEFAULT_CURVE_NS), help="top-n sizes for the reduction curve")
    p_div.add_argument("--out", required=True, help="output directory")

    p_render = sub.add_parser("render", help="export models as DOT graphs")
    _add_common(p_render, with_measure=False)
    p_render.add_argument("--model", default=None, help="render a single model id")
    p_render.add_argument("--out", required=True, help="output directory")
    return parser


def _resolve_measure(args, manifest) -> Measure:
    name = args.measure or manifest.measure
    if name is None:
        raise CliError("no measure given (pass --measure or set one in the manifest)")
    try:
        return Measure(name)
    except ValueError:
        raise CliError(f"unknown measure {name!r}") from None


def _resolve_params(args, manifest, measure: Measure) -> MatrixParams:
    notices = []
    if args.bound is not None and measure not in (Measure.EFG, Measure.FULL):
        notices.append(f"--bound has no effect for measure {measure.value}; ignored")
    if args.lang_cap is not None and measure is not Measure.FULL:
        notices.append(f"--lang-cap has no effect for measure {measure.value}; ignored")
    if args.enum_cap is not None and measure not in (Measure.EFG, Measure.FULL):
        notices.append(f"--enum-cap has no effect for measure {measure.value}; ignored")
    if args.ged_budget is not None and measure is not Measure.GED:
        notices.append(f"--ged-budget has no effect for measure {measure.value}; ignored")
    for notice in notices:
        print(f"notice: {notice}", file=sys.stderr)
    return MatrixParams(
        bound=args.bound if args.bound is not None else (manifest.bound or DEFAULT_BOUND),
        lang_cap=args.lang_cap if args.lang_cap is not None else DEFAULT_LANG_CAP,
        enum_cap=args.enum_cap if args.enum_cap is not None else DEFAULT_ENUM_CAP,
        ged_budget=args.ged_budget if args.ged_budget is not None else DEFAULT_GED_BUDGET,
        workers=max(1, args.workers),
    )


def _load(args):
    try:
        loaded = load_manifest(args.manifest, skip_invalid=args.skip_invalid)
    except ManifestError as exc:
        raise CliError(str(exc)) from None
    for model_id, violations in loaded.skipped:
        print(f"notice: skipped invalid model {model_id!r}: {'; '.join(violations)}", file=sys.stderr)
    return loaded


def _cmd_validate(args) -> int:
    try:
        loaded = load_manifest(args.manifest, skip_invalid=True)
    except ManifestError as exc:
        raise CliError(str(exc)) from None
    for model in loaded.ranked.models:
        print(f"ok {model.id}")
    for model_id, violations in loaded.skipped:
        print(f"invalid {model_id}: {'; '.join(violations)}")
    print(f"{len(loaded.ranked.models)} valid, {len(loaded.skipped)} invalid")
    return 0 if not loaded.skipped else 1


def _compute_matrix(args, loaded, measure: Measure) -> DistanceMatrix:
    params = _resolve_params(args, loaded.manifest, measure)
    if len(loaded.ranked) < 2:
        raise CliError("need at least two valid models")
    return distance_matrix(loaded.ranked.models, measure, params)


def _cmd_matrix(args) -> int:
    loaded = _load(args)
    measure = _resolve_measure(args, loaded.manifest)
    matrix = _compute_matrix(args, loaded, measure).rounded()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    export_matrix(matrix, out / f"matrix_{measure.value}.csv")
    print(f"wrote {out / f'matrix_{measure.value}.csv'} ({len(matrix)} models)")
    return 0


def _cluster_outputs(args, loaded, measure, matrix, out: Path) -> int:
    import json

    result = sweep(matrix, _parse_thresholds(args.thresholds))
    selected = result.selected
    reps = representatives(selected.clusters, args.repr_strategy, loaded.ranked, matrix)
    export_clusters(selected.clusters, reps, loaded.ranked, out / "clusters.csv")
    payload = {
        "measure": measure.value,
        "representative_strategy": args.repr_strategy,
        "selected_threshold": selected.threshold,
        "selected_silhouette": selected.silhouette,
        "cluster_count": len(selected.clusters),
        "all_degenerate": result.all_degenerate,
        "representatives": sorted(reps),
        "representative_ranks": map_ranks(reps, loaded.ranked),
        "thresholds": [
            {
                "threshold": o.threshold,
                "cluster_count": len(o.clusters),
                "silhouette": o.silhouette,
            }
            for o in result.outcomes
        ],
    }
    (out / "sweep.json").write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    print(f"{len(selected.clusters)} clusters at threshold {selected.threshold}")
    if result.all_degenerate:
        print(
            "warning: every threshold produced a degenerate clustering; "
            f"kept the largest threshold {selected.threshold}",
            file=sys.stderr,
        )
        return 2 if args.strict else 0
    return 0


def _cmd_cluster(args) -> int:
    loaded = _load(args)
    measure = _resolve_measure(args, loaded.manifest)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    if args.matrix:
        matrix = load_matrix(args.matrix, measure=measure.value)
        if set(matrix.ids) != {m.id for m in loaded.ranked.models}:
            raise CliError("cached matrix ids do not match the manifest")
    else:
        matrix = _compute_matrix(args, loaded, measure).rounded()
        export_matrix(matrix, out / f"matrix_{measure.value}.csv")
    return _cluster_outputs(args, loaded, measure, matrix, out)


def _cmd_diversity(args) -> int:
    loaded = _load(args)
    measure = _resolve_measure(args, loaded.manifest)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    matrix = _compute_matrix(args, loaded, measure).rounded()
    thresholds = _parse_thresholds(args.thresholds)
    result = sweep(matrix, thresholds)
    selected = result.selected
    reps = representatives(selected.clusters, args.repr_strategy, loaded.ranked, matrix)
    repr_ranked = loaded.ranked.subset(reps)
    curve = reduction_curve(
        loaded.ranked, measure, thresholds, _parse_ns(args.curve_ns), matrix=matrix
    )
    diversity = diversity_report(
        loaded.ranked, repr_ranked, measure, _parse_ns(args.ns), matrix=matrix
    )
    export_reports(curve, diversity, out)
    export_clusters(selected.clusters, reps, loaded.ranked, out / "clusters.csv")
    print(
        f"{len(loaded.ranked)} models -> {len(reps)} representatives "
        f"(original ranks {map_ranks(reps, loaded.ranked)})"
    )
    degenerate = result.all_degenerate or any(p.degenerate for p in curve.points)
    if degenerate:
        print("warning: degenerate clustering outcomes were recorded", file=sys.stderr)
        return 2 if args.strict else 0
    return 0


def _cmd_render(args) -> int:
    loaded = _load(args)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    models = loaded.ranked.models
    if args.model is not None:
        models = tuple(m for m in models if m.id == args.model)
        if not models:
            raise CliError(f"unknown model id {args.model!r}")
    for model in models:
        export_dot(model, out / f"{model.id}.dot")
    print(f"wrote {len(models)} DOT files to {out}")
    return 0


_COMMANDS = {
    "validate": _cmd_validate,
    "matrix": _cmd_matrix,
    "cluster": _cmd_cluster,
    "diversity": _cmd_diversity,
    "render": _cmd_render,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return _COMMANDS[args.command](args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
