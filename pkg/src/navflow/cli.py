"""Command-line front end.

Subcommands: ``redraw``, ``eval``, ``batch`` and ``render``. Thresholds come
from command-line flags, then a JSON config file (``--config`` or the
``RGNF_CONFIG`` environment variable), then built-in defaults.

Exit codes: 0 ok, 2 input error, 3 unredrawable GUI, 4 partial batch failure.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Sequence

from . import __version__
from .flow import GROUND_TRUTH, NavFlow
from .hierarchy import FORMATS, HierarchyError, ViewTree, load_hierarchy, load_screenshot
from .metrics import ReachabilityReport, SimilarityReport, reachability, sequence_similarity
from .pipeline import Analysis, RunConfig, Unredrawable, analyze
from .redraw import patch_report
from .regions import GroupingConfig
from .render import render_overlay
from .serialize import atomic_write, canonical_json, csv_line, write_json
from .vision import VisionConfig

log = logging.getLogger("navflow")

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_UNREDRAWABLE = 3
EXIT_PARTIAL = 4

CONFIG_ENV = "RGNF_CONFIG"

# config-file key -> argparse dest
_CONFIG_KEYS = {
    "proximity_min": "proximity_min",
    "proximity_max": "proximity_max",
    "hausdorff_threshold": "hausdorff_threshold",
    "canny_high": "canny_high",
    "canny_low": "canny_low",
    "sigma": "sigma",
    "strict_proximity": "strict_proximity",
    "filter": "filter",
}

EVAL_COLUMNS = ("gui_id", "S", "N", "M", "P")
AGGREGATE_COLUMNS = (
    "gui_id", "S_ours", "S_baseline", "R_ours", "R_baseline",
    "N_ours", "M_ours", "N_baseline", "M_baseline", "status",
)


class InputError(Exception):
    """Bad or inconsistent input files (exit code 2)."""


def load_config_file(path: str | Path | None) -> dict[str, Any]:
    if path is None:
        path = os.environ.get(CONFIG_ENV) or None
    if path is None:
        return {}
    try:
        data = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read config {path}: {exc}") from None
    unknown = set(data) - set(_CONFIG_KEYS)
    if unknown:
        raise InputError(f"unknown config keys: {sorted(unknown)}")
    return data


def build_run_config(args: argparse.Namespace) -> RunConfig:
    values: dict[str, Any] = {
        "proximity_min": 0, "proximity_max": 15, "hausdorff_threshold": 0.1,
        "canny_high": 0.80, "canny_low": 0.40, "sigma": 1.4,
        "strict_proximity": False, "filter": True,
    }
    values.update(load_config_file(getattr(args, "config", None)))
    for key, dest in _CONFIG_KEYS.items():
        flag = getattr(args, dest, None)
        if flag is not None:
            values[key] = flag
    try:
        vision = VisionConfig(sigma=float(values["sigma"]), high_frac=float(values["canny_high"]),
                              low_frac=float(values["canny_low"]),
                              hausdorff_threshold=float(values["hausdorff_threshold"]))
        grouping = GroupingConfig(min_gap=float(values["proximity_min"]),
                                  max_gap=float(values["proximity_max"]),
                                  vision=vision, strict_proximity=bool(values["strict_proximity"]))
    except ValueError as exc:
        raise InputError(str(exc)) from None
    return RunConfig(grouping=grouping, filter_enabled=bool(values["filter"]),
                     output_dir=Path(getattr(args, "output_dir", None) or "out"))


# -- loading helpers ---------------------------------------------------------


def _read_tree(path: str | Path, fmt: str | None = None) -> ViewTree:
    try:
        return load_hierarchy(path, fmt)
    except OSError as exc:
        raise InputError(f"cannot read hierarchy {path}: {exc}") from None
    except HierarchyError as exc:
        raise InputError(f"{path}: {exc}") from None


def _read_json(path: str | Path, what: str) -> Any:
    try:
        return json.loads(Path(path).read_text())
    except OSError as exc:
        raise InputError(f"cannot read {what} {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"{what} {path} is not valid JSON: {exc}") from None


def _read_flow(path: str | Path, what: str, origin: str | None = None) -> tuple[NavFlow, dict]:
    data = _read_json(path, what)
    try:
        flow = NavFlow.from_dict(data, origin)
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"{what} {path} is malformed: {exc}") from None
    return flow, data if isinstance(data, dict) else {}


def _check_ids(flow: NavFlow, tree: ViewTree, what: str) -> None:
    unresolved = [n for n in flow.order if n not in tree]
    if unresolved:
        raise InputError(f"{what} ids not found in the hierarchy: {', '.join(unresolved)}")


def _read_screenshot(path: str | Path | None):
    if path is None:
        return None, None
    try:
        raw = Path(path).read_bytes()
        return load_screenshot(raw), raw
    except OSError as exc:
        raise InputError(f"cannot read screenshot {path}: {exc}") from None
    except Exception as exc:  # PIL raises a zoo of types for undecodable images
        raise InputError(f"cannot decode screenshot {path}: {exc}") from None


# -- commands ----------------------------------------------------------------


def write_artifacts(result: Analysis, out: Path, screenshot_png: bytes | None) -> None:
    out.mkdir(parents=True, exist_ok=True)
    g = result.grouping
    write_json(out / "baseline.json", result.baseline)
    write_json(out / "filtered.json", result.filtered)
    write_json(out / "filter_report.json", result.filter_report)
    write_json(out / "regions.json", [r.to_dict() for r in g.final])
    write_json(out / "grouping.json", {
        "initial": [r.to_dict() for r in g.initial],
        "proximal": [r.to_dict() for r in g.proximal],
        "similar": [r.to_dict() for r in g.similar],
        "final": [r.to_dict() for r in g.final],
        "shape_source": g.shape_source,
    })
    write_json(out / "redrawn.json", result.redrawn)
    write_json(out / "patch_plan.json", result.patch_plan)
    atomic_write(out / "patch_report.txt", patch_report(result.patch_plan, result.tree))
    write_json(out / "diagnostics.json", result.diagnostics)
    atomic_write(out / "overlay.svg", render_overlay(result.tree, result.redrawn, result.baseline,
                                                     screenshot_png, g.final))


def cmd_redraw(hierarchy: str | Path, screenshot: str | Path | None, cfg: RunConfig,
               fmt: str | None = None) -> Analysis:
    tree = _read_tree(hierarchy, fmt)
    pixels, raw = _read_screenshot(screenshot)
    result = analyze(tree, pixels, cfg)
    write_artifacts(result, Path(cfg.output_dir), raw)
    return result


@dataclass
class EvalResult:
    gui_id: str
    similarity: SimilarityReport
    reach: ReachabilityReport

    def row(self) -> list:
        return [self.gui_id, self.similarity.s, self.reach.n, self.reach.m, self.reach.p]


def append_csv(path: Path, columns: Sequence[str], row: Sequence[Any]) -> None:
    # append is not atomic; eval rows are meant to accumulate
    new = not path.exists()
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("a", encoding="utf-8") as fh:
        if new:
            fh.write(csv_line(columns))
        fh.write(csv_line(row))


def cmd_eval(candidate: str | Path, truth: str | Path, tree_path: str | Path,
             output_dir: str | Path = ".", csv_path: str | Path | None = None,
             gui_id: str | None = None) -> EvalResult:
    tree = _read_tree(tree_path)
    truth_flow, truth_doc = _read_flow(truth, "ground truth", GROUND_TRUTH)
    cand_flow, _ = _read_flow(candidate, "candidate")
    _check_ids(truth_flow, tree, "ground truth")
    _check_ids(cand_flow, tree, "candidate")
    if not truth_flow.order:
        raise InputError(f"ground truth {truth} is empty")
    gid = gui_id or str(truth_doc.get("gui_id") or Path(tree_path).stem)
    sim = sequence_similarity(truth_flow, cand_flow)
    try:
        reach = reachability(tree, cand_flow)
    except ValueError as exc:
        raise InputError(f"{tree_path}: {exc}") from None
    out = Path(output_dir)
    write_json(out / "similarity.json", {"gui_id": gid, **sim.to_dict(), "diagnostics": list(sim.diagnostics)})
    write_json(out / "reachability.json", {"gui_id": gid, **reach.to_dict()})
    result = EvalResult(gid, sim, reach)
    append_csv(Path(csv_path) if csv_path else out / "eval.csv", EVAL_COLUMNS, result.row())
    return result


def _mean(values: list[float]) -> float | None:
    return sum(values) / len(values) if values else None


def _manifest_entries(manifest: Path) -> list[dict]:
    data = _read_json(manifest, "manifest")
    entries = data.get("guis") if isinstance(data, dict) else data
    if not isinstance(entries, list):
        raise InputError(f"manifest {manifest} must be a list or an object with 'guis'")
    if not entries:
        raise InputError("no inputs")
    base = manifest.parent
    out = []
    for i, entry in enumerate(entries):
        if isinstance(entry, str):
            entry = {"hierarchy": entry}
        if not isinstance(entry, dict) or "hierarchy" not in entry:
            raise InputError(f"manifest entry {i} has no 'hierarchy'")
        resolved = {"id": str(entry.get("id") or Path(entry["hierarchy"]).stem)}
        for key in ("hierarchy", "screenshot", "truth"):
            if entry.get(key):
                resolved[key] = base / entry[key]
        out.append(resolved)
    ids = [e["id"] for e in out]
    if len(set(ids)) != len(ids):
        raise InputError("manifest GUI ids are not unique")
    return out


@dataclass
class BatchResult:
    rows: list[dict]
    failed: list[str]

    @property
    def exit_code(self) -> int:
        return EXIT_PARTIAL if self.failed else EXIT_OK


def _score(tree: ViewTree, flow: NavFlow, truth: NavFlow | None) -> tuple[float | None, ReachabilityReport]:
    s = sequence_similarity(truth, flow).s if truth is not None else None
    return s, reachability(tree, flow)


def cmd_batch(manifest: str | Path, cfg: RunConfig) -> BatchResult:
    entries = _manifest_entries(Path(manifest))
    out = Path(cfg.output_dir)
    rows: list[dict] = []
    failed: list[str] = []
    for entry in entries:
        gid = entry["id"]
        gui_out = out / gid
        try:
            tree = _read_tree(entry["hierarchy"])
            pixels, raw = _read_screenshot(entry.get("screenshot"))
            truth = None
            if "truth" in entry:
                truth, _ = _read_flow(entry["truth"], "ground truth", GROUND_TRUTH)
                _check_ids(truth, tree, "ground truth")
            result = analyze(tree, pixels, cfg)
            write_artifacts(result, gui_out, raw)
            s_ours, r_ours = _score(tree, result.redrawn, truth)
            s_base, r_base = _score(tree, result.baseline, truth)
        except (InputError, Unredrawable, ValueError) as exc:
            log.warning("%s failed: %s", gid, exc)
            failed.append(gid)
            rows.append({"gui_id": gid, "status": f"FAILED: {exc}"})
            continue
        row = {
            "gui_id": gid, "S_ours": s_ours, "S_baseline": s_base,
            "R_ours": 100.0 * r_ours.p, "R_baseline": 100.0 * r_base.p,
            "N_ours": r_ours.n, "M_ours": r_ours.m, "N_baseline": r_base.n, "M_baseline": r_base.m,
            "status": "ok",
        }
        write_json(gui_out / "scores.json", row)
        rows.append(row)

    ok = [r for r in rows if r["status"] == "ok"]
    mean_row: dict[str, Any] = {"gui_id": "mean", "status": f"{len(ok)}/{len(rows)} scored"}
    for col in ("S_ours", "S_baseline", "R_ours", "R_baseline"):
        mean_row[col] = _mean([r[col] for r in ok if r.get(col) is not None])
    lines = [csv_line(AGGREGATE_COLUMNS)]
    for r in rows + [mean_row]:
        lines.append(csv_line([r.get(c) for c in AGGREGATE_COLUMNS]))
    atomic_write(out / "aggregate.csv", "".join(lines))
    write_json(out / "aggregate.json", {"columns": list(AGGREGATE_COLUMNS), "rows": rows, "mean": mean_row,
                                        "filter_enabled": cfg.filter_enabled})
    return BatchResult(rows, failed)


def cmd_render(hierarchy: str | Path, flow_path: str | Path, output: str | Path,
               baseline_path: str | Path | None = None, screenshot: str | Path | None = None,
               regions_path: str | Path | None = None) -> Path:
    from .regions import Region

    tree = _read_tree(hierarchy)
    flow, _ = _read_flow(flow_path, "flow")
    _check_ids(flow, tree, "flow")
    baseline = None
    if baseline_path:
        baseline, _ = _read_flow(baseline_path, "baseline flow")
        _check_ids(baseline, tree, "baseline flow")
    regions = []
    if regions_path:
        for item in _read_json(regions_path, "regions"):
            region = Region(tuple(item["members"]), item["kind"], item.get("parent_initial"))
            _check_ids(NavFlow(region.members), tree, "region")
            regions.append(region)
    _, raw = _read_screenshot(screenshot)
    return atomic_write(output, render_overlay(tree, flow, baseline, raw, regions))


# -- argument parsing --------------------------------------------------------


def _add_threshold_flags(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("thresholds")
    g.add_argument("--config", help=f"JSON config file (default: ${CONFIG_ENV})")
    g.add_argument("--proximity-min", type=float, dest="proximity_min")
    g.add_argument("--proximity-max", type=float, dest="proximity_max",
                   help="maximum edge gap in px for proximity grouping (default 15)")
    g.add_argument("--hausdorff-threshold", type=float, dest="hausdorff_threshold",
                   help="normalized Hausdorff cutoff for shape similarity (default 0.1)")
    g.add_argument("--canny-high", type=float, dest="canny_high", help="high hysteresis fraction (default 0.80)")
    g.add_argument("--canny-low", type=float, dest="canny_low", help="low hysteresis fraction (default 0.40)")
    g.add_argument("--sigma", type=float, help="Gaussian blur standard deviation (default 1.4)")
    g.add_argument("--strict-proximity", action="store_const", const=True, dest="strict_proximity",
                   help="measure only the horizontal right-to-left gap")
    g.add_argument("--no-filter", action="store_const", const=False, dest="filter",
                   help="keep invisible and unfocusable views (ablation)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="navflow", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("redraw", help="redraw the navigation flow of one GUI")
    p.add_argument("hierarchy")
    p.add_argument("--screenshot")
    p.add_argument("--format", choices=FORMATS)
    p.add_argument("-o", "--output-dir", default="out")
    _add_threshold_flags(p)

    p = sub.add_parser("eval", help="score a flow against ground truth")
    p.add_argument("--candidate", required=True)
    p.add_argument("--truth", required=True)
    p.add_argument("--tree", required=True)
    p.add_argument("--gui-id")
    p.add_argument("--csv", help="aggregate CSV to append to (default OUTPUT_DIR/eval.csv)")
    p.add_argument("-o", "--output-dir", default=".")

    p = sub.add_parser("batch", help="redraw and score every GUI in a manifest")
    p.add_argument("manifest")
    p.add_argument("-o", "--output-dir", default="out")
    _add_threshold_flags(p)

    p = sub.add_parser("render", help="draw a flow as an SVG overlay")
    p.add_argument("hierarchy")
    p.add_argument("--flow", required=True)
    p.add_argument("--baseline")
    p.add_argument("--regions")
    p.add_argument("--screenshot")
    p.add_argument("-o", "--output", default="overlay.svg")
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        if args.command == "redraw":
            result = cmd_redraw(args.hierarchy, args.screenshot, build_run_config(args), args.format)
            print(" -> ".join(result.redrawn.order))
        elif args.command == "eval":
            res = cmd_eval(args.candidate, args.truth, args.tree, args.output_dir, args.csv, args.gui_id)
            print(canonical_json({"gui_id": res.gui_id, "S": res.similarity.s, **res.reach.to_dict()}), end="")
        elif args.command == "batch":
            batch = cmd_batch(args.manifest, build_run_config(args))
            if batch.failed:
                print(f"{len(batch.failed)} GUI(s) failed: {', '.join(batch.failed)}", file=sys.stderr)
            return batch.exit_code
        elif args.command == "render":
            cmd_render(args.hierarchy, args.flow, args.output, args.baseline, args.screenshot, args.regions)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except Unredrawable as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_UNREDRAWABLE
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
