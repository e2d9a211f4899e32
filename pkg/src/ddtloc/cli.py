"""Command-line interface.

Subcommands: run (fit + localize), eval (CorLoc), roc (noise detection),
viz (overlays), synth (benchmark generation).  Exit codes: 0 success,
1 usage error, 2 data or validation error.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

import numpy as np

from .descriptors import load_set, read_annotations
from .errors import DdtError, DegenerateSpectrumError, ValidationError
from .evaluation import evaluate_corloc, evaluate_roc
from .geometry import BoundingBox
from .localize import (
    bounding_box,
    largest_connected_component,
    localize_map,
    resize_nearest,
)
from .parallel import ordered_map
from .scda import aggregation_map, scda_mask
from .synth import SynthSpec, write_dataset
from .transform import component_projection, fit, indicator_map, noise_score


class _UsageError(Exception):
    """Command-line misuse; reported on stderr with exit code 1."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse defaults to exit code 2
        raise _UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="ddtloc", description="co-localization over descriptor sets")
    sub = parser.add_subparsers(dest="command", metavar="command", required=True)

    run = sub.add_parser("run", help="fit a set and localize every image")
    run.add_argument("--descriptor-dir", required=True, help="directory of .ddtd files")
    run.add_argument("--manifest", required=True, help="image_id<TAB>filename manifest")
    run.add_argument("--method", choices=("ddt", "scda"), default="ddt")
    run.add_argument("--k", type=int, default=1, help="components to fit (ddt only)")
    run.add_argument("--threads", type=int, default=0, help="0 means all CPUs")
    run.add_argument(
        "--allow-degenerate",
        action="store_true",
        help="warn instead of failing on a degenerate spectrum",
    )
    run.add_argument("--output", required=True, help="results JSON path")
    run.set_defaults(func=cmd_run)

    ev = sub.add_parser("eval", help="CorLoc of a results file against annotations")
    ev.add_argument("--results", required=True)
    ev.add_argument("--annotations", required=True)
    ev.add_argument("--output", help="optional report JSON path")
    ev.set_defaults(func=cmd_eval)

    roc = sub.add_parser("roc", help="noise-detection ROC from noise scores")
    roc.add_argument("--results", required=True)
    roc.add_argument("--labels", required=True, help="JSON: image_id -> noisy|clean")
    roc.add_argument("--output", help="optional curve JSON path")
    roc.set_defaults(func=cmd_roc)

    viz = sub.add_parser("viz", help="render box overlays or indicator heatmaps")
    viz.add_argument("--results", required=True)
    viz.add_argument("--mode", choices=("box", "heatmap"), default="box")
    viz.add_argument("--out-dir", required=True)
    viz.add_argument("--images-dir", help="source images named <image_id>.<ext>")
    viz.add_argument("--descriptor-dir", help="needed for heatmaps or canvas sizing")
    viz.add_argument("--manifest")
    viz.add_argument("--component", type=int, default=1)
    viz.add_argument("--alpha", type=float, default=0.45)
    viz.set_defaults(func=cmd_viz)

    synth = sub.add_parser("synth", help="write a synthetic benchmark set")
    synth.add_argument("--out-dir", required=True)
    synth.add_argument("--n-images", type=int, default=20)
    synth.add_argument("--grid-h", type=int, default=30)
    synth.add_argument("--grid-w", type=int, default=30)
    synth.add_argument("--d", type=int, default=64)
    synth.add_argument("--image-scale", type=int, default=8)
    synth.add_argument("--signal", type=float, default=5.0)
    synth.add_argument("--noise", type=float, default=1.0)
    synth.add_argument("--cover-min", type=float, default=0.1)
    synth.add_argument("--cover-max", type=float, default=0.3)
    synth.add_argument("--n-noisy", type=int, default=0)
    synth.add_argument("--seed", type=int, default=0)
    synth.add_argument("--distractor", action="store_true")
    synth.add_argument("--two-part", action="store_true")
    synth.set_defaults(func=cmd_synth)
    return parser


def _write_json(path, payload) -> None:
    Path(path).write_text(json.dumps(payload, indent=2) + "\n", encoding="utf-8")


def _read_results(path) -> dict:
    with open(path, "r", encoding="utf-8") as fh:
        data = json.load(fh)
    if not isinstance(data, dict) or data.get("schema_version") != 1:
        raise ValidationError(f"{path}: expected a results JSON with schema_version 1")
    images = data.get("images")
    if not isinstance(images, list):
        raise ValidationError(f"{path}: results JSON lacks an images list")
    for img in images:
        if not isinstance(img, dict) or "image_id" not in img or "box" not in img:
            raise ValidationError(f"{path}: malformed image entry in results JSON")
    return data


def cmd_run(args) -> int:
    if args.k < 1:
        raise _UsageError("--k must be >= 1")
    if args.threads < 0:
        raise _UsageError("--threads must be >= 0")
    if args.method == "scda" and args.k != 1:
        raise _UsageError("--k applies to the ddt method only")
    t0 = time.perf_counter()
    dset = load_set(args.descriptor_dir, args.manifest)
    t_load = time.perf_counter()
    model_payload = None
    if args.method == "ddt":
        try:
            model = fit(
                dset,
                k=args.k,
                threads=args.threads,
                allow_degenerate=args.allow_degenerate,
            )
        except DegenerateSpectrumError as exc:
            raise DegenerateSpectrumError(
                f"{exc} (rerun with --allow-degenerate to proceed anyway)", gap=exc.gap
            ) from exc
        t_fit = time.perf_counter()
        model_payload = {
            "k": model.k,
            "d": model.d,
            "count": model.stats.count,
            "eigenvalues": [float(v) for v in model.eigenvalues],
            "sign_flips": list(model.sign_flips),
            "iterations": [pair.iterations for pair in model.components],
            "mean": model.stats.mean.tolist(),
            "components": [pair.vector.tolist() for pair in model.components],
        }

        def describe(grid):
            imap = indicator_map(model, grid, component=1)
            box = localize_map(imap.values, grid.img_h, grid.img_w)
            return grid.image_id, box, noise_score(imap), grid.n_cells

    else:
        t_fit = t_load

        def describe(grid):
            mask = scda_mask(aggregation_map(grid))
            score = int(np.count_nonzero(mask))
            component = largest_connected_component(
                resize_nearest(mask, grid.img_h, grid.img_w)
            )
            box = bounding_box(component) if component is not None else None
            return grid.image_id, box, score, grid.n_cells

    rows = ordered_map(describe, list(dset), args.threads)
    t_done = time.perf_counter()
    images = [
        {
            "image_id": image_id,
            "box": box.as_list() if box is not None else None,
            "noise_score": score,
            "noise_score_normalized": score / n_cells,
        }
        for image_id, box, score, n_cells in rows
    ]
    payload = {
        "schema_version": 1,
        "method": args.method,
        "model": model_payload,
        "images": images,
        "timing_ms": {
            "load": (t_load - t0) * 1000.0,
            "fit": (t_fit - t_load) * 1000.0,
            "transform": (t_done - t_fit) * 1000.0,
            "total": (t_done - t0) * 1000.0,
        },
    }
    _write_json(args.output, payload)
    print(f"{args.method}: {len(images)} images -> {args.output}")
    return 0


def cmd_eval(args) -> int:
    results = _read_results(args.results)
    annotations = read_annotations(args.annotations)
    predictions = {
        img["image_id"]: (
            BoundingBox.from_list(img["box"]) if img["box"] is not None else None
        )
        for img in results["images"]
    }
    report = evaluate_corloc(predictions, annotations)
    for ev in report.per_image:
        if ev.correct is None:
            print(f"{ev.image_id}: noisy, excluded")
        else:
            verdict = "correct" if ev.correct else "wrong"
            print(f"{ev.image_id}: iou={ev.best_iou:.4f} {verdict}")
    print(f"CorLoc: {100.0 * report.corloc:.1f}% ({report.n_correct}/{report.n_evaluated})")
    if args.output:
        noise_scores = {img["image_id"]: img.get("noise_score") for img in results["images"]}
        _write_json(
            args.output,
            {
                "schema_version": 1,
                "corloc": report.corloc,
                "n_evaluated": report.n_evaluated,
                "n_correct": report.n_correct,
                "per_image": [
                    {
                        "image_id": ev.image_id,
                        "box": ev.box.as_list() if ev.box is not None else None,
                        "best_iou": ev.best_iou,
                        "correct": ev.correct,
                        "noise_score": noise_scores.get(ev.image_id),
                    }
                    for ev in report.per_image
                ],
            },
        )
    return 0


def cmd_roc(args) -> int:
    results = _read_results(args.results)
    with open(args.labels, "r", encoding="utf-8") as fh:
        labels = json.load(fh)
    if not isinstance(labels, dict):
        raise ValidationError(f"{args.labels}: labels must be a JSON object")
    scores = {}
    for img in results["images"]:
        if "noise_score" not in img:
            raise ValidationError(f"{args.results}: missing noise_score entries")
        scores[img["image_id"]] = img["noise_score"]
    report = evaluate_roc(scores, labels)
    print(f"AUC: {report.auc:.4f} ({report.n_noisy} noisy / {report.n_clean} clean)")
    if args.output:
        _write_json(
            args.output,
            {
                "schema_version": 1,
                "auc": report.auc,
                "n_noisy": report.n_noisy,
                "n_clean": report.n_clean,
                "points": [[fpr, tpr] for fpr, tpr in report.points],
            },
        )
    return 0


def cmd_viz(args) -> int:
    from PIL import Image

    from . import viz  # pillow only needed here

    results = _read_results(args.results)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    have_descriptors = bool(args.descriptor_dir and args.manifest)
    if args.mode == "heatmap" and not have_descriptors:
        raise _UsageError("heatmap mode needs --descriptor-dir and --manifest")
    if args.mode == "box" and not (args.images_dir or have_descriptors):
        raise _UsageError("box mode needs --images-dir, or descriptors for canvas sizing")

    boxes = {
        img["image_id"]: (
            BoundingBox.from_list(img["box"]) if img["box"] is not None else None
        )
        for img in results["images"]
    }

    written = 0
    if args.mode == "box":
        if have_descriptors:
            dset = load_set(args.descriptor_dir, args.manifest)
            sized = {g.image_id: (g.img_h, g.img_w) for g in dset}
        else:
            sized = {}
        for image_id, box in boxes.items():
            if args.images_dir:
                path = viz.find_image_file(args.images_dir, image_id)
            else:
                path = None
            if path is not None:
                base = Image.open(path).convert("RGB")
            elif image_id in sized:
                img_h, img_w = sized[image_id]
                base = viz.blank_canvas(img_h, img_w)
            else:
                print(f"warning: no image or descriptors for {image_id}, skipped", file=sys.stderr)
                continue
            viz.draw_box(base, box).save(out_dir / f"{image_id}_box.png")
            written += 1
    else:
        dset = load_set(args.descriptor_dir, args.manifest)
        method = results.get("method")
        if method == "ddt":
            model = results.get("model")
            if not model:
                raise ValidationError(f"{args.results}: ddt results lack a model block")
            k = int(model["k"])
            if not 1 <= args.component <= k:
                raise _UsageError(f"--component must be in [1, {k}]")
            mean = np.asarray(model["mean"], dtype=np.float64)
            vector = np.asarray(model["components"][args.component - 1], dtype=np.float64)
            flip = int(model["sign_flips"][args.component - 1])
        elif args.component != 1:
            raise _UsageError("--component applies to ddt results only")
        for grid in dset:
            if method == "ddt":
                values = component_projection(grid, mean, vector, flip)
            else:
                amap = aggregation_map(grid)
                values = amap.values - amap.threshold
            if args.images_dir:
                path = viz.find_image_file(args.images_dir, grid.image_id)
            else:
                path = None
            if path is not None:
                base = Image.open(path).convert("RGB")
            else:
                base = viz.blank_canvas(grid.img_h, grid.img_w)
            out = viz.heatmap_overlay(base, values, alpha=args.alpha)
            out = viz.draw_box(out, boxes.get(grid.image_id))
            out.save(out_dir / f"{grid.image_id}_heat{args.component}.png")
            written += 1
    print(f"wrote {written} overlays to {out_dir}")
    return 0


def cmd_synth(args) -> int:
    try:
        spec = SynthSpec(
            n_images=args.n_images,
            grid_h=args.grid_h,
            grid_w=args.grid_w,
            d=args.d,
            image_scale=args.image_scale,
            signal=args.signal,
            noise=args.noise,
            cover_min=args.cover_min,
            cover_max=args.cover_max,
            n_noisy=args.n_noisy,
            seed=args.seed,
            distractor=args.distractor,
            two_part=args.two_part,
        )
    except ValidationError as exc:
        raise _UsageError(str(exc)) from exc
    write_dataset(spec, args.out_dir)
    print(f"wrote {spec.n_images} images ({spec.n_noisy} noisy) to {args.out_dir}")
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except json.JSONDecodeError as exc:
        print(f"error: invalid JSON: {exc}", file=sys.stderr)
        return 2
    except DdtError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
