"""Command-line front end: fit, classify, stability, plot, batch.

Every command is deterministic given its flags and seed. Errors exit with
distinct codes so pipelines can tell I/O trouble from bad data from fit
failures: 2 usage (argparse), 3 I/O, 4 validation, 5 fit failure,
6 archive problems.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .archive import archive_from_results, load_archive, save_archive
from .errors import ArchiveError, FitError, IngestError
from .ingest import DEFAULT_SCHEMA, filter_pitches, parse_pitch_csv
from .labeling import (LabelConfig, classify_dataset, confusion_counts,
                       format_confusion, label_clusters, write_labeled_csv)
from .mixture import EmConfig
from .plotting import cluster_colors, projection_svg, write_plot_csv
from .selection import SelectionConfig, select_k, write_score_csv
from .stability import stability_run, write_stability_csv

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_IO = 3
EXIT_VALIDATION = 4
EXIT_FIT = 5
EXIT_ARCHIVE = 6


def _add_input_options(parser):
    parser.add_argument("--input", required=True, help="delimited pitch file")
    parser.add_argument("--config", help="JSON config file (schema/em/selection/labels sections)")
    parser.add_argument("--delimiter", help="field delimiter (default ,)")
    parser.add_argument("--columns",
                        help="column remapping, e.g. start_speed=velo,side_spin=sspin")
    parser.add_argument("--pitcher", help="restrict a multi-pitcher file to one pitcher_id")


def _add_em_options(parser):
    parser.add_argument("--seed", type=int, default=None, help="random seed (default 0)")
    parser.add_argument("--restarts", type=int, default=None)
    parser.add_argument("--max-iter", type=int, default=None)
    parser.add_argument("--tol", type=float, default=None)
    parser.add_argument("--ridge", type=float, default=None)


def _add_selection_options(parser):
    parser.add_argument("--kmin", type=int, default=1)
    parser.add_argument("--kmax", type=int, default=9)
    parser.add_argument("--criterion", choices=["bic", "bicadj"], default=None)
    parser.add_argument("--penalty-scale", default=None,
                        help="'auto' (= ln n) or a nonnegative number")


def _add_label_options(parser):
    parser.add_argument("--changeup-speed-gap", type=float, default=None)
    parser.add_argument("--sidespin-band", type=float, default=None)
    parser.add_argument("--cutter-speed-gap", type=float, default=None)
    parser.add_argument("--knuckleball-spin-var-ratio", type=float, default=None)
    parser.add_argument("--curveball-backspin-max", type=float, default=None)
    parser.add_argument("--swap-anchor", type=int, default=None,
                        help="force this component index to be the four-seam anchor")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pitchmbc",
        description="Cluster a pitcher's pitches, name the clusters, and measure stability.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_fit = sub.add_parser("fit", help="select k, fit, label, and archive a model")
    _add_input_options(p_fit)
    _add_em_options(p_fit)
    _add_selection_options(p_fit)
    _add_label_options(p_fit)
    p_fit.add_argument("--out", required=True, help="archive output path (JSON)")
    p_fit.add_argument("--scores-out", help="score table CSV (default <out stem>_scores.csv)")
    p_fit.set_defaults(func=cmd_fit)

    p_cls = sub.add_parser("classify", help="label pitches with a saved model")
    _add_input_options(p_cls)
    p_cls.add_argument("--model", required=True, help="archive from 'fit'")
    p_cls.add_argument("--out", required=True, help="labeled CSV output path")
    p_cls.set_defaults(func=cmd_classify)

    p_stab = sub.add_parser("stability", help="subsample agreement at fixed k")
    _add_input_options(p_stab)
    _add_em_options(p_stab)
    p_stab.add_argument("--k", type=int, required=True)
    p_stab.add_argument("--split", type=float, default=0.8)
    p_stab.add_argument("--reps", type=int, default=20)
    p_stab.add_argument("--out", required=True, help="stability CSV output path")
    p_stab.set_defaults(func=cmd_stability)

    p_plot = sub.add_parser("plot", help="emit colored scatter CSV and projection SVG")
    _add_input_options(p_plot)
    p_plot.add_argument("--model", required=True)
    p_plot.add_argument("--out", required=True, help="output directory")
    p_plot.set_defaults(func=cmd_plot)

    p_batch = sub.add_parser("batch", help="fit + stability for every pitcher in a file")
    _add_input_options(p_batch)
    _add_em_options(p_batch)
    _add_selection_options(p_batch)
    _add_label_options(p_batch)
    p_batch.add_argument("--outdir", required=True)
    p_batch.add_argument("--split", type=float, default=0.8)
    p_batch.add_argument("--reps", type=int, default=20,
                         help="stability replications per pitcher (0 skips stability)")
    p_batch.set_defaults(func=cmd_batch)
    return parser


def _load_config_file(args) -> dict:
    if not getattr(args, "config", None):
        return {}
    return json.loads(Path(args.config).read_text(encoding="utf-8"))


def _schema_from(args, cfg: dict):
    section = dict(cfg.get("schema", {}))
    delimiter = section.pop("delimiter", None)
    schema = DEFAULT_SCHEMA.with_overrides(section or None, delimiter)
    mapping = {}
    if getattr(args, "columns", None):
        for pair in args.columns.split(","):
            logical, _, physical = pair.partition("=")
            if not physical:
                raise ValueError(f"bad --columns entry {pair!r} (want logical=physical)")
            mapping[logical.strip()] = physical.strip()
    return schema.with_overrides(mapping or None, getattr(args, "delimiter", None))


def _pick(args, cfg_section: dict, name: str, default):
    value = getattr(args, name, None)
    if value is not None:
        return value
    return cfg_section.get(name, default)


def _em_from(args, cfg: dict) -> EmConfig:
    section = cfg.get("em", {})
    base = EmConfig()
    return EmConfig(
        seed=_pick(args, section, "seed", base.seed),
        restarts=_pick(args, section, "restarts", base.restarts),
        max_iter=_pick(args, section, "max_iter", base.max_iter),
        tol=_pick(args, section, "tol", base.tol),
        ridge=_pick(args, section, "ridge", base.ridge),
    )


def _labels_from(args, cfg: dict) -> LabelConfig:
    section = cfg.get("labels", {})
    base = LabelConfig()
    return LabelConfig(
        changeup_speed_gap=_pick(args, section, "changeup_speed_gap", base.changeup_speed_gap),
        sidespin_band=_pick(args, section, "sidespin_band", base.sidespin_band),
        cutter_speed_gap=_pick(args, section, "cutter_speed_gap", base.cutter_speed_gap),
        knuckleball_spin_var_ratio=_pick(args, section, "knuckleball_spin_var_ratio",
                                         base.knuckleball_spin_var_ratio),
        curveball_backspin_max=_pick(args, section, "curveball_backspin_max",
                                     base.curveball_backspin_max),
    )


def _selection_from(args, cfg: dict, em: EmConfig) -> SelectionConfig:
    section = cfg.get("selection", {})
    criterion = _pick(args, section, "criterion", "bicadj")
    raw_scale = getattr(args, "penalty_scale", None)
    if raw_scale is None:
        raw_scale = section.get("penalty_scale", "auto")
    scale = None if str(raw_scale).lower() == "auto" else float(raw_scale)
    return SelectionConfig(em=em, criterion=criterion, penalty_scale=scale)


def _load_dataset(args, schema, single_pitcher: bool):
    dataset = parse_pitch_csv(args.input, schema)
    if getattr(args, "pitcher", None):
        wanted = args.pitcher
        subsets = dataset.split_by_pitcher()
        if wanted not in subsets:
            raise ValueError(f"pitcher {wanted!r} not in file (found {dataset.pitcher_ids()})")
        dataset = subsets[wanted]
    if single_pitcher:
        dataset.single_pitcher_id()
    return dataset


def _config_snapshot(schema, em, selection=None, labels=None) -> dict:
    snap = {
        "schema": {k: getattr(schema, k) for k in
                   ("pitcher_id", "season", "start_speed", "back_spin", "side_spin",
                    "reference_label", "intentional", "delimiter")},
        "em": {"seed": em.seed, "restarts": em.restarts, "max_iter": em.max_iter,
               "tol": em.tol, "ridge": em.ridge},
    }
    if selection is not None:
        snap["selection"] = {"criterion": selection.criterion,
                             "penalty_scale": selection.penalty_scale}
    if labels is not None:
        snap["labels"] = {
            "changeup_speed_gap": labels.changeup_speed_gap,
            "sidespin_band": labels.sidespin_band,
            "cutter_speed_gap": labels.cutter_speed_gap,
            "knuckleball_spin_var_ratio": labels.knuckleball_spin_var_ratio,
            "curveball_backspin_max": labels.curveball_backspin_max,
        }
    return snap


def cmd_fit(args) -> int:
    cfg = _load_config_file(args)
    schema = _schema_from(args, cfg)
    em = _em_from(args, cfg)
    label_cfg = _labels_from(args, cfg)
    dataset = _load_dataset(args, schema, single_pitcher=True)
    pitcher_id = dataset.single_pitcher_id()
    filtered = filter_pitches(dataset)
    if filtered.removed_intentional:
        print(f"filtered {filtered.removed_intentional} intentional balls", file=sys.stderr)

    sel_cfg = _selection_from(args, cfg, em)
    result = select_k(filtered, args.kmin, args.kmax, sel_cfg)
    labeled = label_clusters(result.best, label_cfg, anchor_override=args.swap_anchor)

    archive = archive_from_results(
        pitcher_id, labeled, result,
        _config_snapshot(schema, em, sel_cfg, label_cfg),
    )
    save_archive(archive, args.out)
    scores_out = args.scores_out or str(Path(args.out).with_suffix("")) + "_scores.csv"
    write_score_csv(result, scores_out)

    print(f"pitcher {pitcher_id}: n={filtered.n}, selected k={result.best.k} "
          f"by {result.criterion} (penalty_scale={result.penalty_scale:g})")
    for idx, (comp, label) in enumerate(zip(result.best.components, labeled.labels)):
        marker = " (anchor)" if idx == labeled.anchor_index else ""
        print(f"  cluster {idx}: {label} weight={comp.weight:.3f} "
              f"mean=({comp.mean[0]:.1f} mph, {comp.mean[1]:.1f}, {comp.mean[2]:.1f}){marker}")
    print(f"archive -> {args.out}\nscores  -> {scores_out}")
    return EXIT_OK


def cmd_classify(args) -> int:
    archive = load_archive(args.model)
    cfg = _load_config_file(args)
    schema = _schema_from(args, cfg)
    dataset = _load_dataset(args, schema, single_pitcher=False)
    filtered = filter_pitches(dataset)
    model = archive.labeled_model()
    idx, types, pmax = classify_dataset(model, filtered)
    refs = [rec.reference_label for rec in filtered.records]
    write_labeled_csv(args.out, idx, types, pmax, refs)
    print(f"classified {filtered.n} pitches -> {args.out}")
    counts = confusion_counts(refs, types)
    if counts:
        print("confusion vs reference labels:")
        print(format_confusion(counts))
    return EXIT_OK


def cmd_stability(args) -> int:
    cfg = _load_config_file(args)
    schema = _schema_from(args, cfg)
    em = _em_from(args, cfg)
    dataset = _load_dataset(args, schema, single_pitcher=True)
    filtered = filter_pitches(dataset)
    report = stability_run(filtered, args.k, split=args.split,
                           replications=args.reps, seed=em.seed, em_config=em)
    write_stability_csv(report, args.out)
    print(f"pitcher {report.pitcher_id}: k={report.k}, "
          f"mean_80={report.mean_80:.4f} (se {report.stderr_80:.4f}), "
          f"mean_20={report.mean_20:.4f} (se {report.stderr_20:.4f}), "
          f"{len(report.failures)} failed replications")
    print(f"report -> {args.out}")
    return EXIT_OK


def cmd_plot(args) -> int:
    archive = load_archive(args.model)
    cfg = _load_config_file(args)
    schema = _schema_from(args, cfg)
    dataset = _load_dataset(args, schema, single_pitcher=False)
    filtered = filter_pitches(dataset)
    model = archive.labeled_model()
    idx, types, _ = classify_dataset(model, filtered)
    per_cluster = cluster_colors(model.labels)
    colors = [per_cluster[i] for i in idx]
    X = filtered.to_matrix()

    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)
    csv_path = outdir / "scatter.csv"
    svg_path = outdir / "projections.svg"
    write_plot_csv(csv_path, X, types, colors)
    legend = []
    for label, color in zip(model.labels, per_cluster):
        if (str(label), color) not in legend:
            legend.append((str(label), color))
    svg_path.write_text(projection_svg(X, colors, legend), encoding="utf-8")
    print(f"scatter -> {csv_path}\nprojections -> {svg_path}")
    return EXIT_OK


def cmd_batch(args) -> int:
    cfg = _load_config_file(args)
    schema = _schema_from(args, cfg)
    em = _em_from(args, cfg)
    label_cfg = _labels_from(args, cfg)
    sel_cfg = _selection_from(args, cfg, em)
    dataset = parse_pitch_csv(args.input, schema)
    outdir = Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)

    summary_rows = []
    per_pitcher = dataset.split_by_pitcher()
    for pitcher_id in sorted(per_pitcher):
        sub = per_pitcher[pitcher_id]
        row = {"pitcher_id": pitcher_id, "n": "", "k": "", "labels": "",
               "mean_80": "", "stderr_80": "", "mean_20": "", "stderr_20": "",
               "status": "ok"}
        try:
            filtered = filter_pitches(sub)
            kmax = min(args.kmax, filtered.n // 4)
            if kmax < args.kmin:
                raise FitError(f"n={filtered.n} too small for kmin={args.kmin}")
            result = select_k(filtered, args.kmin, kmax, sel_cfg)
            labeled = label_clusters(result.best, label_cfg, anchor_override=args.swap_anchor)
            archive = archive_from_results(
                pitcher_id, labeled, result,
                _config_snapshot(schema, em, sel_cfg, label_cfg),
            )
            save_archive(archive, outdir / f"{pitcher_id}.json")
            write_score_csv(result, outdir / f"{pitcher_id}_scores.csv")
            row["n"] = filtered.n
            row["k"] = result.best.k
            row["labels"] = ";".join(str(lb) for lb in labeled.labels)
            if args.reps > 0:
                report = stability_run(filtered, result.best.k, split=args.split,
                                       replications=args.reps, seed=em.seed, em_config=em)
                write_stability_csv(report, outdir / f"{pitcher_id}_stability.csv")
                row.update(mean_80=repr(report.mean_80), stderr_80=repr(report.stderr_80),
                           mean_20=repr(report.mean_20), stderr_20=repr(report.stderr_20))
            print(f"{pitcher_id}: k={row['k']} labels={row['labels']}")
        except (IngestError, FitError, ValueError) as exc:
            row["status"] = f"error: {exc}"
            print(f"{pitcher_id}: skipped ({exc})", file=sys.stderr)
        summary_rows.append(row)

    import csv as _csv
    fields = ["pitcher_id", "n", "k", "labels", "mean_80", "stderr_80",
              "mean_20", "stderr_20", "status"]
    with open(outdir / "summary.csv", "w", encoding="utf-8", newline="") as fh:
        writer = _csv.DictWriter(fh, fieldnames=fields, lineterminator="\n")
        writer.writeheader()
        writer.writerows(summary_rows)
    # raw per-pitcher agreement means, one row each, for the two stability histograms
    with open(outdir / "stability_agreements.csv", "w", encoding="utf-8", newline="") as fh:
        writer = _csv.writer(fh, lineterminator="\n")
        writer.writerow(["pitcher_id", "agreement_80", "agreement_20"])
        for row in summary_rows:
            if row["status"] == "ok" and row["mean_80"] != "":
                writer.writerow([row["pitcher_id"], row["mean_80"], row["mean_20"]])
    print(f"summary -> {outdir / 'summary.csv'}")
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except IngestError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except ArchiveError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ARCHIVE
    except FitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FIT
    except (ValueError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
