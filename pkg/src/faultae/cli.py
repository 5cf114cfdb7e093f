"""Command-line entry point: ``faultae {simulate,train,detect,eval,report}``.

Settings come from an optional ``--config`` file (``[experiment]`` section,
``key = value`` lines) and are overridden by command-line flags.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import replace
from pathlib import Path

from .autoencoder import load_model, save_model
from .detector import export_detection, read_labels_csv
from .errors import FaultAEError, ShapeError
from .experiment import (
    ExperimentConfig,
    apply_settings,
    evaluate,
    fit_detector,
    read_config_file,
    run_detection,
)
from .ingest import load_csv
from .metrics import format_table, report_dict, write_confusion_csv, write_report_json
from .signal_sim import FaultSpec, generate_dataset, write_csv

log = logging.getLogger("faultae")


def _common(p):
    p.add_argument("--config", help="INI-style config file with an [experiment] section")
    p.add_argument("--seed", type=int)
    p.add_argument("--out-dir")
    p.add_argument("-v", "--verbose", action="store_true")


def _model_opts(p):
    p.add_argument("--window-len", type=int)
    p.add_argument("--theta", type=float, help="fraction of covering windows that must be flagged")


def _schema_opts(p):
    p.add_argument("--schema-currents", help="comma-separated current column names")
    p.add_argument("--schema-voltages", help="comma-separated voltage column names")
    p.add_argument("--schema-label-mode", choices=["binary", "flags", "none"])
    p.add_argument("--schema-labels", help="comma-separated label column name(s)")
    p.add_argument("--schema-no-header", action="store_const", const="false", dest="schema_has_header")
    p.add_argument("--sample-interval", type=float)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="faultae", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="write a synthetic three-phase signal CSV")
    _common(p)
    p.add_argument("--output", help="CSV path (default: OUT_DIR/signal.csv)")
    p.add_argument("--duration", type=float, dest="sim_duration")
    p.add_argument("--noise-std", type=float, dest="sim_noise_std")
    p.add_argument("--fault", action="append", default=None, metavar="TYPE:PHASES:START[:DURATION]",
                   help="fault to inject, e.g. LG:A:2000:2000 (repeatable)")
    p.add_argument("--no-faults", action="store_true", help="write a fault-free signal")

    p = sub.add_parser("train", help="train on the clean part of a CSV and calibrate the threshold")
    _common(p)
    _model_opts(p)
    _schema_opts(p)
    p.add_argument("--input", required=True)
    p.add_argument("--model", help="output model path (default: OUT_DIR/model.faem)")
    p.add_argument("--epochs", type=int)
    p.add_argument("--batch-size", type=int)
    p.add_argument("--learning-rate", type=float)
    p.add_argument("--loss", choices=["MAE", "MSE", "mae", "mse"])
    p.add_argument("--train-stride", type=int)

    for name, help_text in (("detect", "flag fault segments in every phase current"),
                            ("report", "detect, then evaluate against the input's fault column")):
        p = sub.add_parser(name, help=help_text)
        _common(p)
        _model_opts(p)
        _schema_opts(p)
        p.add_argument("--model", required=True)
        p.add_argument("--input", required=True)

    p = sub.add_parser("eval", help="score point labels against a ground-truth mask")
    _common(p)
    _schema_opts(p)
    p.add_argument("--labels", required=True, help="index,label CSV written by detect")
    p.add_argument("--truth", required=True, help="signal CSV carrying the fault mask")
    return parser


OVERRIDE_KEYS = (
    "seed", "out_dir", "window_len", "theta", "epochs", "batch_size", "learning_rate", "loss",
    "train_stride", "sim_duration", "sim_noise_std", "sample_interval", "schema_currents",
    "schema_voltages", "schema_label_mode", "schema_labels", "schema_has_header",
)


def _settings(args) -> dict:
    settings = read_config_file(args.config) if args.config else {}
    settings.update({k: str(v) for k in OVERRIDE_KEYS if (v := getattr(args, k, None)) is not None})
    return settings


def _config(args):
    return apply_settings(ExperimentConfig(), _settings(args))


def _out_dir(cfg) -> Path:
    path = Path(cfg.out_dir)
    path.mkdir(parents=True, exist_ok=True)
    return path


def cmd_simulate(args) -> int:
    cfg = _config(args)
    if args.no_faults:
        specs = []
    elif args.fault:
        specs = [FaultSpec.parse(text) for text in args.fault]
    else:
        specs = None
    signal = generate_dataset(cfg.sim, specs)
    output = Path(args.output) if args.output else _out_dir(cfg) / "signal.csv"
    output.parent.mkdir(parents=True, exist_ok=True)
    write_csv(signal, output)
    log.info("wrote %d samples (%d faulty) to %s", len(signal), int(signal.fault_mask.sum()), output)
    print(output)
    return 0


def cmd_train(args) -> int:
    cfg = _config(args)
    signal = load_csv(args.input, cfg.schema, cfg.sample_interval)
    outcome = fit_detector(signal, cfg)
    path = Path(args.model) if args.model else _out_dir(cfg) / "model.faem"
    path.parent.mkdir(parents=True, exist_ok=True)
    save_model(path, outcome.saved.model, outcome.saved.standardizer, outcome.saved.threshold)
    log.info("trained %d epochs; alpha=%r", len(outcome.history), outcome.saved.threshold.alpha)
    print(path)
    return 0


def _detect(args):
    settings = _settings(args)
    cfg = apply_settings(ExperimentConfig(), settings)
    saved = load_model(args.model)
    if "window_len" not in settings:
        cfg = replace(cfg, window=replace(cfg.window, window_len=saved.model.input_len))
    signal = load_csv(args.input, cfg.schema, cfg.sample_interval)
    result = run_detection(saved, signal, cfg)
    out = _out_dir(cfg)
    export_detection(result, out, cfg.histogram_bins)
    calib_note = out / "threshold.json"
    calib_note.write_text(json.dumps({
        "alpha": saved.threshold.alpha,
        "calibration_size": saved.threshold.calibration_size,
        "loss_kind": saved.threshold.loss_kind,
    }, indent=1) + "\n")
    log.info("%d merged segment(s) written to %s", len(result.merged_segments), out)
    return cfg, signal, result, out


def _evaluate(labels, truth, out):
    counts = evaluate(labels, truth)
    write_report_json(counts, out / "metrics.json")
    write_confusion_csv(counts, out / "confusion.csv")
    print(json.dumps(report_dict(counts), indent=2, sort_keys=True))
    print(format_table(counts))
    return counts


def cmd_detect(args) -> int:
    _, _, result, out = _detect(args)
    print(json.dumps([{"start": a, "end": b} for a, b in result.merged_segments]))
    return 0


def cmd_report(args) -> int:
    _, signal, result, out = _detect(args)
    _evaluate(result.merged_labels, signal.fault_mask, out)
    return 0


def cmd_eval(args) -> int:
    cfg = _config(args)
    labels = read_labels_csv(args.labels)
    truth = load_csv(args.truth, cfg.schema, cfg.sample_interval).fault_mask
    if labels.shape != truth.shape:
        raise ShapeError(f"{len(labels)} labels but {len(truth)} ground-truth points")
    _evaluate(labels, truth, _out_dir(cfg))
    return 0


COMMANDS = {
    "simulate": cmd_simulate,
    "train": cmd_train,
    "detect": cmd_detect,
    "eval": cmd_eval,
    "report": cmd_report,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    try:
        return COMMANDS[args.command](args)
    except (FaultAEError, OSError, KeyError) as exc:
        print(f"faultae {args.command}: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
