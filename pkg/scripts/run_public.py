"""Run the detector on the public electrical-fault CSV (detection or classification layout).

    python scripts/run_public.py path/to/classData.csv --out-dir runs/public [--window-len 64]
"""

import argparse
import logging

from faultae.experiment import ExperimentConfig, run_pipeline
from faultae.ingest import infer_schema
from faultae.metrics import format_table
from faultae.windowing import WindowConfig


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("csv")
    ap.add_argument("--out-dir", default="runs/public")
    ap.add_argument("--window-len", type=int, default=64)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    logging.basicConfig(level=logging.INFO, format="%(message)s")

    schema = infer_schema(args.csv)
    print(f"schema: currents {schema.current_columns}, labels {schema.label_mode} {schema.label_columns}")
    cfg = ExperimentConfig(source=args.csv, schema=schema, window=WindowConfig(args.window_len)).with_seed(args.seed)
    outcome = run_pipeline(cfg, args.out_dir)
    print(format_table(outcome.counts))
    print(f"{len(outcome.detection.merged_segments)} segment(s); runtime {outcome.seconds:.1f}s")


if __name__ == "__main__":
    main()
