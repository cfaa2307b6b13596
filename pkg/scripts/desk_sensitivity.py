"""Desk-scale observation-window sweep: posterior spread vs window length."""

import argparse
from pathlib import Path

import numpy as np

from netepi.cli import load_config, run_sensitivity

ROOT = Path(__file__).resolve().parent.parent


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--config", default=str(ROOT / "experiments" / "ba_simple.toml"))
    parser.add_argument("--out", default=str(ROOT / "out" / "desk_sensitivity"))
    parser.add_argument("--replicates", type=int)
    parser.add_argument("--particles", type=int)
    parser.add_argument("--steps", type=int)
    args = parser.parse_args()

    overrides = {
        k: v
        for k, v in (("replicates", args.replicates), ("particles", args.particles), ("steps", args.steps))
        if v is not None
    }
    cfg = load_config(args.config, overrides)
    report = run_sensitivity(cfg, args.out)
    print(f"config digest {report.config_digest[:12]}..., rng seed {report.rng_seed}")
    for row in report.rows:
        if row["status"] != "ok":
            print(f"  rep {row['replicate']} dT={row['delta_t']}: FAILED {row['error']}")
            continue
        print(
            f"  rep {row['replicate']} dT={row['delta_t']:3d}: posterior mean "
            f"{np.round(row['posterior_mean'], 3).tolist()} std {np.round(row['posterior_std'], 3).tolist()}"
        )
    print("mean posterior std by window span:", report.tables["mean_posterior_std_by_delta_t"])
    print(f"artifacts in {args.out}")


if __name__ == "__main__":
    main()
