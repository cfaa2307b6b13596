"""Generate stand-in edge lists for the two empirical networks.

The original datasets (a village contact network with 354 nodes / 1541
edges and a Facebook friendship network with 4039 nodes / 88234 edges) are
not redistributable with this repository. These stand-ins match the exact
node and edge counts and keep a heavy-tailed degree mix via a
preferential-attachment backbone, so every pipeline that consumes the real
files runs unchanged; drop the real edge lists in their place to reproduce
the published numbers.
"""

import sys
from pathlib import Path

import numpy as np

from netepi.graph import generate_fixed_size, write_edge_list

DATA_DIR = Path(__file__).resolve().parent.parent / "data"

SPECS = {
    "village_standin.txt": dict(n=354, edge_count=1541, m=4, seed=20240354),
    "facebook_standin.txt": dict(n=4039, edge_count=88234, m=21, seed=20244039),
}


def ensure_standins(data_dir: Path = DATA_DIR) -> dict[str, Path]:
    data_dir.mkdir(parents=True, exist_ok=True)
    out = {}
    for name, spec in SPECS.items():
        path = data_dir / name
        if not path.exists():
            rng = np.random.default_rng(spec["seed"])
            net = generate_fixed_size(spec["n"], spec["edge_count"], spec["m"], rng)
            write_edge_list(
                net,
                path,
                comments=[
                    f"stand-in network: {spec['n']} nodes, {spec['edge_count']} edges",
                    f"generator: preferential backbone m={spec['m']} plus uniform fill, rng_seed={spec['seed']}",
                ],
            )
            print(f"wrote {path} ({spec['n']} nodes / {spec['edge_count']} edges)")
        out[name] = path
    return out


if __name__ == "__main__":
    target = Path(sys.argv[1]) if len(sys.argv) > 1 else DATA_DIR
    ensure_standins(target)
