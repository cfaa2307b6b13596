"""File formats: JSON-lines traces, posterior CSVs, diagnostics sidecars.

A trace file holds one JSON object per time step:

    {"t": 3, "infected": [0, 4], "exposed": [7], "exposures": {"7": [2]}}

with exposed/exposures omitted for simple contagion. An optional leading
meta object (distinguished by its single "meta" key) carries provenance --
config digest, rng seed -- and, for sliced observations, the set of nodes
first exposed before the file's first step. Files written by other tools
without the meta line load fine.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path
from typing import Iterable

import numpy as np

from .contagion import EpidemicTrace
from .inference import Phi, PosteriorSample


def write_trace(trace: EpidemicTrace, path: str | Path, meta: dict | None = None) -> None:
    header = dict(meta or {})
    header.setdefault("model", trace.meta.get("model", "complex" if trace.is_complex else "simple"))
    header["node_count"] = trace.node_count
    header["t_start"] = trace.t_start
    if trace.meta.get("empty_seed_wave"):
        header["empty_seed_wave"] = True
    if trace.prior_exposed is not None and len(trace.prior_exposed):
        header["prior_exposed"] = trace.prior_exposed.tolist()
    lines = [json.dumps({"meta": header}, sort_keys=True)]
    if trace.is_complex:
        if trace.exposure_deltas is not None:
            per_step = trace.iter_exposure_summaries()
        else:  # histories were not recorded; emit the node sets only
            per_step = ((t, {}) for t in range(trace.t_start, trace.t_end + 1))
        for t, summaries in per_step:
            record = {
                "t": t,
                "infected": trace.infected_at(t).tolist(),
                "exposed": trace.exposed_at(t).tolist(),
            }
            if trace.exposure_deltas is not None:
                record["exposures"] = {str(k): list(v) for k, v in sorted(summaries.items())}
            lines.append(json.dumps(record, sort_keys=True))
    else:
        for t in range(trace.t_start, trace.t_end + 1):
            lines.append(json.dumps({"t": t, "infected": trace.infected_at(t).tolist()}, sort_keys=True))
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def read_trace(path: str | Path) -> EpidemicTrace:
    meta: dict = {}
    steps: list[dict] = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line:
                continue
            obj = json.loads(line)
            if set(obj) == {"meta"}:
                if steps:
                    raise ValueError(f"line {lineno}: meta line after step records")
                meta = obj["meta"]
                continue
            if "t" not in obj or "infected" not in obj:
                raise ValueError(f"line {lineno}: step record needs 't' and 'infected'")
            steps.append(obj)
    if not steps:
        raise ValueError(f"{path}: no step records")
    steps.sort(key=lambda s: s["t"])
    t_start = steps[0]["t"]
    for offset, step in enumerate(steps):
        if step["t"] != t_start + offset:
            raise ValueError(f"non-consecutive step times at t={step['t']}")

    is_complex = "exposed" in steps[0] or meta.get("model") == "complex"
    node_count = meta.get("node_count")
    if node_count is None:
        seen = 0
        for step in steps:
            ids = step["infected"] + step.get("exposed", [])
            if ids:
                seen = max(seen, max(ids) + 1)
        node_count = seen
    infected = tuple(np.array(sorted(s["infected"]), dtype=np.int64) for s in steps)
    if not is_complex:
        return EpidemicTrace(
            node_count=int(node_count),
            t_start=int(t_start),
            infected=infected,
            meta={"model": "simple"},
        )
    exposed = tuple(np.array(sorted(s.get("exposed", [])), dtype=np.int64) for s in steps)
    if any("exposures" in s for s in steps):
        deltas = []
        acc: dict[int, tuple[int, ...]] = {}
        for step in steps:
            delta: dict[int, tuple[int, ...]] = {}
            for key, counts in step.get("exposures", {}).items():
                node = int(key)
                value = tuple(int(c) for c in counts)
                if acc.get(node) != value:
                    delta[node] = value
                    acc[node] = value
            deltas.append(delta)
        deltas = tuple(deltas)
    else:  # node sets only; exposure histories were not recorded
        deltas = None
    prior = meta.get("prior_exposed")
    prior_exposed = np.array(sorted(prior), dtype=np.int64) if prior else None
    trace_meta = {"model": "complex"}
    if meta.get("empty_seed_wave"):
        trace_meta["empty_seed_wave"] = True
    return EpidemicTrace(
        node_count=int(node_count),
        t_start=int(t_start),
        infected=infected,
        exposed=exposed,
        exposure_deltas=deltas,
        prior_exposed=prior_exposed,
        meta=trace_meta,
    )


def posterior_header(dim: int) -> list[str]:
    names = ["theta"] if dim == 1 else ["beta", "gamma"]
    return names + ["seed_node", "distance"]


def write_posterior_csv(sample: PosteriorSample, path: str | Path) -> None:
    dim = len(sample.phis[0].params)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(posterior_header(dim))
        for phi, dist in zip(sample.phis, sample.distances):
            writer.writerow([repr(float(v)) for v in phi.params] + [phi.seed_node, repr(float(dist))])


def read_posterior_csv(path: str | Path) -> tuple[list[Phi], np.ndarray]:
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if header[:1] == ["theta"]:
            dim = 1
        elif header[:2] == ["beta", "gamma"]:
            dim = 2
        else:
            raise ValueError(f"{path}: unrecognized posterior header {header!r}")
        phis = []
        dists = []
        for row in reader:
            params = tuple(float(v) for v in row[:dim])
            phis.append(Phi(params=params, seed_node=int(row[dim])))
            dists.append(float(row[dim + 1]))
    return phis, np.array(dists)


def diagnostics_dict(sample: PosteriorSample, config_digest: str) -> dict:
    cfg = sample.config
    return {
        "config": {
            "population_size": cfg.population_size,
            "max_steps": cfg.max_steps,
            "acceptance_rate_cutoff": cfg.acceptance_rate_cutoff,
            "annealing_velocity": cfg.annealing_velocity,
            "initial_tolerance_quantile": cfg.initial_tolerance_quantile,
            "resample_threshold": cfg.resample_threshold,
            "rng_seed": cfg.rng_seed,
        },
        "config_digest": config_digest,
        "observed_digest": sample.observed_digest,
        "steps_run": sample.steps_run,
        "tolerances": list(sample.tolerances),
        "acceptance_rates": list(sample.acceptance_rates),
        "resample_steps": list(sample.resample_steps),
    }


def write_json(data: dict, path: str | Path) -> None:
    Path(path).write_text(json.dumps(data, sort_keys=True, indent=2) + "\n", encoding="utf-8")


def read_lines(path: str | Path) -> Iterable[str]:
    return Path(path).read_text(encoding="utf-8").splitlines()
