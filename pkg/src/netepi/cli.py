"""Command-line orchestration: data generation, inference, and studies.

Subcommands: gen-net, simulate, observe, infer, estimate, replicate,
sensitivity. Every run derives all randomness from one master seed through
named substreams (network / data / inference, keyed by replicate index), so
reruns with the same config produce byte-identical artifacts. Exit codes:
0 success, 2 invalid configuration, 3 runtime failure.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import logging
import sys
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

try:
    import tomllib
except ModuleNotFoundError:  # python < 3.11
    import tomli as tomllib

from .contagion import ComplexParams, EpidemicTrace, SigmoidConfig, SimpleParams, simulate_complex, simulate_simple
from .estimation import bayes_estimate, distance_marginal, expected_loss
from .graph import Network, all_pairs_shortest_paths, generate_ba, generate_er, load_edge_list, write_edge_list
from .inference import AbcProblem, PriorSpec, SabcConfig, sabc_run
from .summaries import ObservationWindow, summarize
from .traceio import (
    diagnostics_dict,
    read_posterior_csv,
    read_trace,
    write_json,
    write_posterior_csv,
    write_trace,
)

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_RUNTIME = 3

# substream tags off the master seed
STREAM_NETWORK = 0
STREAM_DATA = 1
STREAM_INFER = 2


class ConfigError(ValueError):
    """Invalid experiment configuration or CLI arguments."""


def _substream(master: int, *key: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(entropy=master, spawn_key=tuple(key)))


def _stream_seed(master: int, *key: int) -> int:
    ss = np.random.SeedSequence(entropy=master, spawn_key=tuple(key))
    return int(ss.generate_state(1, np.uint64)[0])


def config_digest(payload: dict) -> str:
    return hashlib.sha256(json.dumps(payload, sort_keys=True).encode()).hexdigest()


@dataclass(frozen=True)
class NetworkSpec:
    kind: str  # "ba" | "er" | "file"
    n: int | None = None
    m: int | None = None
    p: float | None = None
    path: str | None = None

    def __post_init__(self):
        if self.kind == "ba":
            if self.n is None or self.m is None:
                raise ConfigError("ba network needs n and m")
        elif self.kind == "er":
            if self.n is None or self.p is None:
                raise ConfigError("er network needs n and p")
        elif self.kind == "file":
            if not self.path:
                raise ConfigError("file network needs a path")
        else:
            raise ConfigError(f"unknown network model {self.kind!r}")

    def build(self, rng: np.random.Generator) -> Network:
        if self.kind == "ba":
            return generate_ba(self.n, self.m, rng)
        if self.kind == "er":
            return generate_er(self.n, self.p, rng)
        return load_edge_list(self.path)

    def to_dict(self) -> dict:
        return {k: v for k, v in (("kind", self.kind), ("n", self.n), ("m", self.m), ("p", self.p), ("path", self.path)) if v is not None}


@dataclass(frozen=True)
class ExperimentConfig:
    """Declarative description of one study: data model, window, sampler."""

    network: NetworkSpec
    model: str  # "simple" | "complex"
    t0: int
    t_max: int
    sabc: SabcConfig
    theta: float | None = None
    beta: float | None = None
    gamma: float | None = None
    seed_node: int | None = None  # None: drawn uniformly per replicate
    replicates: int = 1
    delta_ts: tuple[int, ...] = ()
    rng_seed: int = 0
    sigmoid: SigmoidConfig = field(default_factory=SigmoidConfig)
    network_term: str = "mean"

    def __post_init__(self):
        if self.model not in ("simple", "complex"):
            raise ConfigError(f"unknown model {self.model!r}")
        if self.network_term not in ("mean", "sum"):
            raise ConfigError(f"unknown network term {self.network_term!r}")
        if self.model == "simple" and self.theta is None:
            raise ConfigError("simple model needs theta")
        if self.model == "complex" and (self.beta is None or self.gamma is None):
            raise ConfigError("complex model needs beta and gamma")
        if self.replicates < 1:
            raise ConfigError("replicates must be >= 1")
        if not (0 <= self.t0 < self.t_max):
            raise ConfigError("need 0 <= t0 < t_max")
        for dt in self.delta_ts:
            if dt < 1 or self.t0 + dt > self.t_max:
                raise ConfigError(f"delta_t {dt} outside the available window")

    @property
    def window(self) -> ObservationWindow:
        return ObservationWindow(self.t0, self.t_max)

    def true_params(self) -> tuple[float, ...]:
        return (self.theta,) if self.model == "simple" else (self.beta, self.gamma)

    def to_dict(self) -> dict:
        out = {
            "network": self.network.to_dict(),
            "model": self.model,
            "t0": self.t0,
            "t_max": self.t_max,
            "theta": self.theta,
            "beta": self.beta,
            "gamma": self.gamma,
            "seed_node": self.seed_node,
            "replicates": self.replicates,
            "delta_ts": list(self.delta_ts),
            "rng_seed": self.rng_seed,
            "sabc": {
                "population_size": self.sabc.population_size,
                "max_steps": self.sabc.max_steps,
                "acceptance_rate_cutoff": self.sabc.acceptance_rate_cutoff,
                "annealing_velocity": self.sabc.annealing_velocity,
                "initial_tolerance_quantile": self.sabc.initial_tolerance_quantile,
                "resample_threshold": self.sabc.resample_threshold,
            },
            "sigmoid": {
                "eps_low": self.sigmoid.eps_low,
                "eps_high": self.sigmoid.eps_high,
                "gain": self.sigmoid.gain,
            },
            "network_term": self.network_term,
        }
        return out

    def digest(self) -> str:
        return config_digest(self.to_dict())


def load_config(path: str | Path, overrides: dict | None = None) -> ExperimentConfig:
    """Read a TOML experiment file; overrides win over file values."""
    try:
        with open(path, "rb") as fh:
            raw = tomllib.load(fh)
    except (OSError, tomllib.TOMLDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    overrides = overrides or {}

    net_sec = raw.get("network", {})
    network = NetworkSpec(
        kind=net_sec.get("model", "ba"),
        n=net_sec.get("n"),
        m=net_sec.get("m"),
        p=net_sec.get("p"),
        path=net_sec.get("path"),
    )
    model_sec = raw.get("model", {})
    seed_node = model_sec.get("seed_node")
    if seed_node == "random":
        seed_node = None
    window_sec = raw.get("window", {})
    sabc_sec = raw.get("sabc", {})
    study_sec = raw.get("study", {})
    sigmoid_sec = raw.get("sigmoid", {})
    discrepancy_sec = raw.get("discrepancy", {})

    rng_seed = int(overrides.get("rng_seed", raw.get("rng_seed", 0)))
    sabc = SabcConfig(
        population_size=int(overrides.get("particles", sabc_sec.get("particles", 1000))),
        max_steps=int(overrides.get("steps", sabc_sec.get("steps", 200))),
        acceptance_rate_cutoff=float(sabc_sec.get("cutoff", 1e-4)),
        annealing_velocity=float(sabc_sec.get("annealing_velocity", 0.3)),
        initial_tolerance_quantile=float(sabc_sec.get("initial_tolerance_quantile", 0.5)),
        resample_threshold=sabc_sec.get("resample_threshold"),
        rng_seed=rng_seed,
    )
    try:
        return ExperimentConfig(
            network=network,
            model=model_sec.get("kind", "simple"),
            theta=model_sec.get("theta"),
            beta=model_sec.get("beta"),
            gamma=model_sec.get("gamma"),
            seed_node=seed_node,
            t0=int(window_sec.get("t0", 0)),
            t_max=int(window_sec.get("t_max", 1)),
            sabc=sabc,
            replicates=int(overrides.get("replicates", study_sec.get("replicates", 1))),
            delta_ts=tuple(int(d) for d in study_sec.get("delta_ts", [])),
            rng_seed=rng_seed,
            sigmoid=SigmoidConfig(
                eps_low=float(sigmoid_sec.get("eps_low", 0.001)),
                eps_high=float(sigmoid_sec.get("eps_high", 0.25)),
                gain=float(sigmoid_sec.get("gain", 1.0)),
            ),
            network_term=discrepancy_sec.get("network_term", "mean"),
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def observe(trace: EpidemicTrace, window: ObservationWindow) -> EpidemicTrace:
    """Slice a trace to the observation window, keeping pre-window exposure state."""
    if window.t0 < trace.t_start or window.t_end > trace.t_end:
        raise ValueError(
            f"window [{window.t0}, {window.t_end}] exceeds trace range "
            f"[{trace.t_start}, {trace.t_end}]"
        )
    return trace.sliced(window.t0, window.t_end)


def _simulate_dataset(cfg: ExperimentConfig, net: Network, seed_node: int,
                      rng: np.random.Generator, record_exposures: bool = False) -> EpidemicTrace:
    if cfg.model == "simple":
        return simulate_simple(net, SimpleParams(theta=cfg.theta, seed_node=seed_node), cfg.t_max, rng)
    return simulate_complex(
        net,
        ComplexParams(beta=cfg.beta, gamma=cfg.gamma, seed_node=seed_node),
        cfg.sigmoid,
        cfg.t_max,
        rng,
        record_exposures=record_exposures,
    )


@dataclass(frozen=True)
class StudyReport:
    kind: str
    config_digest: str
    rng_seed: int
    rows: tuple[dict, ...]
    tables: dict

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "config_digest": self.config_digest,
            "rng_seed": self.rng_seed,
            "rows": list(self.rows),
            "tables": self.tables,
        }


def _histogram(values, bins, lo, hi) -> dict:
    counts, edges = np.histogram(np.asarray(values, dtype=float), bins=bins, range=(lo, hi))
    return {"edges": [float(e) for e in edges], "counts": [int(c) for c in counts]}


def run_replicate_study(cfg: ExperimentConfig, out_dir: str | Path) -> StudyReport:
    """Generate observed datasets, infer, and estimate, once per replicate.

    Each replicate draws a fresh dataset (and a fresh uniform seed node when
    none is pinned), runs the sampler, and records the Bayes estimate with
    its hop distance to the truth. Failures are recorded per replicate and
    the study continues.
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    digest = cfg.digest()
    net = cfg.network.build(_substream(cfg.rng_seed, STREAM_NETWORK))
    paths = all_pairs_shortest_paths(net)

    rows = []
    estimates = []
    seed_distances = []
    for rep in range(cfg.replicates):
        try:
            data_rng = _substream(cfg.rng_seed, STREAM_DATA, rep)
            true_seed = cfg.seed_node if cfg.seed_node is not None else int(data_rng.integers(net.node_count))
            full = _simulate_dataset(cfg, net, true_seed, data_rng, record_exposures=cfg.model == "complex")
            observed_trace = observe(full, cfg.window)
            observed = summarize(observed_trace, cfg.window, net)

            trace_path = out_dir / f"replicate_{rep:03d}_observed.jsonl"
            write_trace(observed_trace, trace_path, meta={"config_digest": digest, "rng_seed": cfg.rng_seed, "replicate": rep})

            problem = AbcProblem(
                kind=cfg.model, net=net, paths=paths, window=cfg.window,
                observed=observed, sigmoid=cfg.sigmoid, network_term=cfg.network_term,
            )
            spec = PriorSpec.from_observed(observed)
            sabc_cfg = replace(cfg.sabc, rng_seed=_stream_seed(cfg.rng_seed, STREAM_INFER, rep))
            sample = sabc_run(problem, spec, sabc_cfg)

            csv_path = out_dir / f"replicate_{rep:03d}_posterior.csv"
            write_posterior_csv(sample, csv_path)
            write_json(
                diagnostics_dict(sample, digest),
                out_dir / f"replicate_{rep:03d}_diagnostics.json",
            )

            estimate = bayes_estimate(sample, net, paths)
            marginal = distance_marginal(sample, true_seed, paths)
            hop = paths.distance(estimate.seed_node, true_seed)
            params = sample.params_array
            row = {
                "replicate": rep,
                "status": "ok",
                "true_seed": true_seed,
                "true_params": list(cfg.true_params()),
                "estimate_params": list(estimate.params),
                "estimate_seed": estimate.seed_node,
                "expected_loss": expected_loss(estimate, sample, paths),
                "seed_hop_distance": hop,
                "posterior_mean": [float(v) for v in params.mean(axis=0)],
                "posterior_std": [float(v) for v in params.std(axis=0, ddof=1)],
                "seed_mass_by_distance": [float(v) for v in marginal.masses],
                "posterior_csv": csv_path.name,
                "observed_trace": trace_path.name,
            }
            estimates.append(estimate)
            seed_distances.append(hop)
        except Exception as exc:  # recorded, study continues
            logger.exception("replicate %d failed", rep)
            row = {"replicate": rep, "status": "failed", "error": f"{type(exc).__name__}: {exc}"}
        rows.append(row)

    tables: dict = {"failures": sum(1 for r in rows if r["status"] != "ok")}
    if estimates:
        dim = len(estimates[0].params)
        names = ["theta"] if dim == 1 else ["beta", "gamma"]
        tables["estimate_histograms"] = {
            name: _histogram([e.params[i] for e in estimates], 25, 0.0, 1.0)
            for i, name in enumerate(names)
        }
        max_d = max(seed_distances) if seed_distances else 0
        counts = np.bincount(seed_distances, minlength=max_d + 1)
        tables["seed_distance_histogram"] = {
            "distances": list(range(len(counts))),
            "counts": [int(c) for c in counts],
        }
    report = StudyReport(kind="replicate", config_digest=digest, rng_seed=cfg.rng_seed, rows=tuple(rows), tables=tables)
    write_json(report.to_dict(), out_dir / "report.json")
    return report


def run_sensitivity(cfg: ExperimentConfig, out_dir: str | Path) -> StudyReport:
    """Re-infer on truncated views of each replicate's observed dataset.

    For every requested window span the same dataset is cut to its first
    span+1 observed steps and inference runs on the shorter record.
    """
    if not cfg.delta_ts:
        raise ConfigError("sensitivity study needs a delta_ts list")
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    digest = cfg.digest()
    net = cfg.network.build(_substream(cfg.rng_seed, STREAM_NETWORK))
    paths = all_pairs_shortest_paths(net)

    rows = []
    for rep in range(cfg.replicates):
        data_rng = _substream(cfg.rng_seed, STREAM_DATA, rep)
        true_seed = cfg.seed_node if cfg.seed_node is not None else int(data_rng.integers(net.node_count))
        full = _simulate_dataset(cfg, net, true_seed, data_rng, record_exposures=cfg.model == "complex")
        observed_full = observe(full, cfg.window)
        write_trace(
            observed_full,
            out_dir / f"sensitivity_{rep:03d}_observed.jsonl",
            meta={"config_digest": digest, "rng_seed": cfg.rng_seed, "replicate": rep},
        )
        for dt_index, dt in enumerate(cfg.delta_ts):
            window = ObservationWindow(cfg.t0, cfg.t0 + dt)
            try:
                observed_trace = observe(observed_full, window)
                observed = summarize(observed_trace, window, net)
                problem = AbcProblem(
                    kind=cfg.model, net=net, paths=paths, window=window,
                    observed=observed, sigmoid=cfg.sigmoid, network_term=cfg.network_term,
                )
                spec = PriorSpec.from_observed(observed)
                sabc_cfg = replace(cfg.sabc, rng_seed=_stream_seed(cfg.rng_seed, STREAM_INFER, rep, dt_index))
                sample = sabc_run(problem, spec, sabc_cfg)
                csv_path = out_dir / f"sensitivity_{rep:03d}_dt{dt:03d}_posterior.csv"
                write_posterior_csv(sample, csv_path)
                write_json(
                    diagnostics_dict(sample, digest),
                    out_dir / f"sensitivity_{rep:03d}_dt{dt:03d}_diagnostics.json",
                )
                params = sample.params_array
                row = {
                    "replicate": rep,
                    "delta_t": dt,
                    "status": "ok",
                    "true_seed": true_seed,
                    "posterior_mean": [float(v) for v in params.mean(axis=0)],
                    "posterior_std": [float(v) for v in params.std(axis=0, ddof=1)],
                    "posterior_csv": csv_path.name,
                }
            except Exception as exc:
                logger.exception("sensitivity replicate %d dt %d failed", rep, dt)
                row = {"replicate": rep, "delta_t": dt, "status": "failed", "error": f"{type(exc).__name__}: {exc}"}
            rows.append(row)

    by_dt: dict[int, list[float]] = {}
    for row in rows:
        if row["status"] == "ok":
            by_dt.setdefault(row["delta_t"], []).append(row["posterior_std"][0])
    tables = {
        "failures": sum(1 for r in rows if r["status"] != "ok"),
        "mean_posterior_std_by_delta_t": {
            str(dt): float(np.mean(v)) for dt, v in sorted(by_dt.items())
        },
    }
    report = StudyReport(kind="sensitivity", config_digest=digest, rng_seed=cfg.rng_seed, rows=tuple(rows), tables=tables)
    write_json(report.to_dict(), out_dir / "report.json")
    return report


# ---------------------------------------------------------------------------
# command handlers


def cmd_gen_net(args: argparse.Namespace) -> int:
    payload = {"command": "gen-net", "model": args.model, "n": args.n, "m": args.m, "p": args.p, "rng_seed": args.rng_seed}
    digest = config_digest(payload)
    rng = np.random.default_rng(args.rng_seed)
    if args.model == "ba":
        if args.m is None:
            raise ConfigError("--model ba needs --m")
        net = generate_ba(args.n, args.m, rng)
    elif args.model == "er":
        if args.p is None:
            raise ConfigError("--model er needs --p")
        net = generate_er(args.n, args.p, rng)
    else:
        raise ConfigError(f"unknown network model {args.model!r}")
    write_edge_list(net, args.out, comments=[f"config_digest={digest}", f"rng_seed={args.rng_seed}"])
    print(
        f"wrote {net.node_count} nodes / {net.edge_count} edges to {args.out} "
        f"(connected={net.is_connected()})"
    )
    return EXIT_OK


def _model_params(args: argparse.Namespace) -> tuple[float, ...]:
    if args.model == "simple":
        if args.theta is None:
            raise ConfigError("--model simple needs --theta")
        return (args.theta,)
    if args.beta is None or args.gamma is None:
        raise ConfigError("--model complex needs --beta and --gamma")
    return (args.beta, args.gamma)


def cmd_simulate(args: argparse.Namespace) -> int:
    params = _model_params(args)
    payload = {"command": "simulate", "model": args.model, "params": list(params),
               "seed_node": args.seed_node, "t_max": args.t_max, "rng_seed": args.rng_seed}
    digest = config_digest(payload)
    net = load_edge_list(args.net)
    rng = np.random.default_rng(args.rng_seed)
    if args.model == "simple":
        trace = simulate_simple(net, SimpleParams(theta=params[0], seed_node=args.seed_node), args.t_max, rng)
    else:
        trace = simulate_complex(
            net, ComplexParams(beta=params[0], gamma=params[1], seed_node=args.seed_node),
            SigmoidConfig(), args.t_max, rng,
        )
    write_trace(trace, args.out, meta={"config_digest": digest, "rng_seed": args.rng_seed})
    print(f"wrote trace with {len(trace.infected)} steps to {args.out}")
    return EXIT_OK


def cmd_observe(args: argparse.Namespace) -> int:
    payload = {"command": "observe", "t0": args.t0, "t_max": args.t_max, "trace": str(args.trace)}
    digest = config_digest(payload)
    trace = read_trace(args.trace)
    try:
        window = ObservationWindow(args.t0, args.t_max)
        observed = observe(trace, window)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    write_trace(observed, args.out, meta={"config_digest": digest, "rng_seed": None})
    print(f"wrote {window.length} observed steps to {args.out}")
    return EXIT_OK


def cmd_infer(args: argparse.Namespace) -> int:
    payload = {"command": "infer", "model": args.model, "t0": args.t0, "t_max": args.t_max,
               "particles": args.particles, "steps": args.steps, "cutoff": args.cutoff,
               "rng_seed": args.rng_seed, "network_term": args.network_term}
    digest = config_digest(payload)
    net = load_edge_list(args.net)
    trace = read_trace(args.observed)
    try:
        window = ObservationWindow(args.t0, args.t_max)
        observed_trace = observe(trace, window)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    if args.model == "complex" and not observed_trace.is_complex:
        raise ConfigError("observed dataset has no exposure record; cannot fit the complex model")
    observed = summarize(observed_trace, window, net) if args.model == "complex" else summarize_simple_view(observed_trace, window, net)
    paths = all_pairs_shortest_paths(net)
    problem = AbcProblem(
        kind=args.model, net=net, paths=paths, window=window, observed=observed,
        network_term=args.network_term,
    )
    spec = PriorSpec.from_observed(observed)
    cfg = SabcConfig(
        population_size=args.particles,
        max_steps=args.steps,
        acceptance_rate_cutoff=args.cutoff,
        rng_seed=args.rng_seed,
    )
    sample = sabc_run(problem, spec, cfg)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    write_posterior_csv(sample, out / "posterior.csv")
    write_json(diagnostics_dict(sample, digest), out / "diagnostics.json")
    means = sample.params_array.mean(axis=0)
    print(f"ran {sample.steps_run} steps; posterior mean {np.round(means, 4).tolist()}; outputs in {out}")
    return EXIT_OK


def summarize_simple_view(trace: EpidemicTrace, window: ObservationWindow, net: Network):
    """Summarize only the infected record, even for complex traces."""
    from .summaries import summarize_simple

    if trace.is_complex:
        simple_view = EpidemicTrace(
            node_count=trace.node_count,
            t_start=trace.t_start,
            infected=trace.infected,
            meta={"model": "simple"},
        )
        return summarize_simple(simple_view, window, net)
    return summarize_simple(trace, window, net)


def cmd_estimate(args: argparse.Namespace) -> int:
    payload = {"command": "estimate", "posterior": str(args.posterior), "true_seed": args.true_seed}
    digest = config_digest(payload)
    phis, _ = read_posterior_csv(args.posterior)
    net = load_edge_list(args.net)
    paths = all_pairs_shortest_paths(net)
    estimate = bayes_estimate(phis, net, paths, medoid=args.medoid)
    out = {
        "config_digest": digest,
        "estimate": {"params": list(estimate.params), "seed_node": estimate.seed_node},
        "expected_loss": expected_loss(estimate, phis, paths),
        "sample_size": len(phis),
    }
    if args.true_seed is not None:
        marginal = distance_marginal(phis, args.true_seed, paths)
        out["distance_marginal"] = {
            "reference": args.true_seed,
            "masses": [float(v) for v in marginal.masses],
            "node_counts": [int(v) for v in marginal.node_counts],
        }
        out["estimate_hop_distance"] = paths.distance(estimate.seed_node, args.true_seed)
    write_json(out, args.out)
    print(f"estimate {out['estimate']} (expected loss {out['expected_loss']:.4f}) -> {args.out}")
    return EXIT_OK


def _study_overrides(args: argparse.Namespace) -> dict:
    overrides = {}
    for name in ("replicates", "rng_seed", "particles", "steps"):
        value = getattr(args, name, None)
        if value is not None:
            overrides[name] = value
    return overrides


def cmd_replicate(args: argparse.Namespace) -> int:
    cfg = load_config(args.config, _study_overrides(args))
    report = run_replicate_study(cfg, args.out)
    ok = sum(1 for r in report.rows if r["status"] == "ok")
    print(f"replicate study: {ok}/{len(report.rows)} replicates ok; report in {args.out}")
    return EXIT_OK


def cmd_sensitivity(args: argparse.Namespace) -> int:
    cfg = load_config(args.config, _study_overrides(args))
    report = run_sensitivity(cfg, args.out)
    ok = sum(1 for r in report.rows if r["status"] == "ok")
    print(f"sensitivity study: {ok}/{len(report.rows)} runs ok; report in {args.out}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="netepi", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen-net", help="generate a synthetic network edge list")
    p.add_argument("--model", required=True, choices=["ba", "er"])
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int)
    p.add_argument("--p", type=float)
    p.add_argument("--rng-seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_gen_net)

    p = sub.add_parser("simulate", help="forward-simulate an epidemic trace")
    p.add_argument("--model", required=True, choices=["simple", "complex"])
    p.add_argument("--theta", type=float)
    p.add_argument("--beta", type=float)
    p.add_argument("--gamma", type=float)
    p.add_argument("--seed-node", type=int, required=True)
    p.add_argument("--t-max", type=int, required=True)
    p.add_argument("--rng-seed", type=int, default=0)
    p.add_argument("--net", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("observe", help="slice a trace to an observation window")
    p.add_argument("--trace", required=True)
    p.add_argument("--t0", type=int, required=True)
    p.add_argument("--t-max", type=int, required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_observe)

    p = sub.add_parser("infer", help="sample the posterior from an observed dataset")
    p.add_argument("--model", required=True, choices=["simple", "complex"])
    p.add_argument("--net", required=True)
    p.add_argument("--observed", required=True)
    p.add_argument("--t0", type=int, required=True)
    p.add_argument("--t-max", type=int, required=True)
    p.add_argument("--particles", type=int, default=1000)
    p.add_argument("--steps", type=int, default=200)
    p.add_argument("--cutoff", type=float, default=1e-4)
    p.add_argument("--rng-seed", type=int, default=0)
    p.add_argument("--network-term", choices=["mean", "sum"], default="mean")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_infer)

    p = sub.add_parser("estimate", help="Bayes estimate from a posterior sample")
    p.add_argument("--posterior", required=True)
    p.add_argument("--net", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--true-seed", type=int)
    p.add_argument("--medoid", action="store_true")
    p.set_defaults(func=cmd_estimate)

    p = sub.add_parser("replicate", help="repeat the generate/infer/estimate pipeline")
    p.add_argument("--config", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--replicates", type=int)
    p.add_argument("--rng-seed", type=int)
    p.add_argument("--particles", type=int)
    p.add_argument("--steps", type=int)
    p.set_defaults(func=cmd_replicate)

    p = sub.add_parser("sensitivity", help="sweep the number of observed steps")
    p.add_argument("--config", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--replicates", type=int)
    p.add_argument("--rng-seed", type=int)
    p.add_argument("--particles", type=int)
    p.add_argument("--steps", type=int)
    p.set_defaults(func=cmd_sensitivity)

    return parser


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(name)s: %(message)s")
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except Exception as exc:  # runtime failure
        logger.exception("command failed")
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
