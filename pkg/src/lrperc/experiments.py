"""Experiment configs, grid execution and CSV emission.

Config files are flat ``key = value`` text (comma-separated lists, ``#``
comments).  A run expands the parameter grid beta x lambda x q x s x
sizes, derives one seed per grid point from the master seed, executes
the named experiment per point and writes one CSV (schema-tagged header
comment) plus a JSON manifest recording the exact config and version.
Identical config + master seed produce byte-identical CSV output;
timestamps live only in the manifest.
"""

from __future__ import annotations

import itertools
import json
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from . import __version__, rng
from .model import ModelParams, Interval, validate_params
from .sampler import sample_config, dump_config
from .renorm import estimate_p_bad
from .crossing import (
    bridge_probability,
    check_escape_blocking,
    check_uncrossed_scaling,
    estimate_uncrossed,
    reach_probability,
)
from .fk import estimate_magnetization, estimate_theta_fk
from .multiscale import build_schedule, run_recursion_experiment

KINDS = (
    "sample", "p-bad", "pbar", "bridge", "lemma2", "thm2-events",
    "multiscale", "fk-theta", "magnetization", "theta-scan",
)


class ConfigError(ValueError):
    """Invalid experiment configuration (CLI exit code 2)."""


_KNOWN_KEYS = {
    "kind", "beta", "lambda", "q", "s", "sizes", "samples", "seed", "out",
    "theta", "theta_prime", "C", "R", "window", "edge_len",
    "n_sweeps", "burn_in", "C1", "theta1", "C0", "theta_inf", "max_level",
}


@dataclass
class ExperimentConfig:
    kind: str
    betas: list[float]
    lams: list[float]
    qs: list[float]
    ss: list[float]
    sizes: list[int]
    samples: int
    master_seed: int
    out_dir: str
    extras: dict = field(default_factory=dict)
    raw: dict = field(default_factory=dict)


def _floats(text: str) -> list[float]:
    return [float(t) for t in text.split(",") if t.strip()]


def _ints(text: str) -> list[int]:
    return [int(t) for t in text.split(",") if t.strip()]


def parse_config(path, kind: str | None = None) -> ExperimentConfig:
    """Parse a flat config file; ``kind`` (from the CLI) must agree with
    the file's kind when both are present."""
    raw: dict[str, str] = {}
    try:
        lines = Path(path).read_text().splitlines()
    except OSError as err:
        raise ConfigError(f"cannot read config {path}: {err}") from err
    for ln, line in enumerate(lines, 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{ln}: expected 'key = value'")
        key, val = (t.strip() for t in line.split("=", 1))
        if key not in _KNOWN_KEYS:
            raise ConfigError(f"{path}:{ln}: unknown key {key!r}")
        raw[key] = val

    file_kind = raw.get("kind")
    if kind and file_kind and kind != file_kind:
        raise ConfigError(f"CLI kind {kind!r} contradicts config kind {file_kind!r}")
    eff_kind = kind or file_kind
    if eff_kind not in KINDS:
        raise ConfigError(f"unknown experiment kind {eff_kind!r}; choose from {KINDS}")

    try:
        cfg = ExperimentConfig(
            kind=eff_kind,
            betas=_floats(raw.get("beta", "1")),
            lams=_floats(raw.get("lambda", "1")),
            qs=_floats(raw.get("q", "1")),
            ss=_floats(raw.get("s", "2")),
            sizes=_ints(raw.get("sizes", "0")) if eff_kind == "multiscale" else _ints(raw.get("sizes", "")),
            samples=int(raw.get("samples", "1000")),
            master_seed=int(raw.get("seed", "0")),
            out_dir=raw.get("out", "."),
            raw=dict(raw),
        )
    except ValueError as err:
        raise ConfigError(f"bad value in {path}: {err}") from err
    for key in ("theta", "theta_prime", "C0", "theta1", "theta_inf"):
        if key in raw:
            cfg.extras[key] = float(raw[key])
    for key in ("C", "R", "window", "edge_len", "n_sweeps", "burn_in", "C1", "max_level"):
        if key in raw:
            cfg.extras[key] = int(raw[key])

    if not cfg.betas or not cfg.lams or not cfg.qs or not cfg.ss:
        raise ConfigError("parameter grid must be nonempty")
    if cfg.kind != "multiscale" and not cfg.sizes:
        raise ConfigError("sizes must be provided (list of L or K values)")
    for b, l, q, s in itertools.product(cfg.betas, cfg.lams, cfg.qs, cfg.ss):
        try:
            validate_params(ModelParams(beta=b, lam=l, q=q, s=s))
        except ValueError as err:
            raise ConfigError(str(err)) from err
    bernoulli_kinds = {
        "sample", "p-bad", "pbar", "bridge", "lemma2", "thm2-events",
        "multiscale", "theta-scan",
    }
    if cfg.kind in bernoulli_kinds and any(q != 1 for q in cfg.qs):
        raise ConfigError(f"kind {cfg.kind!r} uses independent bonds; set q = 1")
    if cfg.kind in ("fk-theta", "magnetization"):
        floor = 1 if cfg.kind == "fk-theta" else 2
        if any(q != int(q) or q < floor for q in cfg.qs):
            raise ConfigError(f"kind {cfg.kind!r} needs integer q >= {floor}")
    return cfg


def _fmt(x) -> str:
    if isinstance(x, bool):
        return "1" if x else "0"
    if isinstance(x, float):
        return format(x, ".12g")
    return str(x)


_SCHEMAS = {
    "sample": ["idx", "L", "beta", "lambda", "q", "s", "file", "n_edges", "seed"],
    "p-bad": ["K", "theta", "beta", "lambda", "q", "n", "p_hat", "stderr", "seed"],
    "crossing": ["kind", "K", "C", "R", "beta", "lambda", "theta", "n",
                 "estimate", "stderr", "bound", "seed"],
    "multiscale": ["n", "C_n", "theta_n", "K_n", "u_hat", "stderr",
                   "rhs_bound", "target", "pass_flags"],
    "fk": ["q", "beta", "lambda", "L", "bc", "n_sweeps", "burn_in",
           "observable", "estimate", "stderr", "tau_int", "seed"],
    "theta-scan": ["beta", "lambda", "q", "s", "L", "n", "estimate", "stderr", "seed"],
}

_KIND_SCHEMA = {
    "sample": "sample", "p-bad": "p-bad",
    "pbar": "crossing", "bridge": "crossing", "lemma2": "crossing",
    "thm2-events": "crossing", "multiscale": "multiscale",
    "fk-theta": "fk", "magnetization": "fk", "theta-scan": "theta-scan",
}


def _need(cfg: ExperimentConfig, key: str):
    if key not in cfg.extras:
        raise ConfigError(f"kind {cfg.kind!r} requires config key {key!r}")
    return cfg.extras[key]


def _run_point(cfg: ExperimentConfig, idx: int, point, seed: int, out_dir: Path) -> list[dict]:
    beta, lam, q, s, size = point
    params = ModelParams(beta=beta, lam=lam, q=q, s=s)
    kind = cfg.kind
    if kind == "sample":
        box = Interval(0, size)
        c = sample_config(box, params, seed)
        fname = f"sample_{idx:04d}.txt"
        dump_config(c, out_dir / fname)
        return [dict(idx=idx, L=size, beta=beta, **{"lambda": lam}, q=q, s=s,
                     file=fname, n_edges=c.n_open(), seed=seed)]
    if kind == "p-bad":
        r = estimate_p_bad(size, _need(cfg, "theta"), params, cfg.samples, seed)
        return [dict(K=size, theta=cfg.extras["theta"], beta=beta,
                     **{"lambda": lam}, q=q, n=r.n, p_hat=r.mean,
                     stderr=r.stderr, seed=seed)]
    if kind == "pbar":
        w = cfg.extras.get("window", 5 * size)
        r = estimate_uncrossed(size, params, w, cfg.samples, seed)
        return [dict(kind="pbar", K=size, C="", R="", beta=beta,
                     **{"lambda": lam}, theta="", n=r.n,
                     estimate=r.mean, stderr=r.stderr, bound="", seed=seed)]
    if kind == "bridge":
        d = _need(cfg, "edge_len")
        rr = _need(cfg, "R")
        theta = cfg.extras.get("theta")
        r = bridge_probability(d, rr, params, cfg.samples, seed)
        bound = r.metadata["p_edge"] * theta * theta if theta else ""
        # K column carries the edge length for bridge rows
        return [dict(kind="bridge", K=d, C="", R=rr, beta=beta,
                     **{"lambda": lam}, theta=theta if theta else "",
                     n=r.n, estimate=r.mean, stderr=r.stderr,
                     bound=bound, seed=seed)]
    if kind == "lemma2":
        rep = check_uncrossed_scaling(
            size, _need(cfg, "C"), params, _need(cfg, "theta"),
            cfg.extras.get("R", 0), cfg.samples, seed,
        )
        return [dict(kind="lemma2", K=size, C=rep.C, R=rep.R, beta=beta,
                     **{"lambda": lam}, theta=rep.theta, n=cfg.samples,
                     estimate=rep.pbar_big.mean, stderr=rep.pbar_big.stderr,
                     bound=rep.bound, seed=seed)]
    if kind == "thm2-events":
        rep = check_escape_blocking(size, params, cfg.samples, seed)
        return [dict(kind="thm2ev", K=size, C="", R="", beta=beta,
                     **{"lambda": lam}, theta="", n=rep.n,
                     estimate=rep.lhs, stderr=rep.slack_se,
                     bound=rep.rhs, seed=seed)]
    if kind == "multiscale":
        sched = build_schedule(
            _need(cfg, "C1"), _need(cfg, "theta1"), _need(cfg, "C0"),
            _need(cfg, "theta_inf"), _need(cfg, "max_level"),
        )
        trace = run_recursion_experiment(
            sched, params, cfg.samples, cfg.extras["max_level"], seed
        )
        rows = []
        for row in trace.rows:
            flags = []
            if row.recursion_ok is not None:
                flags.append(f"recursion={'yes' if row.recursion_ok else 'no'}")
            flags.append(f"target={'yes' if row.target_ok else 'no'}")
            rows.append(dict(n=row.n, C_n=row.C_n, theta_n=row.theta_n,
                             K_n=row.K_n, u_hat=row.u_hat, stderr=row.stderr,
                             rhs_bound=row.rhs_bound, target=row.target,
                             pass_flags=";".join(flags)))
        return rows
    if kind in ("fk-theta", "magnetization"):
        n_sweeps = cfg.extras.get("n_sweeps", cfg.samples)
        burn = cfg.extras.get("burn_in", n_sweeps // 5)
        fn = estimate_theta_fk if kind == "fk-theta" else estimate_magnetization
        r = fn(int(q), params, size, n_sweeps, burn, seed)
        return [dict(q=q, beta=beta, **{"lambda": lam}, L=size, bc="wired",
                     n_sweeps=n_sweeps, burn_in=burn,
                     observable="theta_fk" if kind == "fk-theta" else "magnetization",
                     estimate=r.mean, stderr=r.stderr,
                     tau_int=r.metadata.get("tau_int", ""), seed=seed)]
    if kind == "theta-scan":
        r = reach_probability(size, params, cfg.samples, seed)
        return [dict(beta=beta, **{"lambda": lam}, q=q, s=s, L=size, n=r.n,
                     estimate=r.mean, stderr=r.stderr, seed=seed)]
    raise ConfigError(f"unknown kind {kind!r}")


def run(cfg: ExperimentConfig, threads: int = 1, out_dir: str | None = None) -> list[Path]:
    """Execute the experiment grid; returns the written paths."""
    out = Path(out_dir if out_dir is not None else cfg.out_dir)
    out.mkdir(parents=True, exist_ok=True)

    env_seed = os.environ.get("LRPERC_SEED")
    master = int(env_seed) if env_seed else cfg.master_seed

    grid = list(itertools.product(cfg.betas, cfg.lams, cfg.qs, cfg.ss, cfg.sizes))
    seeds = [rng.mix64(rng.TAG_GRID, master, i) for i in range(len(grid))]
    if len(set(seeds)) != len(seeds):
        raise RuntimeError("grid seed collision; master seed unusable")

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            chunks = list(
                pool.map(
                    lambda t: _run_point(cfg, t[0], t[1], seeds[t[0]], out),
                    enumerate(grid),
                )
            )
    else:
        chunks = [
            _run_point(cfg, i, pt, seeds[i], out) for i, pt in enumerate(grid)
        ]

    schema = _KIND_SCHEMA[cfg.kind]
    cols = _SCHEMAS[schema]
    csv_path = out / f"{cfg.kind}.csv"
    with open(csv_path, "w") as fh:
        fh.write(f"# schema={schema}/v1\n")
        fh.write(",".join(cols) + "\n")
        for rows in chunks:
            for row in rows:
                fh.write(",".join(_fmt(row.get(c, "")) for c in cols) + "\n")

    manifest = {
        "kind": cfg.kind,
        "config": cfg.raw,
        "effective_seed": master,
        "version": __version__,
        "outputs": [csv_path.name],
    }
    import datetime

    manifest["created"] = datetime.datetime.now().isoformat(timespec="seconds")
    man_path = out / f"{cfg.kind}.manifest.json"
    man_path.write_text(json.dumps(manifest, indent=2) + "\n")
    return [csv_path, man_path]
