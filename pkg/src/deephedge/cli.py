"""Command-line pipeline: build-panel, synth, train, evaluate, sweep, blend, stats.

Every command writes its artifacts atomically into ``--out`` together with a
``config.json`` holding the fully resolved run configuration and the SHA-256
of every input file it read. Re-running a command with the same inputs and
seed reproduces the same bytes.

Exit codes: 0 success, 2 validation or unreadable input, 3 incompatible
artifacts (fingerprint mismatch).
"""
from __future__ import annotations

import argparse
import hashlib
import json
import logging
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Sequence

import numpy as np
import pandas as pd

from . import __version__
from .agent import (
    Checkpoint,
    GaussianPolicy,
    TrainConfig,
    feature_fingerprint,
    load_checkpoint,
    save_checkpoint,
    train,
)
from .agent.checkpoint import atomic_write_bytes
from .agent.trainer import EVAL_LOG_COLUMNS, LOG_COLUMNS
from .analytics import (
    PAPER_PERIODS,
    TERCILE_LABELS,
    block_bootstrap_ci,
    blend_sweep,
    evaluate_traces,
    frontier_frame,
    min_variance_weight,
    period_buckets,
    regime_attribution,
    reports_frame,
    vix_terciles,
)
from .analytics.blend import ATTRIBUTION_COLUMNS
from .data import (
    PAPER_SPLIT,
    SPLIT_NAMES,
    FeaturePanel,
    NormStats,
    PanelSpec,
    SplitSpec,
    SynthConfig,
    build_panel,
    fit_norm_stats,
    read_input_csv,
    read_panel_csv,
    simulate_market,
    split_panel,
)
from .data.panel import input_to_csv_text, panel_to_csv_text
from .env import BASELINE_KINDS, EnvConfig, baseline_policy, replay_split, rollout, traces_to_csv_text
from .errors import ConfigError, DeepHedgeError, IncompatibilityError, ValidationError

log = logging.getLogger("deephedge")

DEFAULT_WEIGHTS = tuple(round(0.1 * i, 1) for i in range(11))
GRID_COLUMNS = ["cadence", "slippage", "train", "valid", "test", "status"]


def _sha256_file(path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def _json_bytes(obj) -> bytes:
    return (json.dumps(obj, indent=2, sort_keys=True, allow_nan=True) + "\n").encode()


def _csv_bytes(frame: pd.DataFrame) -> bytes:
    return frame.to_csv(index=False, float_format="%.17g", lineterminator="\n").encode()


def _write(out: Path, name: str, blob: bytes) -> Path:
    path = out / name
    atomic_write_bytes(path, blob)
    return path


# -- run configuration -------------------------------------------------------

@dataclass(frozen=True)
class SweepSpec:
    cadences: tuple[int, ...] = (15, 20, 25)
    slippages: tuple[float, ...] = (8.0, 10.0, 15.0, 20.0)
    pos_limit: float = 2.0

    def cells(self) -> list[tuple[int, float]]:
        return [(int(c), float(s)) for c in self.cadences for s in self.slippages]


@dataclass(frozen=True)
class StatsSpec:
    block_len: int = 21
    n_resamples: int = 1000
    level: float = 0.95
    nw_lag: int = 21
    benchmark: str = "buy_hold"


@dataclass(frozen=True)
class RunConfig:
    """Everything a command needs besides file paths.

    ``split`` left as ``None`` is taken from the panel's split manifest.
    ``baselines`` maps a report name to ``{"kind": ..., **params}``.
    """

    seed: int = 0
    synth: SynthConfig = field(default_factory=SynthConfig)
    panel_spec: PanelSpec = field(default_factory=PanelSpec)
    split: SplitSpec | None = None
    env: EnvConfig = field(default_factory=EnvConfig)
    train: TrainConfig = field(default_factory=TrainConfig)
    baselines: dict = field(default_factory=lambda: {k: {"kind": k} for k in BASELINE_KINDS})
    sweep: SweepSpec = field(default_factory=SweepSpec)
    weights: tuple[float, ...] = DEFAULT_WEIGHTS
    stats: StatsSpec = field(default_factory=StatsSpec)

    @classmethod
    def from_dict(cls, d: dict) -> "RunConfig":
        known = {"seed", "synth", "panel_spec", "split", "env", "train", "baselines", "sweep", "weights", "stats"}
        unknown = set(d) - known
        if unknown:
            raise ConfigError(f"unknown config sections: {sorted(unknown)}")
        kw = {}
        if "seed" in d:
            kw["seed"] = int(d["seed"])
        if "synth" in d:
            kw["synth"] = SynthConfig.from_dict(d["synth"])
        if "panel_spec" in d:
            kw["panel_spec"] = PanelSpec.from_dict(d["panel_spec"])
        if d.get("split") is not None:
            kw["split"] = SplitSpec.from_dict(d["split"])
        if "env" in d:
            kw["env"] = EnvConfig.from_dict(d["env"])
        if "train" in d:
            kw["train"] = TrainConfig.from_dict(d["train"])
        if "baselines" in d:
            kw["baselines"] = {str(k): dict(v) for k, v in d["baselines"].items()}
            for name, spec in kw["baselines"].items():
                if "kind" not in spec:
                    raise ConfigError(f"baseline '{name}' needs a 'kind'")
        if "sweep" in d:
            s = dict(d["sweep"])
            _check_keys(s, SweepSpec, "sweep")
            for k in ("cadences", "slippages"):
                if k in s:
                    s[k] = tuple(s[k])
            kw["sweep"] = SweepSpec(**s)
        if "weights" in d:
            kw["weights"] = tuple(float(w) for w in d["weights"])
        if "stats" in d:
            _check_keys(d["stats"], StatsSpec, "stats")
            kw["stats"] = StatsSpec(**d["stats"])
        return cls(**kw)

    def to_dict(self) -> dict:
        return {
            "seed": self.seed,
            "synth": self.synth.to_dict(),
            "panel_spec": self.panel_spec.to_dict(),
            "split": None if self.split is None else self.split.to_dict(),
            "env": self.env.to_dict(),
            "train": self.train.to_dict(),
            "baselines": self.baselines,
            "sweep": {"cadences": list(self.sweep.cadences), "slippages": list(self.sweep.slippages),
                      "pos_limit": self.sweep.pos_limit},
            "weights": list(self.weights),
            "stats": self.stats.__dict__.copy(),
        }


def _check_keys(d, cls, section):
    unknown = set(d) - set(cls.__dataclass_fields__)
    if unknown:
        raise ConfigError(f"unknown keys in '{section}': {sorted(unknown)}")


def load_run_config(path: str | None, seed: int | None) -> RunConfig:
    raw = {}
    if path:
        try:
            raw = json.loads(Path(path).read_text())
        except OSError as exc:
            raise ValidationError(f"cannot read config {path}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config {path} is not valid JSON: {exc}") from exc
    cfg = RunConfig.from_dict(raw)
    if seed is not None:
        cfg = replace(cfg, seed=int(seed))
    # the master seed drives every random stream
    return replace(cfg, synth=replace(cfg.synth, seed=cfg.seed), train=cfg.train.replace(seed=cfg.seed))


def _write_config(out: Path, command: str, cfg: RunConfig, args: dict, inputs: dict) -> None:
    doc = {
        "command": command,
        "version": __version__,
        "args": args,
        # file name plus content hash, so reruns from another directory stay byte-identical
        "inputs": {k: {"file": Path(v).name, "sha256": _sha256_file(v)} for k, v in sorted(inputs.items())},
        "config": cfg.to_dict(),
    }
    _write(out, "config.json", _json_bytes(doc))


# -- panel artifacts ---------------------------------------------------------

@dataclass
class PanelArtifacts:
    panel: FeaturePanel
    norm: NormStats
    split: SplitSpec
    splits: tuple
    files: dict

    def feature_fingerprint(self, window: int) -> str:
        return feature_fingerprint(self.norm.fingerprint(), window)


def _split_manifest(panel: FeaturePanel, split: SplitSpec, norm: NormStats, panel_text: str) -> dict:
    parts = split_panel(panel, split)
    return {
        "split": split.to_dict(),
        "splits": {
            name: {"rows": len(p), "first": str(p.dates[0].date()), "last": str(p.dates[-1].date())}
            for name, p in zip(SPLIT_NAMES, parts)
        },
        "norm_fingerprint": norm.fingerprint(),
        "panel_sha256": hashlib.sha256(panel_text.encode()).hexdigest(),
    }


def load_panel_dir(path: str, split: SplitSpec | None) -> PanelArtifacts:
    d = Path(path)
    files = {"panel": d / "panel.csv", "norm_stats": d / "norm_stats.json", "splits": d / "splits.json"}
    for f in files.values():
        if not f.is_file():
            raise ValidationError(f"panel directory {d} lacks {f.name}")
    manifest = json.loads(files["splits"].read_text())
    stored_split = SplitSpec.from_dict(manifest["split"])
    if split is not None and split != stored_split:
        raise IncompatibilityError(
            f"configured split {split.to_dict()} differs from the panel's {stored_split.to_dict()}"
        )
    panel = read_panel_csv(files["panel"])
    norm = NormStats.from_dict(json.loads(files["norm_stats"].read_text()))
    parts = split_panel(panel, stored_split)
    refit = fit_norm_stats(parts.train, norm.clip_bound, norm.columns)
    if refit.fingerprint() != norm.fingerprint() or norm.fingerprint() != manifest["norm_fingerprint"]:
        raise IncompatibilityError("norm_stats.json does not match the panel's training split")
    return PanelArtifacts(panel, norm, stored_split, parts, files)


def _select_splits(art: PanelArtifacts, which: str) -> list[tuple[str, FeaturePanel]]:
    named = dict(zip(SPLIT_NAMES, art.splits))
    if which == "all":
        return list(named.items())
    return [(which, named[which])]


def _load_compatible(ckpt_path: str, art: PanelArtifacts) -> tuple[Checkpoint, EnvConfig]:
    try:
        ckpt = load_checkpoint(ckpt_path)
    except FileNotFoundError as exc:
        raise ValidationError(f"checkpoint {ckpt_path} not found") from exc
    env_cfg = EnvConfig.from_dict(ckpt.env_config)
    input_dim = env_cfg.window * len(art.norm.columns) + 1
    ckpt.check_compatible(art.feature_fingerprint(env_cfg.window), input_dim)
    return ckpt, env_cfg


def _baselines(cfg: RunConfig, art: PanelArtifacts) -> dict:
    """Named baseline policies; the VIX band centres on the train-split median unless given."""
    out = {}
    for name, spec in cfg.baselines.items():
        params = {k: v for k, v in spec.items() if k != "kind"}
        if spec["kind"] == "vix_band" and params.get("vix_median") is None:
            params["vix_median"] = float(np.nanmedian(art.splits.train.column("vix")))
        out[name] = baseline_policy(spec["kind"], params)
    return out


# -- commands ----------------------------------------------------------------

def cmd_synth(args, cfg: RunConfig) -> int:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    market = simulate_market(cfg.synth)
    _write(out, "input.csv", input_to_csv_text(market.raw).encode())
    _write_config(out, "synth", cfg, {}, {})
    log.info("wrote %d synthetic rows to %s", len(market.raw), out / "input.csv")
    return 0


def cmd_build_panel(args, cfg: RunConfig) -> int:
    out = Path(args.out)
    inputs = {}
    if args.input:
        try:
            raw = read_input_csv(args.input)
        except FileNotFoundError as exc:
            raise ValidationError(f"input {args.input} not found") from exc
        inputs["input"] = args.input
    elif args.synth:
        raw = simulate_market(cfg.synth).raw
    else:
        raise ConfigError("build-panel needs --input <csv> or --synth")
    panel = build_panel(raw, cfg.panel_spec)
    split = cfg.split or PAPER_SPLIT
    parts = split_panel(panel, split)
    norm = fit_norm_stats(parts.train)
    text = panel_to_csv_text(panel)
    out.mkdir(parents=True, exist_ok=True)
    _write(out, "panel.csv", text.encode())
    _write(out, "norm_stats.json", _json_bytes(norm.to_dict()))
    _write(out, "splits.json", _json_bytes(_split_manifest(panel, split, norm, text)))
    _write_config(out, "build-panel", replace(cfg, split=split), {"synth": bool(args.synth)}, inputs)
    log.info("panel: %d rows; train/valid/test = %s", len(panel), [len(p) for p in parts])
    return 0


def _logs_frame(rows, columns) -> pd.DataFrame:
    return pd.DataFrame(rows, columns=columns)


def cmd_train(args, cfg: RunConfig) -> int:
    art = load_panel_dir(args.panel, cfg.split)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    resume, prior_log, prior_eval = None, [], []
    inputs = dict(art.files)
    if args.resume:
        last = load_checkpoint(args.resume)
        best_path = Path(args.resume).with_name("best.ckpt")
        best = load_checkpoint(best_path) if best_path.is_file() else None
        resume = (last, best)
        inputs["resume"] = args.resume
        src = Path(args.resume).parent
        for name, sink, cols in (("train_log.csv", prior_log, LOG_COLUMNS), ("eval_log.csv", prior_eval, EVAL_LOG_COLUMNS)):
            f = src / name
            if f.is_file():
                prev = pd.read_csv(f, float_precision="round_trip")
                sink.extend(prev[prev["update"] <= last.update][cols].to_dict("records"))

    res = train(art.splits, art.norm, cfg.env, cfg.train, resume=resume, stop_after=args.stop_after)
    if res.best is not None:
        save_checkpoint(res.best, out / "best.ckpt")
    save_checkpoint(res.last, out / "last.ckpt")
    _write(out, "train_log.csv", _csv_bytes(_logs_frame(prior_log + res.log, LOG_COLUMNS)))
    evals = _logs_frame(prior_eval + res.evals, EVAL_LOG_COLUMNS)
    evals["best"] = evals["best"].astype(bool)
    _write(out, "eval_log.csv", _csv_bytes(evals))
    _write_config(out, "train", replace(cfg, split=art.split), {"stop_after": args.stop_after}, inputs)
    if res.best is not None:
        log.info("best validation Sharpe %.3f at update %d", res.best.valid_sharpe, res.best.update)
    return 0


def cmd_evaluate(args, cfg: RunConfig) -> int:
    art = load_panel_dir(args.panel, cfg.split)
    ckpt, env_cfg = _load_compatible(args.ckpt, art)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    policies = {"policy": GaussianPolicy(ckpt.params, env_cfg.pos_limit), **_baselines(cfg, art)}
    reports = []
    for split_name, part in _select_splits(art, args.split):
        for name, pol in policies.items():
            stochastic = name == "policy" and not args.deterministic
            traces = rollout(pol, part, art.norm, env_cfg, deterministic=not stochastic, seed=cfg.seed)
            reports.append(evaluate_traces(traces, split_name, name))
            _write(out, f"traces_{name}_{split_name}.csv", traces_to_csv_text(traces).encode())
    _write(out, "eval_report.csv", _csv_bytes(reports_frame(reports)))
    _write_config(out, "evaluate", replace(cfg, split=art.split, env=env_cfg),
                  {"split": args.split, "deterministic": bool(args.deterministic)},
                  {**art.files, "ckpt": args.ckpt})
    for r in reports:
        if r.policy == "policy":
            log.info("%s: Sharpe %.3f over %d steps", r.split, r.sharpe, r.steps)
    return 0


def _sweep_cell(task) -> dict:
    cadence, slippage, cfg, art_path, out = task
    row = {"cadence": cadence, "slippage": slippage, "train": np.nan, "valid": np.nan, "test": np.nan}
    try:
        art = load_panel_dir(art_path, cfg.split)
        env_cfg = cfg.env.replace(rebalance_every=cadence, slippage_bps=slippage, pos_limit=cfg.sweep.pos_limit)
        res = train(art.splits, art.norm, env_cfg, cfg.train)
        save_checkpoint(res.best, Path(out) / "cells" / f"c{cadence}_s{slippage:g}.ckpt")
        pol = GaussianPolicy(res.best.params, env_cfg.pos_limit)
        for name, part in zip(SPLIT_NAMES, art.splits):
            row[name] = evaluate_traces(rollout(pol, part, art.norm, env_cfg), name).sharpe
        row["status"] = "ok"
    except (DeepHedgeError, ValueError, FloatingPointError) as exc:
        row["status"] = f"error: {exc}"
    return row


def cmd_sweep(args, cfg: RunConfig) -> int:
    art = load_panel_dir(args.panel, cfg.split)  # fail fast on a bad panel
    out = Path(args.out)
    (out / "cells").mkdir(parents=True, exist_ok=True)
    tasks = [(c, s, cfg, args.panel, str(out)) for c, s in cfg.sweep.cells()]
    if not tasks:
        raise ConfigError("sweep grid is empty")
    if args.jobs > 1:
        with ProcessPoolExecutor(args.jobs) as pool:
            rows = list(pool.map(_sweep_cell, tasks))
    else:
        rows = [_sweep_cell(t) for t in tasks]
    for r in rows:
        log.info("cadence %s slippage %s: %s", r["cadence"], r["slippage"], r["status"])
    _write(out, "grid.csv", _csv_bytes(pd.DataFrame(rows, columns=GRID_COLUMNS)))
    _write_config(out, "sweep", replace(cfg, split=art.split), {}, art.files)
    return 0


def _replays(art: PanelArtifacts, which: str, policy, env_cfg) -> tuple[pd.DataFrame, pd.Series]:
    """Continuous replays per selected split, concatenated; also split label per date."""
    frames, labels = [], []
    for split_name, part in _select_splits(art, which):
        tr = replay_split(policy, part, art.norm, env_cfg)
        frames.append(tr.to_frame())
        labels.append(pd.Series(split_name, index=pd.DatetimeIndex(tr.date)))
    return pd.concat(frames, ignore_index=True), pd.concat(labels)


def cmd_blend(args, cfg: RunConfig) -> int:
    art = load_panel_dir(args.panel, cfg.split)
    ckpt, env_cfg = _load_compatible(args.ckpt, art)
    weights = cfg.weights
    if args.weights:
        weights = tuple(float(x) for x in args.weights.split(","))
    frame, _ = _replays(art, args.split, GaussianPolicy(ckpt.params, env_cfg.pos_limit), env_cfg)
    idx = pd.DatetimeIndex(frame["date"])
    pnl = pd.Series(frame["pnl"].to_numpy(), index=idx)
    spy = pd.Series(frame["ret_fwd"].to_numpy(), index=idx)
    try:
        reports = blend_sweep(pnl, spy, weights)
    except ValueError as exc:
        raise ValidationError(str(exc)) from exc
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    _write(out, "frontier.csv", _csv_bytes(frontier_frame(reports)))
    rolling = pd.concat(
        [r.rolling.rename_axis("date").reset_index().assign(weight=r.weight) for r in reports], ignore_index=True
    )
    rolling["date"] = rolling["date"].dt.strftime("%Y-%m-%d")
    rolling = rolling[["weight", "date", *[c for c in rolling.columns if c not in ("weight", "date")]]]
    _write(out, "risk_diff.csv", _csv_bytes(rolling))
    attribution = pd.concat([r.attribution.assign(weight=r.weight) for r in reports], ignore_index=True)
    _write(out, "attribution.csv", _csv_bytes(attribution[["weight", *ATTRIBUTION_COLUMNS]]))
    _write(out, "summary.json", _json_bytes({"min_variance_weight": min_variance_weight(pnl, spy),
                                            "steps": int(len(pnl))}))
    _write_config(out, "blend", replace(cfg, split=art.split, env=env_cfg, weights=tuple(weights)),
                  {"split": args.split}, {**art.files, "ckpt": args.ckpt})
    return 0


def cmd_stats(args, cfg: RunConfig) -> int:
    art = load_panel_dir(args.panel, cfg.split)
    ckpt, env_cfg = _load_compatible(args.ckpt, art)
    policies = {"policy": GaussianPolicy(ckpt.params, env_cfg.pos_limit), **_baselines(cfg, art)}
    if cfg.stats.benchmark not in policies:
        raise ConfigError(f"benchmark '{cfg.stats.benchmark}' is not a configured policy")
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    rewards, split_of = {}, None
    s = cfg.stats
    for name, pol in policies.items():
        frame, labels = _replays(art, args.split, pol, env_cfg)
        series = pd.Series(frame["reward_bps"].to_numpy(), index=pd.DatetimeIndex(frame["date"]))
        rewards[name] = series
        split_of = labels
        try:
            if not series.size > s.nw_lag:
                raise ValueError(f"{series.size} steps is too short for Newey-West lag {s.nw_lag}")
            ci = block_bootstrap_ci(series.to_numpy(), s.block_len, s.n_resamples, cfg.seed, s.level, nw_lag=s.nw_lag)
            doc = {"policy": name, **ci.to_dict()}
        except ValueError as exc:
            doc = {"policy": name, "error": str(exc)}
        _write(out, f"ci_{name}.json", _json_bytes(doc))
    dates = split_of.index
    vix = art.panel.frame["vix"].reindex(dates)
    table = regime_attribution(rewards, vix_terciles(vix), s.benchmark, list(TERCILE_LABELS))
    _write(out, "regime_vix.csv", table.to_csv_text().encode())
    periods = regime_attribution(rewards, period_buckets(dates, PAPER_PERIODS, split_of), s.benchmark)
    _write(out, "regime_periods.csv", periods.to_csv_text().encode())
    _write_config(out, "stats", replace(cfg, split=art.split, env=env_cfg), {"split": args.split},
                  {**art.files, "ckpt": args.ckpt})
    return 0


# -- entry point -------------------------------------------------------------

COMMANDS = {
    "synth": cmd_synth,
    "build-panel": cmd_build_panel,
    "train": cmd_train,
    "evaluate": cmd_evaluate,
    "sweep": cmd_sweep,
    "blend": cmd_blend,
    "stats": cmd_stats,
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="deephedge", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, needs_panel=True):
        sp.add_argument("--config", help="run configuration JSON")
        sp.add_argument("--seed", type=int, help="master seed (overrides the config)")
        sp.add_argument("--out", required=True, help="output directory")
        if needs_panel:
            sp.add_argument("--panel", required=True, help="directory written by build-panel")

    sp = sub.add_parser("synth", help="write a synthetic raw input CSV")
    common(sp, needs_panel=False)

    sp = sub.add_parser("build-panel", help="build the feature panel, norm stats and split manifest")
    common(sp, needs_panel=False)
    src = sp.add_mutually_exclusive_group(required=True)
    src.add_argument("--input", help="raw input CSV")
    src.add_argument("--synth", action="store_true", help="use the synthetic generator")

    sp = sub.add_parser("train", help="train the policy")
    common(sp)
    sp.add_argument("--resume", help="last.ckpt to continue from")
    sp.add_argument("--stop-after", type=int, help="stop at this update, keeping the full schedule")

    for name, helptext in (("evaluate", "evaluate a checkpoint against baselines"),
                           ("blend", "policy/SPY blend analytics"),
                           ("stats", "confidence intervals and regime tables")):
        sp = sub.add_parser(name, help=helptext)
        common(sp)
        sp.add_argument("--ckpt", required=True)
        sp.add_argument("--split", choices=[*SPLIT_NAMES, "all"], default="all" if name == "evaluate" else "test")
        if name == "evaluate":
            sp.add_argument("--deterministic", action="store_true", help="act on the mean action")
        if name == "blend":
            sp.add_argument("--weights", help="comma-separated policy weights, e.g. 0,0.5,1")

    sp = sub.add_parser("sweep", help="retrain over the cadence x slippage grid")
    common(sp)
    sp.add_argument("--jobs", type=int, default=1, help="worker processes")
    return p


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = load_run_config(args.config, args.seed)
        return COMMANDS[args.command](args, cfg)
    except DeepHedgeError as exc:
        print(f"deephedge {args.command}: error: {exc}", file=sys.stderr)
        return getattr(exc, "exit_code", 1)
    except ValueError as exc:
        code = 2
        print(f"deephedge {args.command}: error: {exc}", file=sys.stderr)
        return code
    except OSError as exc:
        print(f"deephedge {args.command}: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
