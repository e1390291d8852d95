"""Command line entry point: ``infodensity {run,sweep,plot,oracle}``.

Settings come from, in increasing precedence: built-in paper defaults, a flat
JSON config file, the INFODENSITY_OUT environment variable (output directory
only), and command-line flags.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
import time
from dataclasses import asdict, dataclass, fields, replace
from pathlib import Path
from typing import List, Optional

from . import harness, oracles, plot
from .bitseq import BLOCK, SLIDING
from .errors import NoSuchOrder
from .randomness import FORWARD, REVERSE
from .source import MAX_ORDER

ENV_OUT = "INFODENSITY_OUT"


@dataclass
class ExperimentConfig:
    kStar: int = 3
    p: float = harness.PAPER_P
    k: int = 3
    m: int = 10000
    n: int = harness.PAPER_N
    runIndex: int = 0
    kValues: tuple = harness.PAPER_K_VALUES
    mValues: tuple = harness.PAPER_M_VALUES
    runsPerCell: int = harness.PAPER_RUNS_PER_CELL
    baseSeed: int = 0
    burnIn: int = 0
    transitions: Optional[tuple] = None
    wordMode: str = SLIDING
    overheadCorrection: bool = False
    klDirection: str = FORWARD
    outDir: str = "out"
    workers: int = 1
    emitFiles: bool = False

    def validate(self, command: str = "run") -> None:
        if not 1 <= self.kStar <= MAX_ORDER:
            raise ValueError(f"kStar must lie in [1, {MAX_ORDER}]")
        if command == "run":
            if not 1 <= self.k <= MAX_ORDER:
                raise ValueError(f"k must lie in [1, {MAX_ORDER}]")
            if self.m < self.k + 1 or self.n < self.k + 1:
                raise ValueError("m and n must each exceed k")
        else:
            if not self.kValues or not self.mValues:
                raise ValueError("kValues and mValues must be non-empty")
            if any(not 1 <= k <= MAX_ORDER for k in self.kValues):
                raise ValueError(f"every kValues entry must lie in [1, {MAX_ORDER}]")
            if self.n < max(self.kValues) + 1:
                raise ValueError("n must exceed every k")
        if not 0.0 < self.p < 1.0:
            raise ValueError("p must lie in (0, 1)")
        if self.wordMode not in (SLIDING, BLOCK):
            raise ValueError(f"wordMode must be {SLIDING!r} or {BLOCK!r}")
        if self.klDirection not in (FORWARD, REVERSE):
            raise ValueError(f"klDirection must be {FORWARD!r} or {REVERSE!r}")
        if self.workers < 1 or self.runsPerCell < 1:
            raise ValueError("workers and runsPerCell must be positive")

    def to_json(self) -> str:
        d = asdict(self)
        d["kValues"], d["mValues"] = list(self.kValues), list(self.mValues)
        if self.transitions is not None:
            d["transitions"] = list(self.transitions)
        return json.dumps(d, indent=2) + "\n"

    @classmethod
    def from_dict(cls, d: dict) -> "ExperimentConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(d) - known
        if unknown:
            raise ValueError(f"unknown config keys: {', '.join(sorted(unknown))}")
        d = dict(d)
        for key in ("kValues", "mValues", "transitions"):
            if d.get(key) is not None:
                d[key] = tuple(d[key])
        return replace(cls(), **d)

    @classmethod
    def from_json(cls, text: str) -> "ExperimentConfig":
        return cls.from_dict(json.loads(text))

    def run_config(self) -> harness.RunConfig:
        return harness.RunConfig(self.kStar, self.k, self.m, self.n, self.p, self.runIndex,
                                 self.baseSeed, self.burnIn, self.transitions, self.wordMode,
                                 self.overheadCorrection)

    def grid(self) -> harness.SweepGrid:
        return harness.SweepGrid(self.kStar, self.p, self.kValues, self.mValues, self.runsPerCell,
                                 self.n, self.baseSeed, self.burnIn, self.transitions,
                                 self.wordMode, self.overheadCorrection)


# flag dest -> config key
FLAG_KEYS = {
    "kstar": "kStar", "p": "p", "k": "k", "m": "m", "n": "n", "run_index": "runIndex",
    "k_values": "kValues", "m_values": "mValues", "runs": "runsPerCell", "seed": "baseSeed",
    "burn_in": "burnIn", "word_mode": "wordMode", "overhead_correction": "overheadCorrection",
    "kl_direction": "klDirection", "out": "outDir", "workers": "workers",
    "emit_files": "emitFiles",
}


def _int_list(text: str) -> tuple:
    """Comma list of ints or ``start:stop:step`` (stop inclusive)."""
    try:
        if ":" in text:
            parts = [int(x) for x in text.split(":")]
            start, stop = parts[0], parts[1]
            step = parts[2] if len(parts) > 2 else 1
            return tuple(range(start, stop + 1, step))
        return tuple(int(x) for x in text.split(",") if x)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer list: {text!r}")


def _add_common(sp: argparse.ArgumentParser, single: bool) -> None:
    sp.add_argument("--config", help="flat JSON config file")
    sp.add_argument("--kstar", type=int, help="source order k*")
    sp.add_argument("--p", type=float, help="source transition parameter (default 0.3)")
    sp.add_argument("--n", type=int, help="test sequence length")
    sp.add_argument("--seed", type=int, help="base seed")
    sp.add_argument("--burn-in", type=int)
    sp.add_argument("--word-mode", choices=[SLIDING, BLOCK])
    sp.add_argument("--overhead-correction", action="store_true", default=None,
                    help="subtract the empty gzip container length from the compressed system length")
    sp.add_argument("--out", help="output directory")
    sp.add_argument("--emit-files", action="store_true", default=None,
                    help="write system and errorT0 files")
    if single:
        sp.add_argument("--k", type=int, help="learner order")
        sp.add_argument("--m", type=int, help="training length")
        sp.add_argument("--run-index", type=int)
    else:
        sp.add_argument("--paper-defaults", action="store_true",
                        help="k=1..10, m=100..10000 step 100, 10 runs per cell, n=1000, p=0.3")
        sp.add_argument("--k-values", type=_int_list)
        sp.add_argument("--m-values", type=_int_list)
        sp.add_argument("--runs", type=int, help="runs per (k, m) cell")
        sp.add_argument("--kl-direction", choices=[FORWARD, REVERSE])
        sp.add_argument("--workers", type=int)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="infodensity",
                                     description="Learner information density vs. randomness of its mistakes")
    sub = parser.add_subparsers(dest="command", required=True)
    _add_common(sub.add_parser("run", help="one training/testing run, printed as JSON"), single=True)
    _add_common(sub.add_parser("sweep", help="full (k, m, run) grid to CSV"), single=False)
    pp = sub.add_parser("plot", help="SVG chart plus sidecar CSV from aggregates.csv")
    pp.add_argument("aggregates", help="aggregates.csv written by sweep")
    pp.add_argument("--figure", required=True, choices=sorted(plot.FIGURES))
    pp.add_argument("--kstar", type=int, help="order whose mean sysRatio is marked as rho*")
    pp.add_argument("--out", help="SVG path (sidecar CSV goes next to it)")
    sub.add_parser("oracle", help="brute-force self checks")
    return parser


def resolve_config(args, parser: argparse.ArgumentParser) -> ExperimentConfig:
    cfg = ExperimentConfig()
    if getattr(args, "config", None):
        try:
            cfg = ExperimentConfig.from_json(Path(args.config).read_text())
        except (OSError, ValueError, TypeError) as exc:
            parser.exit(2, f"{parser.prog}: error: cannot read config {args.config}: {exc}\n")
    if getattr(args, "paper_defaults", False):
        preset = ExperimentConfig()
        for key in ("kValues", "mValues", "runsPerCell", "n", "p", "transitions"):
            setattr(cfg, key, getattr(preset, key))
    if os.environ.get(ENV_OUT):
        cfg.outDir = os.environ[ENV_OUT]
    for dest, key in FLAG_KEYS.items():
        val = getattr(args, dest, None)
        if val is not None:
            setattr(cfg, key, val)
    try:
        cfg.validate(args.command)
    except ValueError as exc:
        parser.error(str(exc))
    return cfg


def cmd_run(cfg: ExperimentConfig) -> int:
    art = harness.run_one_with_artifacts(cfg.run_config())
    print(json.dumps(art.record.to_json(), sort_keys=True))
    if not art.record.ok:
        return 1
    if cfg.emitFiles:
        out = Path(cfg.outDir)
        out.mkdir(parents=True, exist_ok=True)
        (out / "system").write_bytes(art.system)
        (out / "errorT0").write_bytes(art.error_t0)
    return 0


def cmd_sweep(cfg: ExperimentConfig) -> int:
    grid = cfg.grid()
    out = Path(cfg.outDir)
    out.mkdir(parents=True, exist_ok=True)
    started = time.perf_counter()
    if cfg.emitFiles:
        files = out / "files"
        files.mkdir(exist_ok=True)
        records = []
        for rc in grid.configs():
            art = harness.run_one_with_artifacts(rc)
            records.append(art.record)
            if art.record.ok:
                stem = f"k{rc.k}_m{rc.m}_r{rc.run_index}"
                (files / f"{stem}.system").write_bytes(art.system)
                (files / f"{stem}.errorT0").write_bytes(art.error_t0)
    else:
        records = harness.sweep(grid, workers=cfg.workers)
    elapsed = time.perf_counter() - started

    rows = harness.aggregate(records, cfg.klDirection)
    (out / "runs.csv").write_text(harness.runs_csv(records))
    (out / "aggregates.csv").write_text(harness.aggregates_csv(rows))
    (out / "aggregates_by_m.csv").write_text(
        harness.aggregates_csv(harness.aggregate_by_m(records, cfg.klDirection), by_m=True))
    (out / "config.json").write_text(cfg.to_json())

    failed = sum(not r.ok for r in records)
    print(f"{len(records)} runs ({failed} failed) in {elapsed:.1f}s -> {out}")
    try:
        print(f"rho* (k = {cfg.kStar}) = {harness.threshold_rho(rows, cfg.kStar):.6f}")
    except NoSuchOrder:
        print(f"rho* undefined: k = {cfg.kStar} not in the sweep")
    return 1 if failed else 0


def cmd_plot(args) -> int:
    path = Path(args.aggregates)
    try:
        text = path.read_text()
    except OSError as exc:
        print(f"cannot read {path}: {exc}", file=sys.stderr)
        return 2
    rows = harness.read_aggregates_csv(text)
    if not rows:
        print(f"{path} holds no aggregate rows", file=sys.stderr)
        return 2
    needed = plot.FIGURES[args.figure][:3]
    for col in needed:
        if col not in rows[0]:
            print(f"{path} is missing column {col}", file=sys.stderr)
            return 2
    k_star = args.kstar
    if k_star is None and (path.parent / "config.json").exists():
        k_star = json.loads((path.parent / "config.json").read_text()).get("kStar")
    marker, label = None, ""
    if k_star is not None and args.figure.endswith("-vs-rho"):
        if "k" not in rows[0] or "meanRho" not in rows[0]:
            print(f"{path} is missing column k or meanRho", file=sys.stderr)
            return 2
        match = [r for r in rows if r["k"] and int(r["k"]) == k_star]
        if match:
            marker, label = float(match[0]["meanRho"]), f"rho* (k={k_star})"
    series = plot.select_series(rows, args.figure)
    if not series.x:
        print(f"{path} has no plottable values for {args.figure}", file=sys.stderr)
        return 2
    svg_path = Path(args.out) if args.out else path.parent / f"{args.figure}.svg"
    svg_path.parent.mkdir(parents=True, exist_ok=True)
    title = args.figure if k_star is None else f"{args.figure}, k* = {k_star}"
    svg_path.write_text(plot.render_svg(series, args.figure, title, marker, label))
    svg_path.with_suffix(".csv").write_text(plot.sidecar_csv(series, args.figure))
    print(f"wrote {svg_path} and {svg_path.with_suffix('.csv')}")
    return 0


def cmd_oracle() -> int:
    failed = 0
    for check in oracles.run_all():
        print(f"{'PASS' if check.ok else 'FAIL'}  {check.name}: {check.detail}")
        failed += not check.ok
    return 1 if failed else 0


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "oracle":
        return cmd_oracle()
    if args.command == "plot":
        return cmd_plot(args)
    if args.command == "sweep" and not (args.config or args.paper_defaults):
        parser.error("sweep needs --config FILE or --paper-defaults")
    cfg = resolve_config(args, parser)
    return cmd_run(cfg) if args.command == "run" else cmd_sweep(cfg)


if __name__ == "__main__":
    sys.exit(main())
