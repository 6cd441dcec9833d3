"""Experiment runner CLI: run / sweep / verify.

Exit codes: 0 success, 1 config error, 2 runtime error.
"""

import argparse
import itertools
import json
import math
import os
import sys
from pathlib import Path

from .experiment import (
    PRESET_SWEEPS,
    PRESETS,
    ExperimentConfig,
    RunRecord,
    preset_config,
    run_experiment,
)
from .risk import RiskCurve


class ConfigError(ValueError):
    pass


def _fmt(v: float) -> str:
    return format(float(v), ".17g")


def emit_csv(record: RunRecord, path) -> None:
    lines = ["n,error,log10_n,log10_error,cum_work,storage"]
    for n, err, work, storage in record.curve.checkpoints:
        lines.append(
            f"{n},{_fmt(err)},{_fmt(math.log10(n))},{_fmt(math.log10(err))},{work},{storage}"
        )
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8", newline="\n")


def read_csv_curve(path) -> RiskCurve:
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    if not lines or lines[0] != "n,error,log10_n,log10_error,cum_work,storage":
        raise ValueError(f"{path}: unexpected CSV header")
    rows = []
    for line in lines[1:]:
        f = line.split(",")
        rows.append((int(f[0]), float(f[1]), int(f[4]), int(f[5])))
    return RiskCurve(rows)


def _parse_value(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError:
        return text


def _apply_overrides(doc: dict, overrides) -> dict:
    doc = dict(doc)
    for item in overrides or []:
        if "=" not in item:
            raise ConfigError(f"override {item!r} is not key=value")
        key, _, raw = item.partition("=")
        if key not in ExperimentConfig.__dataclass_fields__:
            raise ConfigError(f"unknown config field {key!r}")
        doc[key] = _parse_value(raw)
    return doc


def _load_config_doc(args) -> dict:
    if args.preset:
        if args.preset not in PRESETS:
            raise ConfigError(
                f"unknown preset {args.preset!r}; valid presets: {', '.join(sorted(PRESETS))}"
            )
        return dict(PRESETS[args.preset])
    if args.config:
        try:
            return json.loads(Path(args.config).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as e:
            raise ConfigError(f"cannot read config {args.config}: {e}")
    raise ConfigError("one of --preset or --config is required")


def _emit_record(record: RunRecord, out_dir) -> None:
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    base = record.config.name
    emit_csv(record, out_dir / f"{base}.csv")
    (out_dir / f"{base}.json").write_text(
        json.dumps(record.to_dict(), indent=2) + "\n", encoding="utf-8"
    )
    slope = "n/a" if record.slope is None else f"{record.slope.slope:+.4f}"
    print(f"{base}: {len(record.curve.checkpoints)} checkpoints, slope {slope}, "
          f"{record.wall_time_s:.1f}s -> {out_dir / (base + '.csv')}")


def _cmd_run(args) -> int:
    doc = _apply_overrides(_load_config_doc(args), args.override)
    cfg = ExperimentConfig.from_dict(doc)
    _emit_record(run_experiment(cfg), args.out)
    return 0


def _sweep_configs(doc: dict, preset_name=None):
    sweep_lists = {k: v for k, v in doc.items() if isinstance(v, list)}
    if not sweep_lists and preset_name in PRESET_SWEEPS:
        sweep_lists = dict(PRESET_SWEEPS[preset_name])
    base = {k: v for k, v in doc.items() if not isinstance(v, list)}
    if not sweep_lists:
        yield ExperimentConfig.from_dict(base)
        return
    keys = sorted(sweep_lists)
    for combo in itertools.product(*(sweep_lists[k] for k in keys)):
        d = dict(base)
        d.update(zip(keys, combo))
        tag = "_".join(f"{k}{v:g}" if isinstance(v, float) else f"{k}{v}" for k, v in zip(keys, combo))
        d["name"] = f"{d.get('name', 'sweep')}_{tag}"
        yield ExperimentConfig.from_dict(d)


def _cmd_sweep(args) -> int:
    doc = _apply_overrides(_load_config_doc(args), args.override)
    configs = list(_sweep_configs(doc, args.preset))
    workers = int(os.environ.get("TKSGD_WORKERS", "1"))
    if workers > 1 and len(configs) > 1:
        import multiprocessing as mp

        with mp.Pool(min(workers, len(configs))) as pool:
            records = pool.map(run_experiment, configs)
    else:
        records = [run_experiment(c) for c in configs]
    for record in records:
        _emit_record(record, args.out)
    return 0


def _cmd_verify(_args) -> int:
    from .verify import run_all

    return 0 if run_all() else 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tksgd", description="Truncated-kernel SGD experiment harness")
    sub = parser.add_subparsers(dest="command", required=True)

    for name, fn in (("run", _cmd_run), ("sweep", _cmd_sweep)):
        p = sub.add_parser(name)
        p.add_argument("--preset", help="named preset (example1..example6, baselines)")
        p.add_argument("--config", help="path to a JSON config document")
        p.add_argument("--override", action="append", metavar="KEY=VALUE")
        p.add_argument("--out", default=".", help="output directory")
        p.set_defaults(fn=fn)

    v = sub.add_parser("verify", help="run the property suite (no experiment)")
    v.set_defaults(fn=_cmd_verify)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except (ConfigError, ValueError, KeyError) as e:
        print(f"config error: {e}", file=sys.stderr)
        return 1
    except Exception as e:  # runtime failures map to exit 2
        print(f"runtime error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
