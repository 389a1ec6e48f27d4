"""Command-line entry point: ccdf, ber, bench, and single-frame optimize."""

import argparse
import json
import sys

import numpy as np

from .channel import SCHEME_STREAM, trial_rng
from .harness import (
    SCHEMES,
    ExperimentSpec,
    make_scheme,
    run_bench,
    run_ber,
    run_ccdf,
    spec_field_names,
    _trial_frame,
)
from .transforms import TransformPlan, papr_db, second_papr_db

_DIM_KEYS = ("n_subcarriers", "n_clusters", "cluster_size", "n_active")
_SMALL_DIMS = {"n_subcarriers": 16, "n_clusters": 2, "cluster_size": 8, "n_active": 2}


def _common_flags(parser: argparse.ArgumentParser, seed_required: bool):
    parser.add_argument("--config", help="JSON file of flat spec key/value pairs")
    parser.add_argument("--scheme", help="|".join(SCHEMES))
    parser.add_argument("--trials", type=int, dest="n_trials")
    parser.add_argument("--seed", type=int, required=seed_required,
                        help="master seed (mandatory for publication runs)")
    parser.add_argument("--out", dest="out_dir", help="output directory for CSV/JSON")
    parser.add_argument("--snr", dest="snr_db",
                        help="comma-separated SNR points in dB")
    parser.add_argument("--levels", type=int, help="angular levels for ilp-p4")
    parser.add_argument("--eta", type=float, help="heuristic improvement threshold")
    parser.add_argument("--slm-candidates", type=int, dest="slm_candidates")
    parser.add_argument("--pts-blocks", type=int, dest="pts_blocks")
    parser.add_argument("--samples", choices=("N", "NR"),
                        help="peak sample range for the sign solvers")
    parser.add_argument("--subcarriers", type=int, dest="n_subcarriers")
    parser.add_argument("--clusters", type=int, dest="n_clusters")
    parser.add_argument("--cluster-size", type=int, dest="cluster_size")
    parser.add_argument("--active", type=int, dest="n_active")
    parser.add_argument("--amplitude", type=float)
    parser.add_argument("--oversampling", type=int)
    parser.add_argument("--workers", type=int)


def _load_file(path: str) -> dict:
    with open(path, "r", encoding="utf-8") as fh:
        data = json.load(fh)
    known = set(spec_field_names())
    unknown = set(data) - known
    if unknown:
        raise SystemExit(f"unknown config keys: {sorted(unknown)}")
    return data


def _build_spec(args: argparse.Namespace, scheme_override: str | None = None) -> ExperimentSpec:
    values: dict = {}
    if args.config:
        values.update(_load_file(args.config))
    cli_keys = set(spec_field_names())
    explicit_dims = any(k in values for k in _DIM_KEYS)
    for key in cli_keys:
        cli_val = getattr(args, key, None)
        if cli_val is not None:
            values[key] = cli_val
            if key in _DIM_KEYS:
                explicit_dims = True
    if getattr(args, "samples", None) is not None:
        values["sample_range"] = args.samples.lower()
    if isinstance(values.get("snr_db"), str):
        values["snr_db"] = tuple(float(s) for s in values["snr_db"].split(","))
    if scheme_override is not None:
        values["scheme"] = scheme_override
    # the discretized integer program is exactly solvable only at small sizes
    if values.get("scheme") == "ilp-p4" and not explicit_dims:
        values.update(_SMALL_DIMS)
    try:
        return ExperimentSpec(**values)
    except (TypeError, ValueError) as exc:
        raise SystemExit(str(exc))


def _cmd_ccdf(args) -> int:
    spec = _build_spec(args)
    curve = run_ccdf(spec)
    for prob in (1e-1, 1e-2, 1e-3):
        if prob >= 1.0 / spec.n_trials:
            print(f"{spec.scheme}: PAPR at CCDF {prob:g} = "
                  f"{curve.threshold_at(prob):.2f} dB")
    if spec.out_dir:
        print(f"wrote {spec.out_dir}/{spec.scheme}_ccdf.csv")
    return 0


def _cmd_ber(args) -> int:
    spec = _build_spec(args)
    if not spec.snr_db:
        raise SystemExit("ber needs --snr (comma-separated dB list)")
    rows = run_ber(spec)
    print("snr_db,cer,cer_se,ber,ber_se")
    for row in rows:
        print(f"{row['snr_db']:g},{row['cer']:.6g},{row['cer_se']:.3g},"
              f"{row['ber']:.6g},{row['ber_se']:.3g}")
    return 0


def _cmd_bench(args) -> int:
    schemes = (args.scheme or "heuristic,slm,pts").split(",")
    specs = []
    for scheme in schemes:
        specs.append(_build_spec(args, scheme_override=scheme.strip()))
    table = run_bench(specs, n_trials=specs[0].n_trials)
    print("scheme,mean_time_s,n_frames")
    for row in table.rows:
        print(f"{row.scheme},{row.mean_time_s:.6g},{row.n_frames}")
    return 0


def _cmd_optimize(args) -> int:
    spec = _build_spec(args)
    config = spec.frame_config()
    plan = TransformPlan.from_config(config)
    frame = _trial_frame(spec, config, 0)
    before_db = papr_db(plan.transform(frame.values), config.mean_power)
    second_db = second_papr_db(plan.transform(frame.values), config.mean_power)
    print(f"config: N={config.n_subcarriers} B={config.n_clusters} "
          f"L={config.cluster_size} K={config.n_active} R={config.oversampling}")
    print(f"support: {frame.support.tolist()}")
    print(f"constant-loading PAPR: {before_db:.3f} dB (second peak {second_db:.3f} dB)")
    scheme = make_scheme(spec, config)
    if scheme is None:
        print("scheme none: nothing to optimize")
        return 0
    loaded = scheme(frame, trial_rng(spec.seed, 0, SCHEME_STREAM))
    after_db = papr_db(plan.transform(loaded.values), config.mean_power)
    loading = loaded.values[loaded.support] / config.amplitude
    with np.printoptions(precision=4, suppress=True):
        if np.allclose(loading.imag, 0.0):
            print(f"chosen signs: {np.real(loading).astype(int)}")
        else:
            print(f"chosen phases (rad): {np.angle(loading) % (2 * np.pi)}")
    print(f"{spec.scheme} PAPR: {after_db:.3f} dB "
          f"(reduction {before_db - after_db:.3f} dB)")
    return 0


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="ncim",
        description="PAPR reduction experiments for non-coherent OFDM with "
                    "index modulation",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    specs = (
        ("ccdf", _cmd_ccdf, True, "empirical PAPR exceedance curve"),
        ("ber", _cmd_ber, True, "index/bit error rates vs SNR"),
        ("bench", _cmd_bench, True, "per-scheme timing on a common frame set"),
        ("optimize", _cmd_optimize, False, "single-frame debug run"),
    )
    for name, func, seed_required, help_text in specs:
        p = sub.add_parser(name, help=help_text)
        _common_flags(p, seed_required)
        p.set_defaults(func=func)
    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
