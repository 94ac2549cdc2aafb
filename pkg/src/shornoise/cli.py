"""Command-line front end.

Commands:
    spectrum   effective-model readout distribution (closed form for
               systematic errors, direct summation otherwise)
    circuit    gate-level simulation of the same distribution
    ensemble   mean and spread over many quenched realizations
    sweep      success probability versus error magnitude, with threshold
    factor     full pipeline: measure, recover the order, split the modulus

Spectra are written as `c,probability` CSV files with a key=value
metadata sidecar next to them. Exit codes: 0 on success, 1 on runtime
failure, 2 on invalid arguments.
"""
from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errmodel import ErrorMode, ErrorModel, Xorshift64Star, derive_stream_seed
from .experiment import (
    DEFAULT_ETA,
    ensemble_spectrum,
    peak_report,
    threshold_sweep,
    write_sweep_csv,
)
from .numth import DEFAULT_MULTIPLIER_BOUND, ShorInstance, gcd, recover_order
from .qcircuit import circuit_spectrum, prepare_period_state, qft_noisy, sample_outcomes
from .qcircuit import GateErrorPlan
from .spectrum import (
    Spectrum,
    combined_spectrum,
    noiseless_spectrum,
    spectrum_metadata,
    systematic_spectrum_closed_form,
    write_spectrum_csv,
)

DEFAULT_SEED = 42


def _parse_seed(text: str) -> int:
    try:
        value = int(text, 0)
    except ValueError:
        raise argparse.ArgumentTypeError(f"seed {text!r} is not an integer")
    if value < 0:
        raise argparse.ArgumentTypeError("seed must be nonnegative")
    return value & ((1 << 64) - 1)


def _add_instance_options(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group("instance")
    group.add_argument("--N", type=int, help="modulus to factor")
    group.add_argument("--y", type=int, help="base coprime to the modulus")
    group.add_argument("--L", type=int, help="register width in qubits (synthetic)")
    group.add_argument("--r", type=int, help="period of the support (synthetic)")
    group.add_argument("--l", type=int, default=0, help="support offset (default 0)")


def _add_model_options(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group("error model")
    group.add_argument(
        "--model",
        choices=[mode.value for mode in ErrorMode],
        default="none",
        help="error mode (default none)",
    )
    group.add_argument("--delta0", type=float, default=0.0, help="constant error part")
    group.add_argument("--smax", type=float, default=0.0, help="uniform half-width")
    group.add_argument("--sigma", type=float, default=0.0, help="gaussian std dev")
    group.add_argument(
        "--amp-errors",
        action="store_true",
        help="enable amplitude errors (default off)",
    )
    group.add_argument(
        "--init-delta",
        type=float,
        default=0.0,
        help="preparation-weight miscalibration (default 0)",
    )


def _add_run_options(parser: argparse.ArgumentParser, with_out: bool = True) -> None:
    group = parser.add_argument_group("run")
    group.add_argument(
        "--seed",
        type=_parse_seed,
        default=DEFAULT_SEED,
        help="64-bit seed, decimal or 0x-hex (default 42)",
    )
    group.add_argument(
        "--realizations", type=int, default=1, help="realization count (default 1)"
    )
    group.add_argument(
        "--normalize",
        action="store_true",
        help="scale the written spectrum to unit total (default off)",
    )
    if with_out:
        group.add_argument("--out", required=True, help="output CSV path")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="shornoise",
        description="Order-finding readout spectra under miscalibrated gates",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_spectrum = sub.add_parser(
        "spectrum", help="effective-model spectrum (closed form or direct sum)"
    )
    p_circuit = sub.add_parser("circuit", help="gate-level simulated spectrum")
    p_ensemble = sub.add_parser("ensemble", help="mean spectrum over realizations")
    for p in (p_spectrum, p_circuit, p_ensemble):
        _add_instance_options(p)
        _add_model_options(p)
        _add_run_options(p)

    p_sweep = sub.add_parser("sweep", help="threshold sweep over error magnitudes")
    _add_instance_options(p_sweep)
    _add_model_options(p_sweep)
    _add_run_options(p_sweep)
    p_sweep.add_argument("--mag-start", type=float, default=0.0)
    p_sweep.add_argument("--mag-stop", type=float, required=True)
    p_sweep.add_argument("--mag-step", type=float, required=True)
    p_sweep.add_argument("--eta", type=float, default=DEFAULT_ETA)
    p_sweep.add_argument(
        "--multiplier-bound", type=int, default=DEFAULT_MULTIPLIER_BOUND
    )

    p_factor = sub.add_parser("factor", help="measure, recover the order, factor")
    _add_instance_options(p_factor)
    _add_model_options(p_factor)
    _add_run_options(p_factor, with_out=False)
    p_factor.add_argument("--shots", type=int, default=100)
    p_factor.add_argument(
        "--multiplier-bound", type=int, default=DEFAULT_MULTIPLIER_BOUND
    )

    return parser


def _instance_from_args(
    parser: argparse.ArgumentParser, args: argparse.Namespace
) -> ShorInstance:
    has_factoring = args.N is not None or args.y is not None
    has_synthetic = args.L is not None or args.r is not None
    if has_factoring == has_synthetic:
        parser.error("give exactly one of --N/--y or --L/--r")
    if has_factoring:
        if args.N is None or args.y is None:
            parser.error("--N and --y must be given together")
        return ShorInstance.from_factoring(args.N, args.y, offset=args.l)
    if args.L is None or args.r is None:
        parser.error("--L and --r must be given together")
    return ShorInstance.synthetic_instance(args.L, args.r, offset=args.l)


def _model_from_args(args: argparse.Namespace) -> ErrorModel:
    return ErrorModel(
        mode=ErrorMode(args.model),
        delta0=args.delta0,
        s_max=args.smax,
        sigma0=args.sigma,
        include_amplitude_errors=args.amp_errors,
        init_delta=args.init_delta,
    )


def _write_spectrum_outputs(
    spec: Spectrum, out: str, seed: int, normalize: bool
) -> Spectrum:
    if normalize:
        spec = spec.normalize()
    write_spectrum_csv(spec, out)
    Path(out + ".meta").write_text(spectrum_metadata(spec, seed=seed))
    return spec


def _peak_summary(spec: Spectrum) -> str:
    report = peak_report(spec)
    positions = report.positions()
    return f"peaks at {positions} with shifts {report.shifts}"


def _run_spectrum(args: argparse.Namespace, parser: argparse.ArgumentParser) -> int:
    inst = _instance_from_args(parser, args)
    model = _model_from_args(args)
    if model.mode is ErrorMode.NONE and model.init_delta == 0.0:
        spec = noiseless_spectrum(inst)
    elif (
        model.mode is ErrorMode.SYSTEMATIC
        and not model.include_amplitude_errors
        and model.init_delta == 0.0
    ):
        spec = systematic_spectrum_closed_form(inst, model.delta0)
    else:
        spec = combined_spectrum(inst, model, args.seed)
    spec = _write_spectrum_outputs(spec, args.out, args.seed, args.normalize)
    print(f"spectrum: {_peak_summary(spec)}")
    return 0


def _run_circuit(args: argparse.Namespace, parser: argparse.ArgumentParser) -> int:
    inst = _instance_from_args(parser, args)
    model = _model_from_args(args)
    spec = circuit_spectrum(inst, model, args.seed)
    spec = _write_spectrum_outputs(spec, args.out, args.seed, args.normalize)
    print(f"circuit: {_peak_summary(spec)}")
    return 0


def _run_ensemble(args: argparse.Namespace, parser: argparse.ArgumentParser) -> int:
    inst = _instance_from_args(parser, args)
    model = _model_from_args(args)
    mean_spec, std = ensemble_spectrum(inst, model, args.realizations, args.seed)
    mean_spec = _write_spectrum_outputs(mean_spec, args.out, args.seed, args.normalize)
    print(f"ensemble: {_peak_summary(mean_spec)}; max std {float(np.max(std)):.3e}")
    return 0


def _run_sweep(args: argparse.Namespace, parser: argparse.ArgumentParser) -> int:
    inst = _instance_from_args(parser, args)
    if inst.modulus is None:
        parser.error("sweep needs --N/--y so recovered orders can be checked")
    mode = ErrorMode(args.model)
    if mode is ErrorMode.NONE:
        parser.error("sweep needs --model systematic, uniform, or gaussian")
    if args.mag_step <= 0:
        parser.error("--mag-step must be positive")
    count = int(round((args.mag_stop - args.mag_start) / args.mag_step)) + 1
    magnitudes = [args.mag_start + i * args.mag_step for i in range(count)]
    result = threshold_sweep(
        inst,
        mode,
        magnitudes,
        n_realizations=args.realizations,
        eta=args.eta,
        master_seed=args.seed,
        multiplier_bound=args.multiplier_bound,
    )
    write_sweep_csv(result, args.out)
    threshold = "none" if result.threshold is None else f"{result.threshold:g}"
    print(
        f"sweep: threshold={threshold} baseline={result.baseline:.6f} "
        f"eta={result.eta:g}"
    )
    return 0


def _run_factor(args: argparse.Namespace, parser: argparse.ArgumentParser) -> int:
    if args.N is None or args.y is None:
        parser.error("factor needs --N and --y")
    if args.shots < 1:
        parser.error("--shots must be >= 1")
    inst = ShorInstance.from_factoring(args.N, args.y, offset=args.l)
    model = _model_from_args(args)
    state = prepare_period_state(inst, model.init_delta)
    plan = GateErrorPlan.sample(model, inst.n_qubits, args.seed)
    qft_noisy(state, plan)
    rng = Xorshift64Star(derive_stream_seed(args.seed, 0))
    outcomes = sample_outcomes(state, args.shots, rng)
    for c in outcomes:
        order = recover_order(
            int(c), inst.register_size, args.N, args.y, args.multiplier_bound
        )
        if order is None or order % 2 == 1:
            continue
        half = pow(args.y, order // 2, args.N)
        if half == args.N - 1:
            continue
        f1 = gcd(half - 1, args.N)
        f2 = gcd(half + 1, args.N)
        factors = sorted({f for f in (f1, f2) if 1 < f < args.N})
        if factors:
            print(f"factor: recovered r={order}; factors {factors}")
            return 0
    print("factor: no nontrivial factor found; retry with new y")
    return 0


_RUNNERS = {
    "spectrum": _run_spectrum,
    "circuit": _run_circuit,
    "ensemble": _run_ensemble,
    "sweep": _run_sweep,
    "factor": _run_factor,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _RUNNERS[args.command](args, parser)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
