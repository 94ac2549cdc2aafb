"""Ensembles, peak reports, recovery success, and threshold sweeps."""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path

import numpy as np

from .errmodel import ErrorMode, ErrorModel, derive_stream_seed
from .numth import DEFAULT_MULTIPLIER_BOUND, ShorInstance, recover_order
from .spectrum import Spectrum, SpectrumMethod, combined_spectrum

DEFAULT_HEIGHT_FLOOR_FRACTION = 0.1
DEFAULT_ETA = 0.5


@dataclass(frozen=True)
class PeakReport:
    """Local maxima of a spectrum matched against the ideal peak grid.

    peaks holds (position, height) pairs sorted by position;
    reference_positions is the ideal grid k*q/r for k = 0 .. r-1; shifts
    gives, per peak, the signed cyclic distance to its nearest reference.
    """

    peaks: list[tuple[int, float]]
    reference_positions: list[float]
    shifts: list[int]

    def positions(self) -> list[int]:
        return [position for position, _ in self.peaks]


def _cyclic_shift(position: int, reference: float, size: int) -> float:
    raw = (position - reference) % size
    if raw > size / 2:
        raw -= size
    return raw


def reference_positions(inst: ShorInstance) -> list[float]:
    q = inst.register_size
    r = inst.order
    if q % r == 0:
        return [float(k * (q // r)) for k in range(r)]
    return [k * q / r for k in range(r)]


def peak_report(
    spec: Spectrum,
    height_floor_fraction: float = DEFAULT_HEIGHT_FLOOR_FRACTION,
) -> PeakReport:
    """Find cyclic local maxima above a height floor and their shifts.

    A position qualifies when it is at least as high as both cyclic
    neighbors, strictly higher than at least one of them, and reaches
    height_floor_fraction of the global maximum. A flat spectrum
    therefore yields an empty peak list.
    """
    if not 0.0 <= height_floor_fraction <= 1.0:
        raise ValueError("height_floor_fraction must be in [0, 1]")
    values = spec.values
    floor = height_floor_fraction * float(np.max(values))
    left = np.roll(values, 1)
    right = np.roll(values, -1)
    is_peak = (
        (values >= left)
        & (values >= right)
        & ((values > left) | (values > right))
        & (values >= floor)
    )
    positions = np.nonzero(is_peak)[0]
    references = reference_positions(spec.instance)
    size = spec.register_size
    peaks = [(int(p), float(values[p])) for p in positions]
    shifts = []
    for position, _ in peaks:
        nearest = min(
            references, key=lambda ref: abs(_cyclic_shift(position, ref, size))
        )
        shifts.append(int(round(_cyclic_shift(position, nearest, size))))
    return PeakReport(peaks=peaks, reference_positions=references, shifts=shifts)


def ensemble_spectrum(
    inst: ShorInstance,
    model: ErrorModel,
    n_realizations: int,
    master_seed: int,
) -> tuple[Spectrum, np.ndarray]:
    """Mean spectrum over quenched realizations, plus the per-c std dev.

    Realization i draws from the seed derived from (master_seed, i);
    accumulation runs in fixed index order so reruns are bit-identical.
    Deterministic models collapse to a single realization since every
    draw would repeat it.

    Returns:
        (mean spectrum, population standard deviation per register value).
    """
    if n_realizations < 1:
        raise ValueError(f"n_realizations must be >= 1, got {n_realizations}")
    effective = 1 if model.deterministic else n_realizations
    total = np.zeros(inst.register_size)
    total_sq = np.zeros(inst.register_size)
    for i in range(effective):
        seed_i = derive_stream_seed(master_seed, i)
        spec = combined_spectrum(inst, model, seed_i)
        total += spec.values
        total_sq += spec.values**2
    mean = total / effective
    variance = np.maximum(total_sq / effective - mean**2, 0.0)
    std = np.sqrt(variance)
    label = model.mode.value
    if effective != n_realizations:
        label += " (deterministic, collapsed to 1 realization)"
    mean_spec = Spectrum(
        values=mean,
        method=SpectrumMethod.DIRECT_SUM,
        instance=inst,
        model_label=label,
    )
    return mean_spec, std


@lru_cache(maxsize=32)
def _recovery_mask(
    q: int, modulus: int, base: int, order: int, multiplier_bound: int
) -> tuple[bool, ...]:
    return tuple(
        recover_order(c, q, modulus, base, multiplier_bound) == order
        for c in range(q)
    )


def success_probability(
    spec: Spectrum,
    multiplier_bound: int = DEFAULT_MULTIPLIER_BOUND,
) -> float:
    """Probability mass on register values whose recovery yields the order.

    The spectrum is normalized internally, so relative spectra are fine.
    The instance must carry (modulus, base) for recovery to be defined.
    """
    inst = spec.instance
    if inst.modulus is None or inst.base is None:
        raise ValueError("success_probability needs an instance with modulus and base")
    mask = np.array(
        _recovery_mask(
            inst.register_size, inst.modulus, inst.base, inst.order, multiplier_bound
        )
    )
    normalized = spec.normalize().values
    return float(np.sum(normalized[mask]))


@dataclass(frozen=True)
class SweepResult:
    """Success probability versus error magnitude, with the threshold.

    threshold is the largest magnitude whose success stays at or above
    eta * baseline, or None when the baseline itself is zero.
    """

    mode: ErrorMode
    magnitudes: list[float]
    success_probs: list[float]
    baseline: float
    threshold: float | None
    eta: float
    n_realizations: int


def _model_at_magnitude(mode: ErrorMode, magnitude: float) -> ErrorModel:
    if mode is ErrorMode.SYSTEMATIC:
        return ErrorModel(mode=mode, delta0=magnitude)
    if mode is ErrorMode.UNIFORM:
        return ErrorModel(mode=mode, s_max=magnitude)
    if mode is ErrorMode.GAUSSIAN:
        return ErrorModel(mode=mode, sigma0=magnitude)
    raise ValueError("threshold sweeps need a systematic, uniform, or gaussian mode")


def threshold_sweep(
    inst: ShorInstance,
    mode: ErrorMode,
    magnitudes: list[float],
    n_realizations: int = 1,
    eta: float = DEFAULT_ETA,
    master_seed: int = 42,
    multiplier_bound: int = DEFAULT_MULTIPLIER_BOUND,
) -> SweepResult:
    """Sweep the error magnitude and report the largest safe value.

    For each magnitude the mode's width parameter is set to it
    (systematic: delta0, uniform: s_max, gaussian: sigma0) and the
    success probability is averaged over n_realizations quenched
    realizations with seeds derived from (master_seed, magnitude index,
    realization index). Deterministic modes use one realization per
    magnitude regardless of n_realizations. The baseline is the success
    probability at zero error, computed through the same path, so a
    leading magnitude of 0.0 reproduces it exactly.
    """
    if not magnitudes:
        raise ValueError("magnitudes must be nonempty")
    if any(m < 0 for m in magnitudes):
        raise ValueError("magnitudes must be nonnegative")
    if sorted(magnitudes) != list(magnitudes):
        raise ValueError("magnitudes must be ascending")
    if not 0.0 < eta <= 1.0:
        raise ValueError(f"eta must be in (0, 1], got {eta}")
    if n_realizations < 1:
        raise ValueError(f"n_realizations must be >= 1, got {n_realizations}")

    def mean_success(magnitude: float, magnitude_index: int) -> float:
        model = _model_at_magnitude(mode, magnitude)
        effective = 1 if model.deterministic or magnitude == 0.0 else n_realizations
        magnitude_seed = derive_stream_seed(master_seed, magnitude_index)
        acc = 0.0
        for i in range(effective):
            seed_i = derive_stream_seed(magnitude_seed, i)
            spec = combined_spectrum(inst, model, seed_i)
            acc += success_probability(spec, multiplier_bound)
        return acc / effective

    # Zero error is deterministic, so the magnitude index cannot matter.
    baseline = mean_success(0.0, 0)
    success_probs = [
        mean_success(magnitude, index) for index, magnitude in enumerate(magnitudes)
    ]
    if baseline == 0.0:
        threshold = None
    else:
        passing = [
            magnitude
            for magnitude, success in zip(magnitudes, success_probs)
            if success >= eta * baseline
        ]
        threshold = max(passing) if passing else None
    return SweepResult(
        mode=mode,
        magnitudes=list(magnitudes),
        success_probs=success_probs,
        baseline=baseline,
        threshold=threshold,
        eta=eta,
        n_realizations=n_realizations,
    )


def write_sweep_csv(result: SweepResult, path: str | Path) -> None:
    """Write magnitude,success rows plus a footer with the threshold."""
    lines = ["magnitude,success_probability"]
    for magnitude, success in zip(result.magnitudes, result.success_probs):
        lines.append(f"{magnitude:.12e},{success:.12e}")
    threshold = "none" if result.threshold is None else f"{result.threshold:.12e}"
    lines.append(
        f"# threshold={threshold} eta={result.eta!r} baseline={result.baseline:.12e}"
    )
    Path(path).write_text("\n".join(lines) + "\n")
