"""Readout spectra of the order-finding register under gate errors.

The register state before readout is supported on basis values
a_j = offset + j*order for j = 0 .. M-1. A Fourier readout with per-term
phase errors d'_j and amplitude errors d_j sends it to the distribution

    P_c = (r / q**2) * | sum_j w_j (1 + d_j) exp(i (2 pi c / q + d'_j) a_j) |**2

where q is the register size, r the order, and w_j an optional
preparation weight. For constant phase error d and full period support
the sum telescopes into the closed form

    P_c = (r / q**2) * sin(M th)**2 / sin(th)**2,   th = pi c r / q + d r / 2

whose numerator equals sin(d q / 2)**2 whenever M r == q. Both routes are
implemented here and agree to floating-point accuracy.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace
from enum import Enum
from pathlib import Path

import numpy as np

from .errmodel import ErrorModel, sample_amplitude_errors, sample_phase_errors
from .numth import ShorInstance

# Below this magnitude the closed-form denominator is treated as singular
# and the affected c values fall back to direct summation.
SINGULAR_SIN_FLOOR = 1e-9


class SpectrumMethod(Enum):
    NOISELESS = "noiseless"
    DIRECT_SUM = "direct_sum"
    CLOSED_FORM = "closed_form"
    CIRCUIT = "circuit"


@dataclass(frozen=True)
class Spectrum:
    """A readout distribution P_c for c = 0 .. register_size - 1.

    Values are relative probabilities unless normalized is set; spectra
    from the unitary circuit route sum to one by construction.
    singular_fallback records that some closed-form entries were computed
    by direct summation because the denominator vanished.
    """

    values: np.ndarray
    method: SpectrumMethod
    instance: ShorInstance
    normalized: bool = False
    realization_seed: int | None = None
    singular_fallback: bool = False
    model_label: str = "none"

    def __post_init__(self) -> None:
        values = np.asarray(self.values, dtype=float)
        object.__setattr__(self, "values", values)
        if values.ndim != 1 or len(values) != self.instance.register_size:
            raise ValueError("values must have one entry per register value")
        if np.any(values < -1e-15):
            raise ValueError("probabilities must be nonnegative")

    @property
    def register_size(self) -> int:
        return len(self.values)

    def total(self) -> float:
        return float(np.sum(self.values))

    def normalize(self) -> Spectrum:
        """Return a copy scaled to unit total."""
        total = self.total()
        if total <= 0.0:
            raise ValueError("cannot normalize an all-zero spectrum")
        return replace(self, values=self.values / total, normalized=True)


def init_error_weights(n_qubits: int, delta: float) -> np.ndarray:
    """Preparation weights 1 + delta*(2*popcount(a) - n) for all a < 2**n.

    Models a constant miscalibration of the state-preparation rotations:
    each set bit pulls the weight up by delta, each clear bit down.
    """
    if not 1 <= n_qubits <= 24:
        raise ValueError(f"n_qubits must be in [1, 24], got {n_qubits}")
    a = np.arange(1 << n_qubits, dtype=np.uint32)
    # vectorized popcount (SWAR)
    v = a - ((a >> 1) & 0x55555555)
    v = (v & 0x33333333) + ((v >> 2) & 0x33333333)
    v = (v + (v >> 4)) & 0x0F0F0F0F
    bits = ((v * 0x01010101) >> 24).astype(np.int64)
    return 1.0 + delta * (2.0 * bits - n_qubits)


def _assemble(
    inst: ShorInstance,
    phase_errors: np.ndarray,
    amp_errors: np.ndarray | None,
    init_weights: np.ndarray | None,
) -> np.ndarray:
    """Per-term complex coefficients placed on the support positions."""
    m = inst.support_count
    support = np.asarray(inst.support_values(), dtype=np.int64)
    phase_errors = np.asarray(phase_errors, dtype=float)
    if phase_errors.shape != (m,):
        raise ValueError(f"phase_errors must have length {m}")
    if amp_errors is None:
        amp_errors = np.zeros(m)
    amp_errors = np.asarray(amp_errors, dtype=float)
    if amp_errors.shape != (m,):
        raise ValueError(f"amp_errors must have length {m}")
    coeff = (1.0 + amp_errors) * np.exp(1j * phase_errors * support)
    if init_weights is not None:
        init_weights = np.asarray(init_weights, dtype=float)
        if init_weights.shape != (inst.register_size,):
            raise ValueError(
                f"init_weights must cover the register, length {inst.register_size}"
            )
        coeff = coeff * init_weights[support]
    placed = np.zeros(inst.register_size, dtype=complex)
    placed[support] = coeff
    return placed


def direct_spectrum(
    inst: ShorInstance,
    phase_errors: np.ndarray,
    amp_errors: np.ndarray | None = None,
    init_weights: np.ndarray | None = None,
    method: SpectrumMethod = SpectrumMethod.DIRECT_SUM,
    model_label: str = "custom",
    realization_seed: int | None = None,
) -> Spectrum:
    """Evaluate the readout distribution by direct summation.

    Args:
        inst: register geometry (size, order, offset, support count).
        phase_errors: per-term phase errors d'_j, length support_count.
        amp_errors: per-term amplitude errors d_j, same length; zeros when
            omitted.
        init_weights: optional preparation weights indexed by basis value,
            length register_size; the support positions are picked out.

    Returns:
        Spectrum of relative probabilities (exactly normalized only when
        all amplitude factors and weights are one).
    """
    placed = _assemble(inst, phase_errors, amp_errors, init_weights)
    q = inst.register_size
    # sum_j z_j exp(2 pi i c a_j / q) for every c at once
    transform = q * np.fft.ifft(placed)
    values = (inst.order / q**2) * np.abs(transform) ** 2
    return Spectrum(
        values=values,
        method=method,
        instance=inst,
        realization_seed=realization_seed,
        model_label=model_label,
    )


def noiseless_spectrum(inst: ShorInstance) -> Spectrum:
    """Readout distribution with every gate exact.

    When the order divides the register size this is r/q**2 * M**2 at the
    multiples of q/r and zero elsewhere; otherwise the peaks broaden and
    the same direct summation covers it.
    """
    zeros = np.zeros(inst.support_count)
    return direct_spectrum(
        inst, zeros, method=SpectrumMethod.NOISELESS, model_label="none"
    )


def _direct_value_at(inst: ShorInstance, delta: float, c: int) -> float:
    support = np.asarray(inst.support_values(), dtype=np.int64)
    angles = (2.0 * math.pi * c / inst.register_size + delta) * support
    s = np.sum(np.exp(1j * angles))
    return float(inst.order / inst.register_size**2 * abs(s) ** 2)


def systematic_spectrum_closed_form(inst: ShorInstance, delta: float) -> Spectrum:
    """Closed-form readout distribution for a constant phase error delta.

    Evaluates (r/q**2) * sin(M*th)**2 / sin(th)**2 with
    th = pi*c*r/q + delta*r/2 at every c. Where |sin(th)| falls below
    SINGULAR_SIN_FLOOR (the geometric sum degenerates, e.g. at the peaks
    for delta = 0) the value is computed by direct summation instead and
    the spectrum is flagged.
    """
    q = inst.register_size
    r = inst.order
    m = inst.support_count
    c = np.arange(q)
    theta = math.pi * r / q * c + delta * r / 2.0
    denom = np.sin(theta)
    numer = np.sin(m * theta)
    singular = np.abs(denom) < SINGULAR_SIN_FLOOR
    safe_denom = np.where(singular, 1.0, denom)
    values = (r / q**2) * (numer / safe_denom) ** 2
    if np.any(singular):
        for ci in np.nonzero(singular)[0]:
            values[ci] = _direct_value_at(inst, delta, int(ci))
    return Spectrum(
        values=values,
        method=SpectrumMethod.CLOSED_FORM,
        instance=inst,
        singular_fallback=bool(np.any(singular)),
        model_label=f"systematic delta={delta!r}",
    )


def combined_spectrum(
    inst: ShorInstance, model: ErrorModel, seed: int
) -> Spectrum:
    """One realization of the readout distribution under an error model.

    Phase and amplitude errors are drawn once for the whole spectrum
    (quenched draws: a realization is one miscalibrated apparatus, not a
    per-shot fluctuation). Preparation weights enter when the model's
    init_delta is nonzero.
    """
    m = inst.support_count
    phase = sample_phase_errors(model, m, seed)
    amp = sample_amplitude_errors(model, m, seed)
    weights = None
    if model.init_delta != 0.0:
        weights = init_error_weights(inst.n_qubits, model.init_delta)
    return direct_spectrum(
        inst,
        phase,
        amp,
        weights,
        method=SpectrumMethod.DIRECT_SUM,
        model_label=model.mode.value,
        realization_seed=seed,
    )


def total_variation_distance(first: Spectrum, second: Spectrum) -> float:
    """Total-variation distance between two spectra, normalizing both."""
    p = first.normalize().values
    s = second.normalize().values
    if len(p) != len(s):
        raise ValueError("spectra must have the same register size")
    return float(0.5 * np.sum(np.abs(p - s)))


def spectrum_metadata(spec: Spectrum, seed: int | None = None) -> str:
    """key=value metadata block describing how a spectrum was produced."""
    inst = spec.instance
    shown_seed = seed if seed is not None else spec.realization_seed
    lines = [
        f"method={spec.method.value}",
        f"q={inst.register_size}",
        f"r={inst.order}",
        f"l={inst.offset}",
        f"model={spec.model_label}",
        f"seed={shown_seed if shown_seed is not None else 'none'}",
        f"normalized={str(spec.normalized).lower()}",
    ]
    if inst.synthetic:
        lines.append("synthetic=true")
    if not inst.full_period_support:
        lines.append(f"support_count={inst.support_count}")
    if spec.singular_fallback:
        lines.append("singular_fallback=true")
    return "\n".join(lines) + "\n"


def write_spectrum_csv(spec: Spectrum, path: str | Path) -> None:
    """Write `c,probability` rows with 12 significant digits after the header."""
    lines = ["c,probability"]
    for c, value in enumerate(spec.values):
        lines.append(f"{c},{value:.12e}")
    Path(path).write_text("\n".join(lines) + "\n")


def read_spectrum_csv(path: str | Path) -> np.ndarray:
    """Parse a spectrum CSV back into its probability column."""
    lines = Path(path).read_text().strip().splitlines()
    if not lines or lines[0] != "c,probability":
        raise ValueError(f"{path} is not a spectrum CSV")
    return np.array([float(line.split(",")[1]) for line in lines[1:]])
