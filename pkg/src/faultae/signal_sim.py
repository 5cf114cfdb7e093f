"""Phenomenological three-phase waveform generator with injectable short-circuit faults.

A fault scales the involved phase currents, adds an exponentially decaying DC
offset at fault inception and sags the involved phase voltages. No network is
simulated; the detector only ever sees the resulting waveforms.
"""

from __future__ import annotations

import csv
import enum
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from .errors import ConfigError, SpecError

CHANNEL_NAMES = ("Ia", "Ib", "Ic", "Va", "Vb", "Vc")
PHASES = "ABC"
PHASE_ANGLES = {"A": 0.0, "B": -2.0 * np.pi / 3.0, "C": 2.0 * np.pi / 3.0}
CSV_HEADER = ("t",) + CHANNEL_NAMES + ("fault",)


class FaultType(str, enum.Enum):
    LG = "LG"
    LLG = "LLG"
    TLG = "TLG"
    LL = "LL"

    @property
    def n_phases(self) -> int:
        return {"LG": 1, "LLG": 2, "TLG": 3, "LL": 2}[self.value]

    @property
    def grounded(self) -> bool:
        return self is not FaultType.LL


DEFAULT_PHASES = {FaultType.LG: "A", FaultType.LLG: "AB", FaultType.TLG: "ABC", FaultType.LL: "AB"}


@dataclass(frozen=True)
class SimConfig:
    sample_interval: float = 5e-5
    system_frequency: float = 60.0
    duration: float = 1.0
    current_amplitude: float = 100.0
    voltage_amplitude: float = 20412.0
    noise_std: float = 0.01
    rng_seed: int = 0

    def __post_init__(self):
        if not self.sample_interval > 0:
            raise ConfigError(f"sample_interval must be positive, got {self.sample_interval}")
        if not self.system_frequency > 0:
            raise ConfigError(f"system_frequency must be positive, got {self.system_frequency}")
        if not self.duration > 0:
            raise ConfigError(f"duration must be positive, got {self.duration}")
        # tolerate float round-off in duration = k / f
        if self.n_samples < round(1.0 / (self.system_frequency * self.sample_interval)):
            raise ConfigError("duration must cover at least one full cycle")
        if self.samples_per_cycle < 8:
            raise ConfigError(f"only {self.samples_per_cycle} samples per cycle; need at least 8")
        if self.noise_std < 0:
            raise ConfigError("noise_std must be non-negative")
        if self.current_amplitude <= 0 or self.voltage_amplitude <= 0:
            raise ConfigError("amplitudes must be positive")

    @property
    def samples_per_cycle(self) -> int:
        return int(round(1.0 / (self.system_frequency * self.sample_interval)))

    @property
    def n_samples(self) -> int:
        return int(round(self.duration / self.sample_interval))


@dataclass(frozen=True)
class FaultSpec:
    fault_type: FaultType
    start_sample: int
    involved_phases: str = ""
    duration_samples: int = 2000
    current_scale: float = 8.0
    voltage_sag: float = 0.4
    dc_offset_tau: float = 0.02

    def __post_init__(self):
        try:
            ftype = FaultType(self.fault_type)
        except ValueError:
            raise SpecError(f"unknown fault type {self.fault_type!r}") from None
        object.__setattr__(self, "fault_type", ftype)
        phases = (self.involved_phases or DEFAULT_PHASES[ftype]).upper()
        if any(p not in PHASES for p in phases) or len(set(phases)) != len(phases):
            raise SpecError(f"invalid phase set {self.involved_phases!r}")
        if len(phases) != ftype.n_phases:
            raise SpecError(
                f"{ftype.value} fault involves {ftype.n_phases} phase(s), got {phases!r}"
            )
        object.__setattr__(self, "involved_phases", "".join(sorted(phases)))
        if self.start_sample < 0:
            raise SpecError("start_sample must be non-negative")
        if self.duration_samples < 1:
            raise SpecError("fault duration must be at least one sample")
        if self.current_scale <= 0:
            raise SpecError("current_scale must be positive")
        if not 0 < self.voltage_sag <= 1:
            raise SpecError("voltage_sag must lie in (0, 1]")
        if self.dc_offset_tau <= 0:
            raise SpecError("dc_offset_tau must be positive")

    @property
    def stop_sample(self) -> int:
        return self.start_sample + self.duration_samples

    @property
    def label(self) -> str:
        """Conventional name, e.g. AG, ABG, ABCG, AB."""
        return self.involved_phases + ("G" if self.fault_type.grounded else "")

    @classmethod
    def parse(cls, text: str) -> "FaultSpec":
        """Parse ``TYPE:PHASES:START[:DURATION]``, e.g. ``LG:A:2000:2000``."""
        parts = text.strip().split(":")
        if not 3 <= len(parts) <= 4:
            raise SpecError(f"fault spec {text!r} must look like TYPE:PHASES:START[:DURATION]")
        try:
            start = int(parts[2])
            kwargs = {"duration_samples": int(parts[3])} if len(parts) == 4 else {}
        except ValueError:
            raise SpecError(f"non-integer sample index in fault spec {text!r}") from None
        return cls(parts[0].upper(), start, parts[1], **kwargs)


@dataclass
class ThreePhaseSignal:
    """Six aligned channels (Ia, Ib, Ic, Va, Vb, Vc) and a per-sample fault mask."""

    sample_interval: float
    channels: np.ndarray
    fault_mask: np.ndarray
    fault_specs: tuple = ()
    nominal_current: float | None = field(default=None, compare=False)

    def __post_init__(self):
        self.channels = np.asarray(self.channels, dtype=np.float64)
        self.fault_mask = np.asarray(self.fault_mask, dtype=np.uint8)
        if self.channels.ndim != 2 or self.channels.shape[0] != 6:
            raise ValueError(f"channels must have shape (6, N), got {self.channels.shape}")
        if self.fault_mask.shape != (self.channels.shape[1],):
            raise ValueError("fault_mask length differs from channel length")
        self.fault_specs = tuple(self.fault_specs)

    def __len__(self):
        return self.channels.shape[1]

    def channel(self, name: str) -> np.ndarray:
        return self.channels[CHANNEL_NAMES.index(name)]

    def current(self, phase: str) -> np.ndarray:
        return self.channels[PHASES.index(phase)]

    def voltage(self, phase: str) -> np.ndarray:
        return self.channels[3 + PHASES.index(phase)]

    @property
    def times(self) -> np.ndarray:
        return np.arange(len(self)) * self.sample_interval

    def slice(self, start: int, stop: int) -> "ThreePhaseSignal":
        specs = tuple(s for s in self.fault_specs if s.start_sample < stop and s.stop_sample > start)
        specs = tuple(
            replace(
                s,
                start_sample=max(s.start_sample, start) - start,
                duration_samples=min(s.stop_sample, stop) - max(s.start_sample, start),
            )
            for s in specs
        )
        return ThreePhaseSignal(
            self.sample_interval,
            self.channels[:, start:stop].copy(),
            self.fault_mask[start:stop].copy(),
            specs,
            self.nominal_current,
        )

    def equals(self, other: "ThreePhaseSignal") -> bool:
        """Bit-exact comparison of channels and mask."""
        return (
            self.channels.shape == other.channels.shape
            and self.channels.tobytes() == other.channels.tobytes()
            and np.array_equal(self.fault_mask, other.fault_mask)
        )


def generate_clean(config: SimConfig) -> ThreePhaseSignal:
    """Balanced sinusoidal currents and voltages plus independent gaussian noise."""
    n = config.n_samples
    t = np.arange(n) * config.sample_interval
    omega = 2.0 * np.pi * config.system_frequency
    rng = np.random.default_rng(config.rng_seed)
    channels = np.empty((6, n))
    for i, p in enumerate(PHASES):
        channels[i] = config.current_amplitude * np.sin(omega * t + PHASE_ANGLES[p])
        channels[3 + i] = config.voltage_amplitude * np.sin(omega * t + PHASE_ANGLES[p])
    if config.noise_std > 0:
        amps = np.repeat([config.current_amplitude, config.voltage_amplitude], 3)
        channels += rng.standard_normal((6, n)) * (config.noise_std * amps)[:, None]
    return ThreePhaseSignal(
        config.sample_interval, channels, np.zeros(n, np.uint8), (), config.current_amplitude
    )


def _estimate_amplitude(signal: ThreePhaseSignal) -> float:
    clean = signal.fault_mask == 0
    currents = signal.channels[:3, clean] if clean.any() else signal.channels[:3]
    return float(np.sqrt(2.0 * np.mean(currents**2)))


def inject_fault(
    signal: ThreePhaseSignal, spec: FaultSpec, current_amplitude: float | None = None
) -> ThreePhaseSignal:
    """Return a copy of ``signal`` with ``spec`` applied over its sample interval."""
    n = len(signal)
    if spec.stop_sample > n:
        raise IndexError(
            f"fault interval [{spec.start_sample}, {spec.stop_sample}) exceeds signal length {n}"
        )
    if current_amplitude is None:
        current_amplitude = signal.nominal_current or _estimate_amplitude(signal)
    sl = slice(spec.start_sample, spec.stop_sample)
    channels = signal.channels.copy()
    elapsed = np.arange(spec.duration_samples) * signal.sample_interval
    dc = (spec.current_scale - 1.0) * current_amplitude * np.exp(-elapsed / spec.dc_offset_tau)

    rows = [PHASES.index(p) for p in spec.involved_phases]
    for r in rows:
        channels[r, sl] = channels[r, sl] * spec.current_scale + dc

    if spec.fault_type is FaultType.LL:
        a, b = 3 + rows[0], 3 + rows[1]
        common = 0.5 * (channels[a, sl] + channels[b, sl])
        half_diff = 0.5 * (channels[a, sl] - channels[b, sl])
        channels[a, sl] = common + spec.voltage_sag * half_diff
        channels[b, sl] = common - spec.voltage_sag * half_diff
    else:
        for r in rows:
            channels[3 + r, sl] *= spec.voltage_sag

    mask = signal.fault_mask.copy()
    mask[sl] = 1
    return ThreePhaseSignal(
        signal.sample_interval,
        channels,
        mask,
        signal.fault_specs + (spec,),
        signal.nominal_current,
    )


def default_fault_specs(n_samples: int, duration_samples: int = 2000) -> list[FaultSpec]:
    """AG, ABG, ABCG and AB faults, each followed by a clean gap of the same length."""
    types = [FaultType.LG, FaultType.LLG, FaultType.TLG, FaultType.LL]
    if n_samples < 2 * len(types) * duration_samples:
        raise SpecError(
            f"default scenario needs at least {2 * len(types) * duration_samples} samples"
        )
    return [
        FaultSpec(ft, duration_samples * (1 + 2 * i), duration_samples=duration_samples)
        for i, ft in enumerate(types)
    ]


def generate_dataset(config: SimConfig, specs: list[FaultSpec] | None = None) -> ThreePhaseSignal:
    """Clean signal with every fault in ``specs`` injected; ``None`` selects the default scenario."""
    if specs is None:
        specs = default_fault_specs(config.n_samples)
    ordered = sorted(specs, key=lambda s: s.start_sample)
    for prev, nxt in zip(ordered, ordered[1:]):
        if nxt.start_sample < prev.stop_sample:
            raise SpecError(f"fault intervals overlap: {prev.label}@{prev.start_sample} and "
                            f"{nxt.label}@{nxt.start_sample}")
    signal = generate_clean(config)
    for spec in specs:
        if spec.stop_sample > len(signal):
            raise SpecError(f"fault {spec.label}@{spec.start_sample} runs past the signal end")
        signal = inject_fault(signal, spec, config.current_amplitude)
    return signal


def write_csv(signal: ThreePhaseSignal, path) -> None:
    """Write ``t,Ia,Ib,Ic,Va,Vb,Vc,fault`` rows; values use shortest round-trip repr."""
    path = Path(path)
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(CSV_HEADER)
        dt = signal.sample_interval
        cols = signal.channels.T.tolist()
        for i, (row, flag) in enumerate(zip(cols, signal.fault_mask.tolist())):
            writer.writerow([f"{i * dt:.9f}", *map(repr, row), flag])
