"""Finite-sample photocurrent-fluctuation records for phase and LO scans.

Sampling model: at each phase the pair of ac-coupled detector currents is
drawn from a bivariate normal whose covariance is the exact photon-number
covariance of the two splitter outputs (including detector efficiencies and
mode-mismatch) scaled by the gains, plus additive electronic noise:

* uncorrelated dark noise per channel,
* correlated dark noise common to both channels,
* classical LO intensity noise, common to both channels and proportional to
  the mean LO flux on each detector.

Every segment draws from its own seed-derived substream, so segments are
reproducible independently of evaluation order.  Mode mismatch (visibility v)
reduces the interfering LO amplitude to v*E_L; the orthogonal LO remainder
only adds shot noise.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from . import analysis
from .analysis import CorrelationEstimate
from .errors import ConfigError
from .gaussian import (
    GaussianState,
    LocalOscillator,
    apply_loss,
    from_quadrature_variances,
    photocurrent_covariance,
    two_mode_output,
    vacuum,
)
from .splitter import BeamSplitter, symmetric_splitter

TWO_PI = 2.0 * np.pi

SCHEDULE_DEFAULT = ("blocked_lo_a", "phases", "blocked_lo_b", "blocked_signal")

# segment kinds (also used as substream domain tags)
KIND_PHASE = "phase"
KIND_BLOCKED_LO_A = "blocked_lo_a"
KIND_BLOCKED_LO_B = "blocked_lo_b"
KIND_BLOCKED_SIGNAL = "blocked_signal"
KIND_LO_PHASE = "lo_phase"
KIND_LO_PHASE_PI = "lo_phase_pi"

_KIND_IDS = {
    KIND_PHASE: 0,
    KIND_BLOCKED_LO_A: 1,
    KIND_BLOCKED_LO_B: 2,
    KIND_BLOCKED_SIGNAL: 3,
    KIND_LO_PHASE: 4,
    KIND_LO_PHASE_PI: 5,
}

# independent noise sources get their own substreams so that switching one
# on or off never perturbs the draws of the others (paired-seed tests)
_SRC_QUANTUM, _SRC_DARK1, _SRC_DARK2, _SRC_DARK_CORR, _SRC_RIN = range(5)


@dataclass(frozen=True)
class SignalParams:
    """Principal quadrature variances, squeezed-axis angle and displacement."""

    v_min: float
    v_max: float
    angle: float
    alpha: complex

    def __post_init__(self):
        from_quadrature_variances(self.v_min, self.v_max, self.angle, self.alpha)

    def state(self, amplitude_scale: float = 1.0) -> GaussianState:
        return from_quadrature_variances(
            self.v_min, self.v_max, self.angle, self.alpha * amplitude_scale
        )


@dataclass(frozen=True)
class DetectorConfig:
    """Efficiencies, gains, and additive noise variances of the two detectors.

    Dark-noise variances are expressed in squared photon-number units at the
    detector input (they are scaled by the squared gains); lo_excess is the
    relative intensity-noise variance of the LO.
    """

    eta1: float = 1.0
    eta2: float = 1.0
    gain1: float = 1.0
    gain2: float = 1.0
    dark_uncorr1: float = 0.0
    dark_uncorr2: float = 0.0
    dark_corr: float = 0.0
    lo_excess: float = 0.0

    def __post_init__(self):
        if not (0.0 <= self.eta1 <= 1.0 and 0.0 <= self.eta2 <= 1.0):
            raise ValueError("efficiencies must lie in [0, 1]")
        if self.gain1 <= 0 or self.gain2 <= 0:
            raise ValueError("gains must be positive")
        for name in ("dark_uncorr1", "dark_uncorr2", "dark_corr", "lo_excess"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be >= 0")


@dataclass(frozen=True)
class ExperimentConfig:
    """Full description of one simulated run."""

    signal: SignalParams
    e_l: float
    phases: tuple
    samples_per_phase: int
    seed: int
    blocked_samples: int | None = None
    drift_rate: float = 0.0
    detector: DetectorConfig = field(default_factory=DetectorConfig)
    splitter: BeamSplitter = field(default_factory=lambda: symmetric_splitter(0.14))
    visibility: float = 1.0
    schedule: tuple = SCHEDULE_DEFAULT
    sig_threshold: float = 3.0
    lo_scan_e_l: tuple = ()
    lo_scan_phi: float = 0.75 * np.pi

    def __post_init__(self):
        if self.samples_per_phase < 2:
            raise ConfigError("samples_per_phase must be >= 2")
        if len(self.phases) == 0:
            raise ConfigError("phases must be non-empty")
        if self.e_l < 0:
            raise ConfigError("lo field strength must be >= 0")
        if self.drift_rate < 0:
            raise ConfigError("drift_rate must be >= 0")
        if not 0.0 < self.visibility <= 1.0:
            raise ConfigError("visibility must lie in (0, 1]")
        if self.seed < 0:
            raise ConfigError("seed must be a non-negative integer")
        if sorted(self.schedule) != sorted(SCHEDULE_DEFAULT):
            raise ConfigError(
                f"schedule must be a permutation of {SCHEDULE_DEFAULT}, got {self.schedule}"
            )
        if self.blocked_samples is not None and self.blocked_samples < 2:
            raise ConfigError("blocked_samples must be >= 2")
        object.__setattr__(self, "phases", tuple(float(p) for p in self.phases))
        object.__setattr__(self, "lo_scan_e_l", tuple(float(e) for e in self.lo_scan_e_l))

    @property
    def n_blocked(self) -> int:
        if self.blocked_samples is not None:
            return self.blocked_samples
        return 10 * self.samples_per_phase

    def with_seed(self, seed: int) -> "ExperimentConfig":
        return replace(self, seed=seed)


@dataclass(frozen=True)
class SegmentSpec:
    """Where a segment sits in the acquisition (kind, index, block) and what it
    measures (phi, e_l, n samples)."""

    kind: str
    index: int
    phi: float
    e_l: float
    block: int
    n: int


@dataclass(frozen=True)
class Segment:
    spec: SegmentSpec
    c1: np.ndarray
    c2: np.ndarray

    def pairs(self) -> np.ndarray:
        return np.column_stack([self.c1, self.c2])


@dataclass(frozen=True)
class PhaseScanRecord:
    """Sampled fluctuation pairs for every segment plus the config snapshot."""

    kind: str  # "phase_scan" | "lo_scan"
    segments: tuple
    config: ExperimentConfig

    def phase_segments(self):
        return [s for s in self.segments if s.spec.kind == KIND_PHASE]

    def lo_segments(self):
        return [s for s in self.segments if s.spec.kind in (KIND_LO_PHASE, KIND_LO_PHASE_PI)]

    def blocked_lo_runs(self):
        a = self._only(KIND_BLOCKED_LO_A)
        b = self._only(KIND_BLOCKED_LO_B)
        return a, b

    def blocked_signal_run(self):
        return self._only(KIND_BLOCKED_SIGNAL)

    def _only(self, kind):
        found = [s for s in self.segments if s.spec.kind == kind]
        if len(found) != 1:
            raise ValueError(f"record holds {len(found)} segments of kind {kind!r}")
        return found[0]


def drift_factor(cfg: ExperimentConfig, block: int) -> float:
    """Relative signal-amplitude scale at the given acquisition block."""
    return 1.0 + cfg.drift_rate * block


def _signal_state(cfg: ExperimentConfig, kind: str, scale: float) -> GaussianState:
    if kind == KIND_BLOCKED_SIGNAL:
        return vacuum(1)
    return cfg.signal.state(scale)


def segment_statistics(cfg: ExperimentConfig, spec: SegmentSpec):
    """Exact sampling covariance of one segment.

    Returns (sigma_quantum, sigma_total, lo_flux) where sigma_quantum is the
    gain-scaled photocurrent covariance, sigma_total additionally carries the
    dark and LO-noise terms, and lo_flux is the detected mean LO photon flux
    per channel (drives the classical LO noise).
    """
    det = cfg.detector
    e_l = 0.0 if spec.kind in (KIND_BLOCKED_LO_A, KIND_BLOCKED_LO_B) else spec.e_l
    state = _signal_state(cfg, spec.kind, drift_factor(cfg, spec.block))
    lo = LocalOscillator(cfg.visibility * e_l, spec.phi)
    joint = apply_loss(two_mode_output(state, lo, cfg.splitter), (det.eta1, det.eta2))
    pcov = photocurrent_covariance(joint)
    etas = np.array([det.eta1, det.eta2])
    lo_ports = np.array([cfg.splitter.rl2, cfg.splitter.tl2])
    # non-interfering LO remainder: independent coherent field, shot noise only
    pcov[np.diag_indices(2)] += etas * (1.0 - cfg.visibility**2) * e_l**2 * lo_ports
    lo_flux = etas * e_l**2 * lo_ports
    gains = np.array([det.gain1, det.gain2])
    sigma_q = np.outer(gains, gains) * pcov
    sigma_total = sigma_q.copy()
    sigma_total += det.dark_corr * np.outer(gains, gains)
    sigma_total[np.diag_indices(2)] += gains**2 * np.array(
        [det.dark_uncorr1, det.dark_uncorr2]
    )
    sigma_total += det.lo_excess * np.outer(gains * lo_flux, gains * lo_flux)
    return sigma_q, sigma_total, lo_flux


def _chol2(sigma: np.ndarray) -> np.ndarray:
    a = np.sqrt(max(sigma[0, 0], 0.0))
    b = sigma[1, 0] / a if a > 0 else 0.0
    c = np.sqrt(max(sigma[1, 1] - b * b, 0.0))
    return np.array([[a, 0.0], [b, c]])


def _segment_rng(cfg: ExperimentConfig, spec: SegmentSpec, source: int):
    seq = np.random.SeedSequence([cfg.seed, _KIND_IDS[spec.kind], spec.index, source])
    return np.random.default_rng(seq)


def draw_segment(cfg: ExperimentConfig, spec: SegmentSpec):
    """Draw the (c1, c2) fluctuation samples of one segment."""
    det = cfg.detector
    sigma_q, _, lo_flux = segment_statistics(cfg, spec)
    chol = _chol2(sigma_q)
    z = _segment_rng(cfg, spec, _SRC_QUANTUM).standard_normal((spec.n, 2))
    c = z @ chol.T
    gains = np.array([det.gain1, det.gain2])
    if det.dark_uncorr1 > 0:
        c[:, 0] += gains[0] * np.sqrt(det.dark_uncorr1) * _segment_rng(
            cfg, spec, _SRC_DARK1
        ).standard_normal(spec.n)
    if det.dark_uncorr2 > 0:
        c[:, 1] += gains[1] * np.sqrt(det.dark_uncorr2) * _segment_rng(
            cfg, spec, _SRC_DARK2
        ).standard_normal(spec.n)
    if det.dark_corr > 0:
        common = _segment_rng(cfg, spec, _SRC_DARK_CORR).standard_normal(spec.n)
        c += np.sqrt(det.dark_corr) * common[:, None] * gains[None, :]
    if det.lo_excess > 0 and np.any(lo_flux > 0):
        rin = _segment_rng(cfg, spec, _SRC_RIN).standard_normal(spec.n)
        c += np.sqrt(det.lo_excess) * rin[:, None] * (gains * lo_flux)[None, :]
    return c[:, 0], c[:, 1]


def phase_scan_plan(cfg: ExperimentConfig):
    """Ordered segment specs of a phase scan, following cfg.schedule."""
    specs = []
    block = 0
    for entry in cfg.schedule:
        if entry == "phases":
            for i, phi in enumerate(cfg.phases):
                specs.append(
                    SegmentSpec(KIND_PHASE, i, float(phi), cfg.e_l, block, cfg.samples_per_phase)
                )
                block += 1
        else:
            specs.append(SegmentSpec(entry, 0, 0.0, cfg.e_l, block, cfg.n_blocked))
            block += 1
    return specs


def lo_scan_plan(cfg: ExperimentConfig, phi: float, e_l_grid):
    """Ordered segment specs of an LO-strength scan at phases phi and phi+pi."""
    grid = [float(e) for e in e_l_grid]
    if len(grid) == 0:
        raise ValueError("LO grid must be non-empty")
    if grid[0] != 0.0:
        raise ValueError("LO grid must start with 0 (blocked LO)")
    if any(e < 0 for e in grid):
        raise ValueError("LO grid values must be >= 0")
    specs = []
    block = 0
    for j, e in enumerate(grid):
        specs.append(SegmentSpec(KIND_LO_PHASE, j, phi, e, block, cfg.samples_per_phase))
        block += 1
        specs.append(
            SegmentSpec(KIND_LO_PHASE_PI, j, (phi + np.pi) % TWO_PI, e, block, cfg.samples_per_phase)
        )
        block += 1
    specs.append(SegmentSpec(KIND_BLOCKED_SIGNAL, 0, phi, cfg.e_l, block, cfg.n_blocked))
    return specs


def iter_segments(cfg: ExperimentConfig, specs):
    """Lazily draw (spec, c1, c2) per segment; keeps memory per-segment."""
    for spec in specs:
        c1, c2 = draw_segment(cfg, spec)
        yield spec, c1, c2


def simulate_phase_scan(cfg: ExperimentConfig) -> PhaseScanRecord:
    """Materialize the full phase-scan record (all samples in memory)."""
    segments = tuple(
        Segment(spec, c1, c2) for spec, c1, c2 in iter_segments(cfg, phase_scan_plan(cfg))
    )
    return PhaseScanRecord(kind="phase_scan", segments=segments, config=cfg)


def simulate_lo_scan(cfg: ExperimentConfig, phi: float, e_l_grid) -> PhaseScanRecord:
    """Materialize an LO-strength scan record at phases phi and phi + pi."""
    segments = tuple(
        Segment(spec, c1, c2)
        for spec, c1, c2 in iter_segments(cfg, lo_scan_plan(cfg, phi, e_l_grid))
    )
    return PhaseScanRecord(kind="lo_scan", segments=segments, config=cfg)


@dataclass(frozen=True)
class PhaseScanEstimates:
    """Per-phase correlation estimates plus the calibration results."""

    phis: np.ndarray
    estimates: tuple
    blocked_lo: tuple  # (run a, run b)
    blocked_signal: CorrelationEstimate
    config: ExperimentConfig


@dataclass(frozen=True)
class LoScanEstimates:
    """Correlation estimates over the LO grid at the scanned phase pair."""

    phi: float
    e_values: np.ndarray
    at_phi: tuple
    at_phi_pi: tuple
    blocked_signal: CorrelationEstimate
    config: ExperimentConfig


def scan_correlations(cfg: ExperimentConfig) -> PhaseScanEstimates:
    """Run the phase scan streaming segment-by-segment (full-scale friendly)."""
    per_phase = {}
    cal = {}
    for spec, c1, c2 in iter_segments(cfg, phase_scan_plan(cfg)):
        est = analysis.estimate_correlation(np.column_stack([c1, c2]))
        if spec.kind == KIND_PHASE:
            per_phase[spec.index] = est
        else:
            cal[spec.kind] = est
    ests = tuple(per_phase[i] for i in range(len(cfg.phases)))
    return PhaseScanEstimates(
        phis=np.array(cfg.phases),
        estimates=ests,
        blocked_lo=(cal[KIND_BLOCKED_LO_A], cal[KIND_BLOCKED_LO_B]),
        blocked_signal=cal[KIND_BLOCKED_SIGNAL],
        config=cfg,
    )


def scan_lo_correlations(cfg: ExperimentConfig, phi: float, e_l_grid) -> LoScanEstimates:
    """Run the LO-strength scan streaming segment-by-segment."""
    at_phi = {}
    at_pi = {}
    blocked_signal = None
    for spec, c1, c2 in iter_segments(cfg, lo_scan_plan(cfg, phi, e_l_grid)):
        est = analysis.estimate_correlation(np.column_stack([c1, c2]))
        if spec.kind == KIND_LO_PHASE:
            at_phi[spec.index] = est
        elif spec.kind == KIND_LO_PHASE_PI:
            at_pi[spec.index] = est
        else:
            blocked_signal = est
    grid = [float(e) for e in e_l_grid]
    return LoScanEstimates(
        phi=float(phi),
        e_values=np.array(grid),
        at_phi=tuple(at_phi[j] for j in range(len(grid))),
        at_phi_pi=tuple(at_pi[j] for j in range(len(grid))),
        blocked_signal=blocked_signal,
        config=cfg,
    )


def estimates_from_record(record: PhaseScanRecord):
    """Reduce a materialized record to the estimate structures."""
    if record.kind == "phase_scan":
        cfg = record.config
        segs = sorted(record.phase_segments(), key=lambda s: s.spec.index)
        a, b = record.blocked_lo_runs()
        return PhaseScanEstimates(
            phis=np.array([s.spec.phi for s in segs]),
            estimates=tuple(analysis.estimate_correlation(s.pairs()) for s in segs),
            blocked_lo=(
                analysis.estimate_correlation(a.pairs()),
                analysis.estimate_correlation(b.pairs()),
            ),
            blocked_signal=analysis.estimate_correlation(record.blocked_signal_run().pairs()),
            config=cfg,
        )
    at_phi, at_pi, e_by_index = {}, {}, {}
    phi = None
    for seg in record.lo_segments():
        est = analysis.estimate_correlation(seg.pairs())
        e_by_index[seg.spec.index] = seg.spec.e_l
        if seg.spec.kind == KIND_LO_PHASE:
            at_phi[seg.spec.index] = est
            phi = seg.spec.phi
        else:
            at_pi[seg.spec.index] = est
    order = sorted(e_by_index)
    return LoScanEstimates(
        phi=float(phi),
        e_values=np.array([e_by_index[j] for j in order]),
        at_phi=tuple(at_phi[j] for j in order),
        at_phi_pi=tuple(at_pi[j] for j in order),
        blocked_signal=analysis.estimate_correlation(record.blocked_signal_run().pairs()),
        config=record.config,
    )
