"""Flat key=value experiment configuration, presets, and (de)serialization.

The file format is plain text, one ``key = value`` per line, ``#`` comments.
Keys carry unit suffixes (``_db``, ``_uw``, ``_rad``).  The LO strength may be
given directly (``lo_field_strength``) or as an optical power plus a single
calibration constant (``lo_power_uw`` and ``lo_amp_per_sqrt_uw``); amplitudes
scale with the square root of power.
"""

from __future__ import annotations

import math

from .detector import SCHEDULE_DEFAULT, DetectorConfig, ExperimentConfig, SignalParams
from .errors import ConfigError
from .splitter import BeamSplitter

_FLOAT_KEYS = {
    "squeezing_db",
    "antisqueezing_db",
    "squeeze_angle_rad",
    "alpha_re",
    "alpha_im",
    "lo_field_strength",
    "lo_power_uw",
    "lo_amp_per_sqrt_uw",
    "drift_rate",
    "splitter_ts2",
    "splitter_tl2",
    "splitter_rs2",
    "splitter_rl2",
    "visibility",
    "eta1",
    "eta2",
    "gain1",
    "gain2",
    "dark_uncorr1",
    "dark_uncorr2",
    "dark_corr",
    "lo_excess",
    "sig_threshold",
    "lo_scan_phase_rad",
}
_INT_KEYS = {"n_phases", "samples_per_phase", "blocked_samples", "seed"}
_LIST_KEYS = {"lo_scan_field_strengths", "lo_scan_powers_uw"}
_STR_KEYS = {"preset", "schedule"}
_ALL_KEYS = _FLOAT_KEYS | _INT_KEYS | _LIST_KEYS | _STR_KEYS

_BASE = {
    "squeezing_db": "-2.7",
    "antisqueezing_db": "5.5",
    "squeeze_angle_rad": repr(math.pi / 2),
    "alpha_re": "3.0",
    "alpha_im": "0.0",
    "lo_power_uw": "275.0",
    "lo_amp_per_sqrt_uw": repr(3.0 / math.sqrt(284.0)),
    "n_phases": "120",
    "samples_per_phase": "458000",
    "blocked_samples": "4580000",
    "seed": "20250809",
    "drift_rate": "0.0",
    "splitter_ts2": "0.86",
    "splitter_tl2": "0.86",
    "splitter_rs2": "0.14",
    "splitter_rl2": "0.14",
    "visibility": "0.96",
    "eta1": "0.94",
    "eta2": "0.94",
    "gain1": "1.0",
    "gain2": "1.0",
    "dark_uncorr1": "0.0",
    "dark_uncorr2": "0.0",
    "dark_corr": "0.0",
    "lo_excess": "0.0",
    "sig_threshold": "3.0",
    "lo_scan_powers_uw": "0,117,166,216,275",
    "lo_scan_phase_rad": repr(0.75 * math.pi),
    "schedule": ",".join(SCHEDULE_DEFAULT),
}

_QUICK = {"n_phases": "60", "samples_per_phase": "20000", "blocked_samples": "200000"}

PRESETS = {
    # full scale: 120 phases x 4.58e5 samples, 14:86 splitter, 96% visibility
    "paper": dict(_BASE),
    "paper-quick": {**_BASE, **_QUICK},
    "coherent": {**_BASE, **_QUICK, "squeezing_db": "0.0", "antisqueezing_db": "0.0"},
    "thermal": {
        **_BASE,
        **_QUICK,
        "squeezing_db": "4.0",
        "antisqueezing_db": "4.0",
        "alpha_re": "1.5",
    },
}


def parse_config_text(text: str) -> dict:
    """Parse ``key = value`` lines into a flat string dict."""
    flat = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in _ALL_KEYS:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        flat[key] = value
    return flat


def load_config(path) -> ExperimentConfig:
    with open(path, "r", encoding="utf-8") as fh:
        flat = parse_config_text(fh.read())
    return build_config(flat)


def preset_config(name: str) -> ExperimentConfig:
    if name not in PRESETS:
        raise ConfigError(f"unknown preset {name!r}; choose from {sorted(PRESETS)}")
    return build_config(dict(PRESETS[name]))


def _get_float(flat: dict, key: str) -> float:
    try:
        return float(flat[key])
    except ValueError as exc:
        raise ConfigError(f"key {key!r}: not a number: {flat[key]!r}") from exc


def _get_int(flat: dict, key: str) -> int:
    try:
        return int(flat[key])
    except ValueError as exc:
        raise ConfigError(f"key {key!r}: not an integer: {flat[key]!r}") from exc


def _get_float_list(flat: dict, key: str):
    try:
        return tuple(float(tok) for tok in flat[key].split(",") if tok.strip() != "")
    except ValueError as exc:
        raise ConfigError(f"key {key!r}: not a comma-separated number list") from exc


def build_config(flat: dict) -> ExperimentConfig:
    """Build an ExperimentConfig from a flat string dict (preset-aware)."""
    if "preset" in flat and flat["preset"] not in PRESETS:
        raise ConfigError(f"unknown preset {flat['preset']!r}")
    merged = dict(PRESETS[flat["preset"]]) if "preset" in flat else dict(_BASE)
    # explicit field strengths replace the default power parametrization
    if "lo_field_strength" in flat:
        merged.pop("lo_power_uw", None)
    if "lo_scan_field_strengths" in flat:
        merged.pop("lo_scan_powers_uw", None)
    merged.update({k: v for k, v in flat.items() if k != "preset"})

    v_min = 10.0 ** (_get_float(merged, "squeezing_db") / 10.0)
    v_max = 10.0 ** (_get_float(merged, "antisqueezing_db") / 10.0)
    alpha = complex(_get_float(merged, "alpha_re"), _get_float(merged, "alpha_im"))
    try:
        signal = SignalParams(
            v_min=v_min, v_max=v_max, angle=_get_float(merged, "squeeze_angle_rad"), alpha=alpha
        )
        splitter = BeamSplitter(
            ts2=_get_float(merged, "splitter_ts2"),
            tl2=_get_float(merged, "splitter_tl2"),
            rs2=_get_float(merged, "splitter_rs2"),
            rl2=_get_float(merged, "splitter_rl2"),
        )
        detector = DetectorConfig(
            eta1=_get_float(merged, "eta1"),
            eta2=_get_float(merged, "eta2"),
            gain1=_get_float(merged, "gain1"),
            gain2=_get_float(merged, "gain2"),
            dark_uncorr1=_get_float(merged, "dark_uncorr1"),
            dark_uncorr2=_get_float(merged, "dark_uncorr2"),
            dark_corr=_get_float(merged, "dark_corr"),
            lo_excess=_get_float(merged, "lo_excess"),
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc

    if "lo_field_strength" in merged and "lo_power_uw" in merged:
        raise ConfigError("give either lo_field_strength or lo_power_uw, not both")
    if "lo_field_strength" in merged:
        e_l = _get_float(merged, "lo_field_strength")
        calib = None
    else:
        calib = _get_float(merged, "lo_amp_per_sqrt_uw")
        e_l = calib * math.sqrt(_get_float(merged, "lo_power_uw"))

    if "lo_scan_field_strengths" in merged and "lo_scan_powers_uw" in merged:
        raise ConfigError("give either lo_scan_field_strengths or lo_scan_powers_uw, not both")
    if "lo_scan_field_strengths" in merged:
        lo_grid = _get_float_list(merged, "lo_scan_field_strengths")
    elif "lo_scan_powers_uw" in merged:
        if calib is None:
            calib = _get_float(merged, "lo_amp_per_sqrt_uw")
        lo_grid = tuple(calib * math.sqrt(p) for p in _get_float_list(merged, "lo_scan_powers_uw"))
    else:
        lo_grid = ()

    n_phases = _get_int(merged, "n_phases")
    if n_phases < 1:
        raise ConfigError("n_phases must be >= 1")
    phases = tuple(2.0 * math.pi * i / n_phases for i in range(n_phases))

    try:
        return ExperimentConfig(
            signal=signal,
            e_l=e_l,
            phases=phases,
            samples_per_phase=_get_int(merged, "samples_per_phase"),
            seed=_get_int(merged, "seed"),
            blocked_samples=_get_int(merged, "blocked_samples"),
            drift_rate=_get_float(merged, "drift_rate"),
            detector=detector,
            splitter=splitter,
            visibility=_get_float(merged, "visibility"),
            schedule=tuple(merged["schedule"].split(",")),
            sig_threshold=_get_float(merged, "sig_threshold"),
            lo_scan_e_l=lo_grid,
            lo_scan_phi=_get_float(merged, "lo_scan_phase_rad"),
        )
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def config_to_flat(cfg: ExperimentConfig) -> dict:
    """Canonical flat echo of a config (field strengths resolved)."""
    det, bs = cfg.detector, cfg.splitter
    flat = {
        "squeezing_db": repr(10.0 * math.log10(cfg.signal.v_min)),
        "antisqueezing_db": repr(10.0 * math.log10(cfg.signal.v_max)),
        "squeeze_angle_rad": repr(cfg.signal.angle),
        "alpha_re": repr(cfg.signal.alpha.real),
        "alpha_im": repr(cfg.signal.alpha.imag),
        "lo_field_strength": repr(cfg.e_l),
        "n_phases": str(len(cfg.phases)),
        "samples_per_phase": str(cfg.samples_per_phase),
        "blocked_samples": str(cfg.n_blocked),
        "seed": str(cfg.seed),
        "drift_rate": repr(cfg.drift_rate),
        "splitter_ts2": repr(bs.ts2),
        "splitter_tl2": repr(bs.tl2),
        "splitter_rs2": repr(bs.rs2),
        "splitter_rl2": repr(bs.rl2),
        "visibility": repr(cfg.visibility),
        "eta1": repr(det.eta1),
        "eta2": repr(det.eta2),
        "gain1": repr(det.gain1),
        "gain2": repr(det.gain2),
        "dark_uncorr1": repr(det.dark_uncorr1),
        "dark_uncorr2": repr(det.dark_uncorr2),
        "dark_corr": repr(det.dark_corr),
        "lo_excess": repr(det.lo_excess),
        "sig_threshold": repr(cfg.sig_threshold),
        "lo_scan_phase_rad": repr(cfg.lo_scan_phi),
        "schedule": ",".join(cfg.schedule),
    }
    if cfg.lo_scan_e_l:
        flat["lo_scan_field_strengths"] = ",".join(repr(e) for e in cfg.lo_scan_e_l)
    return flat


def dump_config(cfg: ExperimentConfig) -> str:
    flat = config_to_flat(cfg)
    return "".join(f"{key} = {flat[key]}\n" for key in sorted(flat))
