"""Command-line entry point.

Subcommands:

* ``simulate``        write phase-scan (and, if configured, LO-scan) records
* ``analyze``         read records, emit fit report, per-phase and LO tables
* ``test``            read the analyze output, emit the determinant verdict
* ``reproduce-paper`` run the full pipeline on the built-in full-scale preset

Exit codes: 0 success, 2 configuration error, 3 data error, 4 test
precondition error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass

import numpy as np

from . import config as config_mod
from . import records, reports
from .analysis import BY_PHASE, CorrelationEstimate, SeparatedContributions
from .detector import estimates_from_record
from .errors import (
    AnomalousTermInaccessibleError,
    ConfigError,
    DataError,
    DegenerateDesignError,
    InsufficientDataError,
)
from .nonclassicality import classify_phase_range, squeezed_phases
from .pipeline import (
    PipelineResult,
    analyze_lo_estimates,
    analyze_phase_estimates,
    det_scan,
    run_pipeline,
)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_DATA = 3
EXIT_PRECONDITION = 4

PHASE_RECORD = "phase_scan.txt"
LO_RECORD = "lo_scan.txt"
SEPARATION_FILE = "separation.json"


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hccm",
        description="Virtual homodyne cross-correlation laboratory",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (
        ("simulate", "simulate scan records and write them to disk"),
        ("analyze", "estimate, fit, and separate contributions from records"),
        ("test", "run the determinant nonclassicality test on analyze output"),
        ("reproduce-paper", "full pipeline at the built-in full-scale preset"),
    ):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", help="path to a key=value config file")
        p.add_argument(
            "--preset",
            choices=sorted(config_mod.PRESETS),
            help="named built-in configuration",
        )
        p.add_argument("--out", default=".", help="output (and record) directory")
        p.add_argument("--seed", type=int, help="override the config seed")
        p.add_argument(
            "--format", choices=("text", "structured"), default="text", help="report format"
        )
    return parser


@dataclass(frozen=True)
class RunManifest:
    """What one CLI invocation is asked to do."""

    command: str
    out_dir: str
    config_path: str | None
    preset: str | None
    seed_override: int | None
    report_format: str  # "text" | "structured"

    @classmethod
    def from_args(cls, args) -> "RunManifest":
        return cls(
            command=args.command,
            out_dir=args.out,
            config_path=args.config,
            preset=args.preset,
            seed_override=args.seed,
            report_format=args.format,
        )

    def resolve_config(self, default_preset: str | None = None):
        if self.config_path and self.preset:
            raise ConfigError("give either --config or --preset, not both")
        if self.config_path:
            cfg = config_mod.load_config(self.config_path)
        elif self.preset:
            cfg = config_mod.preset_config(self.preset)
        elif default_preset:
            cfg = config_mod.preset_config(default_preset)
        else:
            raise ConfigError("one of --config or --preset is required")
        if self.seed_override is not None:
            if self.seed_override < 0:
                raise ConfigError("seed must be non-negative")
            cfg = cfg.with_seed(self.seed_override)
        return cfg

    def ensure_out_dir(self) -> None:
        try:
            os.makedirs(self.out_dir, exist_ok=True)
        except OSError as exc:
            raise DataError(f"output directory not writable: {exc}") from exc

    def path(self, name: str) -> str:
        return os.path.join(self.out_dir, name)


def _write(path: str, text: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)


def cmd_simulate(manifest: RunManifest) -> int:
    cfg = manifest.resolve_config(default_preset="paper-quick")
    manifest.ensure_out_dir()
    phase_path = manifest.path(PHASE_RECORD)
    rows = records.stream_record(cfg, phase_path, kind="phase_scan")
    print(f"wrote {phase_path}: {len(cfg.phases)} phases x {cfg.samples_per_phase} samples")
    if cfg.lo_scan_e_l:
        lo_path = manifest.path(LO_RECORD)
        lo_rows = records.stream_record(cfg, lo_path, kind="lo_scan")
        print(f"wrote {lo_path}: {len(cfg.lo_scan_e_l)} LO strengths x 2 phases")
        rows += lo_rows
    print(f"seed={cfg.seed} total_rows={rows}")
    return EXIT_OK


def _separation_payload(cfg, phase_analysis, lo_analysis) -> dict:
    payload = {
        "config": config_mod.config_to_flat(cfg),
        "method": phase_analysis.separation.method,
        "coeffs": [float(c) for c in phase_analysis.separation.coeffs],
        "coeff_cov": [[float(v) for v in row] for row in phase_analysis.separation.coeff_cov],
        "c0_value": phase_analysis.separation.c0_value,
        "c0_sigma": phase_analysis.separation.c0_sigma,
        "c_block": {
            "value": phase_analysis.c_block.value,
            "stderr": phase_analysis.c_block.stderr,
            "n": phase_analysis.c_block.n,
        },
        "drift_error": phase_analysis.drift,
        "phis": [float(p) for p in phase_analysis.estimates.phis],
    }
    if lo_analysis is not None:
        sep = lo_analysis.separation
        payload["lo"] = {
            "phi_ref": sep.phi_ref,
            "c0_value": sep.c0_value,
            "c0_sigma": sep.c0_sigma,
            "ref_values": [float(v) for v in sep.ref_values],
            "ref_cov": [[float(v) for v in row] for row in sep.ref_cov],
        }
    return payload


def cmd_analyze(manifest: RunManifest) -> int:
    record = records.read_record(manifest.path(PHASE_RECORD))
    cfg = record.config
    try:
        est = estimates_from_record(record)
    except ValueError as exc:
        raise DataError(f"record is missing a calibration run: {exc}") from exc
    phase_analysis = analyze_phase_estimates(est)

    lo_analysis = None
    lo_path = manifest.path(LO_RECORD)
    if os.path.exists(lo_path):
        lo_analysis = analyze_lo_estimates(estimates_from_record(records.read_record(lo_path)))

    if manifest.report_format == "structured":
        doc = {
            "fit": reports.fit_report_dict(phase_analysis),
            "phase_table": reports.phase_table_rows(phase_analysis),
        }
        if lo_analysis is not None:
            doc["lo_table"] = reports.lo_table_rows(lo_analysis)
        _write(manifest.path("analyze_report.json"), json.dumps(doc, sort_keys=True, indent=1) + "\n")
        print(manifest.path("analyze_report.json"))
    else:
        _write(manifest.path("fit_report.txt"), reports.fit_report_text(phase_analysis))
        _write(manifest.path("phase_table.txt"), reports.phase_table_text(phase_analysis))
        print(manifest.path("fit_report.txt"))
        print(manifest.path("phase_table.txt"))
        if lo_analysis is not None:
            _write(manifest.path("lo_table.txt"), reports.lo_table_text(lo_analysis))
            print(manifest.path("lo_table.txt"))
    payload = _separation_payload(cfg, phase_analysis, lo_analysis)
    _write(manifest.path(SEPARATION_FILE), json.dumps(payload, sort_keys=True, indent=1) + "\n")
    print(manifest.path(SEPARATION_FILE))
    chi2_dof = phase_analysis.fit.chi2 / max(phase_analysis.fit.dof, 1)
    print(f"chi2/dof = {chi2_dof:.4f}")
    return EXIT_OK


def _load_separation(path: str):
    if not os.path.exists(path):
        raise DataError(
            f"missing {path}; run `hccm analyze` first (the determinant test "
            "consumes the separated contributions)"
        )
    with open(path, "r", encoding="utf-8") as fh:
        payload = json.load(fh)
    cfg = config_mod.build_config(payload["config"])
    sep = SeparatedContributions(
        method=BY_PHASE,
        c0_value=float(payload["c0_value"]),
        c0_sigma=float(payload["c0_sigma"]),
        coeffs=np.array(payload["coeffs"]),
        coeff_cov=np.array(payload["coeff_cov"]),
        c_block=CorrelationEstimate(
            value=float(payload["c_block"]["value"]),
            stderr=float(payload["c_block"]["stderr"]),
            n=int(payload["c_block"]["n"]),
        ),
    )
    lo_sep = None
    if "lo" in payload:
        lo = payload["lo"]
        lo_sep = SeparatedContributions(
            method="by-lo-strength",
            c0_value=float(lo["c0_value"]),
            c0_sigma=float(lo["c0_sigma"]),
            phi_ref=float(lo["phi_ref"]),
            ref_values=np.array(lo["ref_values"]),
            ref_cov=np.array(lo["ref_cov"]),
        )
    return cfg, sep, lo_sep, np.array(payload["phis"], dtype=float)


def cmd_test(manifest: RunManifest) -> int:
    from .nonclassicality import build_L, det_with_error
    from .splitter import splitter_coefficients

    cfg, sep, lo_sep, phis = _load_separation(manifest.path(SEPARATION_FILE))
    dets = det_scan(sep, cfg, phis)
    flags = squeezed_phases(cfg.signal.state(), phis)
    summary = classify_phase_range(dets, flags)
    lo_det = None
    if lo_sep is not None:
        lo_det = det_with_error(
            build_L(lo_sep, splitter_coefficients(cfg.splitter), lo_sep.phi_ref),
            threshold=cfg.sig_threshold,
        )
    result = PipelineResult(
        config=cfg,
        phase=None,
        det_results=dets,
        squeezed_flags=flags,
        summary=summary,
        lo=None,
        lo_det=lo_det,
    )
    if manifest.report_format == "structured":
        doc = {"det_table": reports.det_table_rows(result), "summary": reports.det_summary_dict(result)}
        _write(manifest.path("det_report.json"), json.dumps(doc, sort_keys=True, indent=1) + "\n")
        print(manifest.path("det_report.json"))
    else:
        _write(manifest.path("det_table.txt"), reports.det_table_text(result))
        print(manifest.path("det_table.txt"))
    print(
        f"nonclassical fraction = {summary.fraction_nonclassical:.3f} "
        f"({summary.n_nonclassical}/{summary.n_total} phases)"
    )
    if lo_det is not None:
        print(
            f"LO-scan point at phi={lo_det.phi:.4f}: det = {lo_det.det:.4e} "
            f"({lo_det.significance:.1f} sigma, {lo_det.verdict})"
        )
    return EXIT_OK


def cmd_reproduce_paper(manifest: RunManifest) -> int:
    cfg = manifest.resolve_config(default_preset="paper")
    manifest.ensure_out_dir()
    result = run_pipeline(cfg)
    if manifest.report_format == "structured":
        _write(manifest.path("report.json"), reports.structured_report(result))
        print(manifest.path("report.json"))
    else:
        _write(manifest.path("fit_report.txt"), reports.fit_report_text(result.phase))
        _write(manifest.path("phase_table.txt"), reports.phase_table_text(result.phase))
        _write(manifest.path("det_table.txt"), reports.det_table_text(result))
        if result.lo is not None:
            _write(manifest.path("lo_table.txt"), reports.lo_table_text(result.lo))
        for name in ("fit_report.txt", "phase_table.txt", "det_table.txt", "lo_table.txt"):
            print(manifest.path(name))
    chi2_dof = result.phase.fit.chi2 / max(result.phase.fit.dof, 1)
    print(f"chi2/dof = {chi2_dof:.4f}")
    print(
        f"nonclassical fraction = {result.summary.fraction_nonclassical:.3f}; "
        f"extends outside squeezed interval: {result.summary.outside_squeezed}"
    )
    if result.lo_det is not None:
        print(
            f"LO-scan point: det = {result.lo_det.det:.4e} "
            f"({result.lo_det.significance:.1f} sigma, {result.lo_det.verdict})"
        )
    return EXIT_OK


_COMMANDS = {
    "simulate": cmd_simulate,
    "analyze": cmd_analyze,
    "test": cmd_test,
    "reproduce-paper": cmd_reproduce_paper,
}


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    manifest = RunManifest.from_args(args)
    try:
        return _COMMANDS[manifest.command](manifest)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except DataError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except (AnomalousTermInaccessibleError, InsufficientDataError, DegenerateDesignError) as exc:
        print(f"test precondition error: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION


if __name__ == "__main__":
    sys.exit(main())
