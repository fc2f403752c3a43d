"""Deterministic text and JSON report rendering.

Every report exists in two equivalent forms: a plain-text table with
``# key=value`` header lines, and a structured JSON document mirroring the
same content.  Rendering is purely a function of the inputs, so identical
configs and seeds give byte-identical reports.
"""

from __future__ import annotations

import json

import numpy as np

from .pipeline import LoScanAnalysis, PhaseScanAnalysis, PipelineResult


def _fmt(x: float) -> str:
    return format(float(x), ".9e")


def fit_report_dict(phase: PhaseScanAnalysis) -> dict:
    fit = phase.fit
    names = ["a0", "a1", "b1", "a2", "b2"]
    return {
        "coefficients": {n: float(c) for n, c in zip(names, fit.coeffs)},
        "stderr": {n: float(np.sqrt(fit.cov[i, i])) for i, n in enumerate(names)},
        "covariance": [[float(v) for v in row] for row in fit.cov],
        "chi2": float(fit.chi2),
        "dof": int(fit.dof),
        "chi2_per_dof": float(fit.chi2 / fit.dof) if fit.dof > 0 else None,
        "c_block": {
            "value": phase.c_block.value,
            "stderr": phase.c_block.stderr,
            "n": phase.c_block.n,
        },
        "drift_error": float(phase.drift),
        "offset": {"value": phase.offset.value, "stderr": phase.offset.stderr},
    }


def fit_report_text(phase: PhaseScanAnalysis) -> str:
    d = fit_report_dict(phase)
    lines = ["# fit report (weighted least squares, trigonometric degree 2)"]
    for name in ("a0", "a1", "b1", "a2", "b2"):
        lines.append(f"{name} = {_fmt(d['coefficients'][name])} +- {_fmt(d['stderr'][name])}")
    lines.append(f"chi2 = {_fmt(d['chi2'])}")
    lines.append(f"dof = {d['dof']}")
    lines.append(f"chi2_per_dof = {_fmt(d['chi2_per_dof'])}")
    lines.append(f"c_block = {_fmt(d['c_block']['value'])} +- {_fmt(d['c_block']['stderr'])}")
    lines.append(f"drift_error = {_fmt(d['drift_error'])}")
    lines.append(f"offset = {_fmt(d['offset']['value'])} +- {_fmt(d['offset']['stderr'])}")
    for i in range(5):
        for j in range(5):
            lines.append(f"cov.{i}.{j} = {_fmt(d['covariance'][i][j])}")
    return "\n".join(lines) + "\n"


def phase_table_rows(phase: PhaseScanAnalysis):
    rows = []
    for phi, est in zip(phase.estimates.phis, phase.corrected):
        values, _ = phase.separation.contributions_at(phi)
        rows.append(
            {
                "phase_rad": float(phi),
                "C": est.value,
                "stderr": est.stderr,
                "C_fit": float(phase.fit.predict(phi)[0]),
                "C0": float(values[0]),
                "C1": float(values[1]),
                "C2": float(values[2]),
            }
        )
    return rows


def phase_table_text(phase: PhaseScanAnalysis) -> str:
    cols = ["phase_rad", "C", "stderr", "C_fit", "C0", "C1", "C2"]
    lines = ["# per-phase correlation table (offset-corrected)", "# columns=" + ",".join(cols)]
    for row in phase_table_rows(phase):
        lines.append(" ".join(_fmt(row[c]) for c in cols))
    return "\n".join(lines) + "\n"


def lo_table_rows(lo: LoScanAnalysis):
    sep = lo.separation
    c0, c1_ref, c2_ref = sep.ref_values
    e_ref = lo.e_ref
    rows = []
    for e, est_a, est_b in zip(lo.estimates.e_values, lo.corrected_phi, lo.corrected_phi_pi):
        odd = c1_ref * (e / e_ref) if e_ref > 0 else 0.0
        even = c0 + c2_ref * (e / e_ref) ** 2 if e_ref > 0 else c0
        rows.append(
            {
                "e_l": float(e),
                "C_phi": est_a.value,
                "stderr_phi": est_a.stderr,
                "C_phi_pi": est_b.value,
                "stderr_phi_pi": est_b.stderr,
                "fit_phi": float(even + odd),
                "fit_phi_pi": float(even - odd),
            }
        )
    return rows


def lo_table_text(lo: LoScanAnalysis) -> str:
    cols = ["e_l", "C_phi", "stderr_phi", "C_phi_pi", "stderr_phi_pi", "fit_phi", "fit_phi_pi"]
    lines = [
        "# LO-strength scan table (offset-corrected)",
        f"# phi={lo.estimates.phi!r}",
        f"# e_ref={lo.e_ref!r}",
        "# columns=" + ",".join(cols),
    ]
    for row in lo_table_rows(lo):
        lines.append(" ".join(_fmt(row[c]) for c in cols))
    return "\n".join(lines) + "\n"


def det_table_rows(result: PipelineResult):
    rows = []
    for det, squeezed in zip(result.det_results, result.squeezed_flags):
        rows.append(
            {
                "phase_rad": det.phi,
                "detL": det.det,
                "sigma": det.sigma,
                "significance": det.significance,
                "verdict": det.verdict,
                "squeezed_flag": bool(squeezed),
            }
        )
    return rows


def det_summary_dict(result: PipelineResult) -> dict:
    s = result.summary
    out = {
        "fraction_nonclassical": s.fraction_nonclassical,
        "n_nonclassical": s.n_nonclassical,
        "n_total": s.n_total,
        "nonclassical_intervals": [[float(a), float(b)] for a, b in s.intervals],
        "extends_outside_squeezed": s.outside_squeezed,
        "threshold_sigma": result.config.sig_threshold,
    }
    if result.lo_det is not None:
        out["lo_scan_point"] = {
            "phi": result.lo_det.phi,
            "detL": result.lo_det.det,
            "sigma": result.lo_det.sigma,
            "significance": result.lo_det.significance,
            "verdict": result.lo_det.verdict,
        }
    return out


def det_table_text(result: PipelineResult) -> str:
    cols = ["phase_rad", "detL", "sigma", "significance", "verdict", "squeezed_flag"]
    lines = ["# determinant test table", "# columns=" + ",".join(cols)]
    for row in det_table_rows(result):
        lines.append(
            " ".join(
                _fmt(row[c]) if c not in ("verdict", "squeezed_flag") else str(row[c])
                for c in cols
            )
        )
    lines.append("# summary")
    summary = det_summary_dict(result)
    for key in sorted(summary):
        lines.append(f"# {key}={json.dumps(summary[key], sort_keys=True)}")
    return "\n".join(lines) + "\n"


def structured_report(result: PipelineResult) -> str:
    doc = {
        "fit": fit_report_dict(result.phase),
        "phase_table": phase_table_rows(result.phase),
        "det_table": det_table_rows(result),
        "summary": det_summary_dict(result),
    }
    if result.lo is not None:
        doc["lo_table"] = lo_table_rows(result.lo)
    return json.dumps(doc, sort_keys=True, indent=1) + "\n"
