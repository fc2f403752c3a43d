"""Plain-text columnar record files.

Layout: header lines ``# key=value`` echoing the full configuration plus the
record kind, then one row per sample::

    phase_index, phase_rad, c1, c2

For phase scans, phase_index enumerates the scanned phases; the calibration
runs use the reserved indices -1 (first blocked-LO run), -2 (second blocked-LO
run) and -3 (blocked-signal run).  For LO scans, phase_index enumerates the
scan segments in acquisition order and extra header lines
``segment.<i>.e_l`` / ``segment.<i>.phi`` / ``segment.<i>.kind`` map them back
to grid values.  Phases per segment always come from the data rows, so records
with non-equidistant phase grids read back faithfully.
"""

from __future__ import annotations

import os

import numpy as np

from . import config as config_mod
from .detector import (
    KIND_BLOCKED_LO_A,
    KIND_BLOCKED_LO_B,
    KIND_BLOCKED_SIGNAL,
    KIND_LO_PHASE,
    KIND_LO_PHASE_PI,
    KIND_PHASE,
    ExperimentConfig,
    PhaseScanRecord,
    Segment,
    SegmentSpec,
)
from .errors import DataError

FORMAT_TAG = "HCCM1"

_CAL_INDEX = {KIND_BLOCKED_LO_A: -1, KIND_BLOCKED_LO_B: -2, KIND_BLOCKED_SIGNAL: -3}
_CAL_KIND = {v: k for k, v in _CAL_INDEX.items()}


def _header_lines(kind: str, cfg: ExperimentConfig, specs):
    lines = [f"# format={FORMAT_TAG}", f"# kind={kind}"]
    flat = config_mod.config_to_flat(cfg)
    for key in sorted(flat):
        lines.append(f"# {key}={flat[key]}")
    if kind == "lo_scan":
        for row_index, spec in enumerate(specs):
            lines.append(f"# segment.{row_index}.kind={spec.kind}")
            lines.append(f"# segment.{row_index}.phi={spec.phi!r}")
            lines.append(f"# segment.{row_index}.e_l={spec.e_l!r}")
            lines.append(f"# segment.{row_index}.block={spec.block}")
    return lines


def _row_index(record_kind: str, position: int, spec: SegmentSpec) -> int:
    if record_kind == "lo_scan":
        return position
    if spec.kind == KIND_PHASE:
        return spec.index
    return _CAL_INDEX[spec.kind]


def _write_rows(fh, kind, position, spec, c1, c2):
    idx = _row_index(kind, position, spec)
    phi = repr(float(spec.phi))
    for v1, v2 in zip(c1.tolist(), c2.tolist()):
        fh.write(f"{idx},{phi},{v1!r},{v2!r}\n")


def write_record(record: PhaseScanRecord, path) -> None:
    """Write a materialized record to a plain-text columnar file."""
    specs = [seg.spec for seg in record.segments]
    with open(path, "w", encoding="utf-8") as fh:
        for line in _header_lines(record.kind, record.config, specs):
            fh.write(line + "\n")
        fh.write("# columns=phase_index,phase_rad,c1,c2\n")
        for position, seg in enumerate(record.segments):
            _write_rows(fh, record.kind, position, seg.spec, seg.c1, seg.c2)


def stream_record(cfg: ExperimentConfig, path, kind: str = "phase_scan") -> int:
    """Simulate and write a record segment-by-segment (bounded memory).

    Returns the number of sample rows written.
    """
    from .detector import draw_segment, lo_scan_plan, phase_scan_plan

    if kind == "phase_scan":
        specs = phase_scan_plan(cfg)
    elif kind == "lo_scan":
        specs = lo_scan_plan(cfg, cfg.lo_scan_phi, cfg.lo_scan_e_l)
    else:
        raise ValueError(f"unknown record kind {kind!r}")
    rows = 0
    with open(path, "w", encoding="utf-8") as fh:
        for line in _header_lines(kind, cfg, specs):
            fh.write(line + "\n")
        fh.write("# columns=phase_index,phase_rad,c1,c2\n")
        for position, spec in enumerate(specs):
            c1, c2 = draw_segment(cfg, spec)
            _write_rows(fh, kind, position, spec, c1, c2)
            rows += spec.n
    return rows


def read_record(path) -> PhaseScanRecord:
    """Read a record file written by write_record."""
    if not os.path.exists(path):
        raise DataError(f"record file not found: {path}")
    meta = {}
    rows_by_index = {}
    with open(path, "r", encoding="utf-8") as fh:
        for raw in fh:
            line = raw.strip()
            if not line:
                continue
            if line.startswith("#"):
                body = line[1:].strip()
                if "=" in body:
                    key, value = body.split("=", 1)
                    meta[key.strip()] = value.strip()
                continue
            parts = line.split(",")
            if len(parts) != 4:
                raise DataError(f"malformed data row: {line!r}")
            idx = int(parts[0])
            rows_by_index.setdefault(idx, []).append(
                (float(parts[1]), float(parts[2]), float(parts[3]))
            )
    if meta.get("format") != FORMAT_TAG:
        raise DataError(f"not a {FORMAT_TAG} record file: {path}")
    kind = meta.get("kind", "phase_scan")
    cfg = _config_from_meta(meta)
    if kind == "lo_scan":
        segments = _lo_segments(meta, rows_by_index)
    else:
        segments = _phase_segments(cfg, rows_by_index)
    return PhaseScanRecord(kind=kind, segments=tuple(segments), config=cfg)


def _config_from_meta(meta: dict) -> ExperimentConfig:
    flat = {
        k: v for k, v in meta.items() if k not in ("format", "kind", "columns") and "." not in k
    }
    try:
        return config_mod.build_config(flat)
    except Exception as exc:
        raise DataError(f"record header does not parse as a config: {exc}") from exc


def _segment_from_rows(spec: SegmentSpec, rows) -> Segment:
    arr = np.array(rows)
    return Segment(spec=spec, c1=arr[:, 1].copy(), c2=arr[:, 2].copy())


def _phase_segments(cfg: ExperimentConfig, rows_by_index: dict):
    blocks = {}
    block = 0
    for entry in cfg.schedule:
        if entry == "phases":
            for i in range(len(cfg.phases)):
                blocks[i] = block
                block += 1
        else:
            blocks[_CAL_INDEX[entry]] = block
            block += 1
    segments = []
    for idx in sorted(rows_by_index):
        rows = rows_by_index[idx]
        if idx < 0:
            if idx not in _CAL_KIND:
                raise DataError(f"unknown calibration index {idx}")
            kind, seg_index = _CAL_KIND[idx], 0
        else:
            kind, seg_index = KIND_PHASE, idx
        spec = SegmentSpec(
            kind=kind,
            index=seg_index,
            phi=rows[0][0],
            e_l=cfg.e_l,
            block=blocks.get(idx, 0),
            n=len(rows),
        )
        segments.append(_segment_from_rows(spec, rows))
    return segments


def _lo_segments(meta: dict, rows_by_index: dict):
    segments = []
    for idx in sorted(rows_by_index):
        rows = rows_by_index[idx]
        try:
            kind = meta[f"segment.{idx}.kind"]
            phi = float(meta[f"segment.{idx}.phi"])
            e_l = float(meta[f"segment.{idx}.e_l"])
            block = int(meta[f"segment.{idx}.block"])
        except KeyError as exc:
            raise DataError(f"LO-scan record lacks metadata for segment {idx}") from exc
        if kind not in (KIND_LO_PHASE, KIND_LO_PHASE_PI, KIND_BLOCKED_SIGNAL):
            raise DataError(f"unknown LO-scan segment kind {kind!r}")
        index = idx // 2 if kind in (KIND_LO_PHASE, KIND_LO_PHASE_PI) else 0
        spec = SegmentSpec(kind=kind, index=index, phi=phi, e_l=e_l, block=block, n=len(rows))
        segments.append(_segment_from_rows(spec, rows))
    return segments
