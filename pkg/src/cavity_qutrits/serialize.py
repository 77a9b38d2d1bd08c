"""JSON and CSV serializers for protocol results and sweeps."""

from __future__ import annotations

import csv
import io
import json

import numpy as np

from .analysis import SweepRow
from .hilbert import LEVELS, PAIR_LABELS
from .protocol import ProtocolResult

SCHEMA_VERSION = 1

SWEEP_COLUMNS = {
    "timing": ["delta", "fidelity_sim", "fidelity_eq11", "abs_err"],
    "detuning": ["delta_ratio", "fidelity_calibrated", "fidelity_raw", "photon_population", "entropy_log3"],
    "kappa": ["kappa", "fidelity_calibrated", "fidelity_raw", "photon_population", "entropy_log3"],
    "convergence": ["n_max", "fidelity_calibrated", "fidelity_raw", "photon_population", "delta_prev"],
}


def _state_json(state) -> dict | None:
    if state is None:
        return None
    state = np.asarray(state)
    return {
        "basis": list(PAIR_LABELS),
        "kind": "vector" if state.ndim == 1 else "density_matrix",
        "real": np.real(state).tolist(),
        "imag": np.imag(state).tolist(),
    }


def result_to_dict(res: ProtocolResult, report: dict | None = None) -> dict:
    out = {
        "schema_version": SCHEMA_VERSION,
        "backend": res.backend,
        "fidelity_raw": res.fidelity_raw,
        "fidelity_calibrated": res.fidelity_calibrated,
        "calibration_exact": res.calibration_exact,
        "calibration_phases": {
            f"atom{a + 1}": {lv: float(res.calibration_phases[a, i]) for i, lv in enumerate(LEVELS)}
            for a in range(2)
        },
        "schmidt": [float(x) for x in res.schmidt],
        "entropy_ln": res.entropy,
        "entropy_log3": res.entropy_log3,
        "purity": res.purity,
        "photon_population": res.photon_population,
        "populations": res.populations,
        "final_state": _state_json(res.final_atom_state),
        "metadata": res.metadata,
    }
    if report is not None:
        out["physical_report"] = report
    return out


def dumps_json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=False) + "\n"


def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, str):
        return x
    if isinstance(x, (bool, np.bool_)):
        return str(bool(x)).lower()
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return f"{float(x):.12g}"


def _write_csv(header, rows, comment: str) -> str:
    buf = io.StringIO()
    buf.write(f"# {comment}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_fmt(v) for v in row])
    return buf.getvalue()


def result_to_csv(res: ProtocolResult, report: dict | None = None) -> str:
    """Flat ``key,value`` rendering of the scalar fields of a run."""
    d = result_to_dict(res, report)
    rows = []
    for key in ("backend", "fidelity_raw", "fidelity_calibrated", "calibration_exact",
                "entropy_ln", "entropy_log3", "purity", "photon_population"):
        rows.append((key, d[key]))
    for atom, phases in d["calibration_phases"].items():
        for lv, v in phases.items():
            rows.append((f"phase_{atom}_{lv}", v))
    for i, s in enumerate(d["schmidt"]):
        rows.append((f"schmidt_{i}", s))
    for label, p in d["populations"].items():
        rows.append((f"population_{label}", p))
    for key, v in (report or {}).items():
        rows.append((key, v))
    return _write_csv(["key", "value"], rows, f"schema_version={SCHEMA_VERSION} kind=run")


def sweep_table(kind: str, rows: list[SweepRow]) -> list[list]:
    table = []
    prev = None
    for r in rows:
        if kind == "timing":
            table.append([r.value, r.fidelity_sim, r.fidelity_analytic, abs(r.fidelity_sim - r.fidelity_analytic)])
        elif kind == "convergence":
            dp = None if prev is None else abs(r.fidelity_sim - prev)
            table.append([int(r.value), r.fidelity_sim, r.fidelity_raw, r.photon_population, dp])
            prev = r.fidelity_sim
        else:
            table.append([r.value, r.fidelity_sim, r.fidelity_raw, r.photon_population, r.entropy_log3])
    return table


def sweep_to_csv(kind: str, rows: list[SweepRow]) -> str:
    return _write_csv(SWEEP_COLUMNS[kind], sweep_table(kind, rows),
                      f"schema_version={SCHEMA_VERSION} sweep={kind}")


def sweep_to_json(kind: str, rows: list[SweepRow]) -> str:
    return dumps_json({
        "schema_version": SCHEMA_VERSION,
        "sweep": kind,
        "columns": SWEEP_COLUMNS[kind],
        "rows": sweep_table(kind, rows),
    })


def read_sweep_csv(text: str) -> tuple[list[str], list[list[float | None]]]:
    """Parse a sweep CSV written by :func:`sweep_to_csv`."""
    lines = [ln for ln in text.splitlines() if not ln.startswith("#")]
    reader = csv.reader(lines)
    header = next(reader)
    rows = [[float(v) if v != "" else None for v in row] for row in reader]
    return header, rows
