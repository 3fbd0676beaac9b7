"""CSV and JSON writers for rate tables, pipeline summaries and verdicts."""

from __future__ import annotations

import json
from pathlib import Path
from typing import Iterable, Sequence

from .divisibility import MarkovClass, RateTrajectory

RATE_COLUMNS = ("t", "p", "pdot", "gamma1", "gamma2", "gamma3")
ESTIMATE_COLUMNS = ("t", "p_hat", "residual", "fidelity_three_qubit", "fidelity_system")
FIT_COLUMNS = ("c_hat", "rss", "n_points")
VERDICT_COLUMNS = ("source", "verdict", "witness_t", "witness_axis")


def fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return format(value, ".17g")
    return str(value)


def write_csv(path: Path, columns: Sequence[str], rows: Iterable[Sequence]) -> Path:
    lines = [",".join(columns)]
    lines.extend(",".join(fmt(v) for v in row) for row in rows)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")
    return path


def write_json(path: Path, doc: dict) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="\n") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return path


def rate_rows(traj: RateTrajectory) -> list[tuple]:
    m = traj.mixture
    return [(float(r.t), m.p(r.t), m.pdot(r.t), r.gamma1, r.gamma2, r.gamma3)
            for r in traj.rates]


def verdict_row(source: str, cls: MarkovClass) -> tuple:
    w = cls.witness
    return (source, cls.verdict.value, None if w is None else float(w.t),
            None if w is None else w.axis)


def verdict_doc(cls: MarkovClass) -> dict:
    w = cls.witness
    return {
        "verdict": cls.verdict.value,
        "witness": None if w is None else {"t": float(w.t), "axis": w.axis},
    }


def rows_to_dicts(columns: Sequence[str], rows: Iterable[Sequence]) -> list[dict]:
    return [dict(zip(columns, row)) for row in rows]


def load_schema() -> dict:
    return json.loads((Path(__file__).parent / "schemas" / "output.schema.json").read_text())
