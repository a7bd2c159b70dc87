"""CSV/JSON readers and writers for curves, trajectories, and run manifests.

Curve CSV uses the header ``param,x,y`` with one node per row; floats are
written with repr so a write/read round-trip is bit-exact.  Trajectory CSV
uses the monitored-quantity header of EnergyReport.FIELDS.
"""

from __future__ import annotations

import csv
import dataclasses
import json
from pathlib import Path
from typing import List, Sequence, Tuple, Union

import numpy as np

from .flow import EnergyReport
from .geometry import DiscreteCurve

PathLike = Union[str, Path]


def _fmt(x: float) -> str:
    return repr(float(x))


def write_curve_csv(path: PathLike, curve: DiscreteCurve) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["param", "x", "y"])
        for p, (x, y) in zip(curve.params, curve.nodes):
            writer.writerow([_fmt(p), _fmt(x), _fmt(y)])


def read_curve_csv(path: PathLike, closed: bool = False) -> DiscreteCurve:
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if [h.strip() for h in header] != ["param", "x", "y"]:
            raise ValueError(f"unexpected curve CSV header: {header}")
        rows = [[float(v) for v in row] for row in reader if row]
    data = np.asarray(rows, dtype=float)
    curve = DiscreteCurve(data[:, 0], data[:, 1:3], closed=closed)
    curve.validate()
    return curve


def curve_to_json_dict(curve: DiscreteCurve) -> dict:
    rec = {
        "params": [float(p) for p in curve.params],
        "nodes": [[float(x), float(y)] for x, y in curve.nodes],
        "closed": bool(curve.closed),
        "boundary_tangents": None,
        "metadata": curve.metadata,
    }
    if curve.boundary_tangents is not None:
        rec["boundary_tangents"] = [[float(v) for v in row]
                                    for row in curve.boundary_tangents]
    return rec


def curve_from_json_dict(rec: dict) -> DiscreteCurve:
    bt = rec.get("boundary_tangents")
    curve = DiscreteCurve(
        np.asarray(rec["params"], dtype=float),
        np.asarray(rec["nodes"], dtype=float),
        closed=bool(rec.get("closed", False)),
        boundary_tangents=None if bt is None else np.asarray(bt, dtype=float),
        metadata=dict(rec.get("metadata", {})),
    )
    curve.validate()
    return curve


def write_curve_json(path: PathLike, curve: DiscreteCurve) -> None:
    with open(path, "w") as fh:
        json.dump(curve_to_json_dict(curve), fh, indent=2)
        fh.write("\n")


def read_curve_json(path: PathLike) -> DiscreteCurve:
    with open(path) as fh:
        return curve_from_json_dict(json.load(fh))


def write_trajectory_csv(path: PathLike, trajectory: Sequence[EnergyReport]) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(EnergyReport.FIELDS)
        for rep in trajectory:
            writer.writerow([_fmt(v) for v in rep.as_row()])


def read_trajectory_csv(path: PathLike) -> List[EnergyReport]:
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if tuple(h.strip() for h in header) != EnergyReport.FIELDS:
            raise ValueError(f"unexpected trajectory CSV header: {header}")
        return [EnergyReport(*[float(v) for v in row]) for row in reader if row]


def _jsonable(obj):
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return _jsonable(dataclasses.asdict(obj))
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    if isinstance(obj, (np.floating, np.integer, np.bool_)):
        return obj.item()
    if isinstance(obj, float) and (np.isnan(obj) or np.isinf(obj)):
        return repr(obj)
    if obj is None or isinstance(obj, (str, int, float, bool)):
        return obj
    return repr(obj)


def write_manifest(path: PathLike, record: dict) -> None:
    with open(path, "w") as fh:
        json.dump(_jsonable(record), fh, indent=2, sort_keys=True)
        fh.write("\n")
