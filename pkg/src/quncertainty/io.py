"""JSON and CSV encodings for vectors, matrices, states and measurements.

Complex numbers are written as ``[re, im]`` pairs. A density matrix is
``{"dim": d, "entries": [[[re, im], ...], ...]}`` and a measurement is
``{"label": s, "elements": [matrix, ...], "operators": [matrix, ...]}`` with
``operators`` optional.
"""

from __future__ import annotations

import json

import numpy as np

from .errors import InvalidMeasurement, InvalidState
from .quantum import Measurement, as_density_matrix


def parse_vector(text: str) -> list[float]:
    """Parse ``"0.5,0.5"`` or a JSON array of numbers."""
    text = text.strip()
    if text.startswith("["):
        values = json.loads(text)
    else:
        values = [float(t) for t in text.split(",") if t.strip()]
    if not values or not all(isinstance(v, (int, float)) for v in values):
        raise ValueError(f"not a list of numbers: {text!r}")
    return [float(v) for v in values]


def parse_vector_list(text: str) -> list[list[float]]:
    """Vectors separated by ``;`` (CSV form) or a JSON array of arrays."""
    text = text.strip()
    if text.startswith("["):
        data = json.loads(text)
        return [parse_vector(json.dumps(v)) for v in data]
    return [parse_vector(part) for part in text.split(";") if part.strip()]


def matrix_to_json(m) -> list:
    m = np.asarray(m, dtype=complex)
    return [[[float(z.real), float(z.imag)] for z in row] for row in m]


def matrix_from_json(data, error=InvalidState) -> np.ndarray:
    try:
        arr = np.array(data, dtype=float)
    except (TypeError, ValueError) as exc:
        raise error("matrix entries must be [re, im] pairs") from exc
    if arr.ndim == 3 and arr.shape[-1] == 2:
        return arr[..., 0] + 1j * arr[..., 1]
    if arr.ndim == 2:
        return arr.astype(complex)
    raise error(f"unexpected matrix layout with shape {arr.shape}")


def density_to_json(rho) -> dict:
    rho = np.asarray(rho, dtype=complex)
    return {"dim": int(rho.shape[0]), "entries": matrix_to_json(rho)}


def density_from_json(data) -> np.ndarray:
    if not isinstance(data, dict) or "entries" not in data:
        raise InvalidState('density matrix JSON needs an "entries" field')
    rho = matrix_from_json(data["entries"])
    if "dim" in data and rho.shape != (data["dim"], data["dim"]):
        raise InvalidState(f"entries do not form a {data['dim']}x{data['dim']} matrix")
    return as_density_matrix(rho)


def measurement_to_json(m: Measurement) -> dict:
    out = {"label": m.label, "elements": [matrix_to_json(e) for e in m.elements]}
    if m.operators is not None:
        out["operators"] = [matrix_to_json(o) for o in m.operators]
    return out


def measurement_from_json(data) -> Measurement:
    if not isinstance(data, dict) or "elements" not in data:
        raise InvalidMeasurement('measurement JSON needs an "elements" field')
    elems = tuple(matrix_from_json(e, InvalidMeasurement) for e in data["elements"])
    ops = data.get("operators")
    if ops is not None:
        ops = tuple(matrix_from_json(o, InvalidMeasurement) for o in ops)
    return Measurement(elems, label=data.get("label", ""), operators=ops)


def measurements_from_json(data) -> list[Measurement]:
    """A list of measurements, a single measurement, or ``{"measurements": [...]}``."""
    if isinstance(data, dict) and "measurements" in data:
        data = data["measurements"]
    elif isinstance(data, dict) and "measurement" in data:
        data = [data["measurement"]]
    elif isinstance(data, dict):
        data = [data]
    return [measurement_from_json(m) for m in data]


def rounded(v, ndigits: int = 6) -> list[float]:
    return [round(float(x), ndigits) + 0.0 for x in np.asarray(v, dtype=float)]


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=False, allow_nan=False)


def to_csv(obj: dict) -> str:
    """Flatten a result object: one ``key,values...`` line per scalar or numeric list.

    Objects carrying ``rows`` (tables) are written as a header plus one line per row.
    """
    lines = []
    if "rows" in obj:
        cols = list(obj["rows"][0].keys()) if obj["rows"] else []
        lines.append(",".join(cols))
        for row in obj["rows"]:
            lines.append(",".join(_csv_cell(row[c]) for c in cols))
        return "\n".join(lines) + "\n"
    for key, value in obj.items():
        if isinstance(value, (int, float, str)) or value is None:
            lines.append(f"{key},{_csv_cell(value)}")
        elif isinstance(value, list) and all(isinstance(v, (int, float)) for v in value):
            lines.append(",".join([key] + [_csv_cell(v) for v in value]))
        elif isinstance(value, list) and value and all(
            isinstance(v, list) and all(isinstance(x, (int, float)) for x in v) for v in value
        ):
            for i, v in enumerate(value):
                lines.append(",".join([f"{key}[{i}]"] + [_csv_cell(x) for x in v]))
    return "\n".join(lines) + "\n"


def _csv_cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, list):
        return " ".join(_csv_cell(x) for x in v)
    return str(v)
