"""JSON and CSV I/O.

Wire formats (bit-exact round trips; floats serialize via repr, CSV prints 17
significant digits, '.' decimal, no locale dependence):

* operator        {"dim": n, "re": [[...]], "im": [[...]]}   ("im" optional)
* vector          {"re": [...], "im": [...]}                 ("im" optional)
* decomposition   {"dim": n, "components": [{"weight": x, "re": [...], "im": [...]}, ...]}
* measure         {"dim": n, "atoms": [{"weight": x, "state": <operator>}, ...]}
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .decomposition import Decomposition, rebuild_matrix
from .errors import ParseError
from .measures import StatisticalWeightMeasure, make_measure
from .operators import StateOperator, validate_state_operator

FLOAT_DIGITS = 17


def fmt_float(x: float) -> str:
    return f"{float(x):.{FLOAT_DIGITS}g}"


def _real_grid(rows, n: int, what: str) -> np.ndarray:
    try:
        a = np.asarray(rows, dtype=float)
    except (TypeError, ValueError) as exc:
        raise ParseError(f"{what}: entries must be real numbers") from exc
    if a.shape != (n, n):
        raise ParseError(f"{what}: expected shape {(n, n)}, got {a.shape}")
    return a


def matrix_to_json(m: np.ndarray) -> dict:
    m = np.asarray(m, dtype=complex)
    out = {"dim": int(m.shape[0]), "re": m.real.tolist()}
    if np.any(m.imag != 0.0):
        out["im"] = m.imag.tolist()
    return out


def matrix_from_json(obj) -> np.ndarray:
    if not isinstance(obj, dict) or "dim" not in obj or "re" not in obj:
        raise ParseError("operator JSON needs 'dim' and 're' fields")
    try:
        n = int(obj["dim"])
    except (TypeError, ValueError) as exc:
        raise ParseError("'dim' must be an integer") from exc
    if n < 1:
        raise ParseError(f"'dim' must be >= 1, got {n}")
    re = _real_grid(obj["re"], n, "'re'")
    if "im" in obj:
        im = _real_grid(obj["im"], n, "'im'")
    else:
        im = np.zeros((n, n))
    return re + 1j * im


def vector_to_json(v: np.ndarray) -> dict:
    v = np.asarray(v, dtype=complex)
    out = {"re": v.real.tolist()}
    if np.any(v.imag != 0.0):
        out["im"] = v.imag.tolist()
    return out


def vector_from_json(obj) -> np.ndarray:
    if not isinstance(obj, dict) or "re" not in obj:
        raise ParseError("vector JSON needs a 're' field")
    try:
        re = np.asarray(obj["re"], dtype=float)
        im = np.asarray(obj.get("im", np.zeros_like(re)), dtype=float)
    except (TypeError, ValueError) as exc:
        raise ParseError("vector entries must be real numbers") from exc
    if re.ndim != 1 or im.shape != re.shape:
        raise ParseError("vector 're'/'im' must be equal-length 1-D arrays")
    return re + 1j * im


def decomposition_to_json(d: Decomposition) -> dict:
    comps = []
    for w, v in d.components:
        entry = {"weight": float(w)}
        entry.update(vector_to_json(v))
        comps.append(entry)
    return {"dim": d.dim, "components": comps}


def decomposition_from_json(obj) -> Decomposition:
    if not isinstance(obj, dict) or "components" not in obj:
        raise ParseError("decomposition JSON needs a 'components' field")
    comps = obj["components"]
    if not isinstance(comps, list) or not comps:
        raise ParseError("'components' must be a non-empty list")
    weights, columns = [], []
    for entry in comps:
        if not isinstance(entry, dict) or "weight" not in entry:
            raise ParseError("each component needs a 'weight'")
        weights.append(float(entry["weight"]))
        columns.append(vector_from_json(entry))
    dims = {c.shape[0] for c in columns}
    if len(dims) != 1:
        raise ParseError("component vectors must share one length")
    if "dim" in obj and int(obj["dim"]) != columns[0].shape[0]:
        raise ParseError("'dim' does not match the component vectors")
    target = validate_state_operator(rebuild_matrix(weights, np.column_stack(columns)))
    return Decomposition(
        weights=np.asarray(weights, float),
        vectors=np.column_stack(columns),
        target=target,
    )


def measure_to_json(mu: StatisticalWeightMeasure) -> dict:
    return {
        "dim": mu.dim,
        "atoms": [
            {"weight": float(w), "state": matrix_to_json(s.matrix)} for w, s in mu.atoms
        ],
    }


def measure_from_json(obj) -> StatisticalWeightMeasure:
    if not isinstance(obj, dict) or "atoms" not in obj:
        raise ParseError("measure JSON needs an 'atoms' field")
    atoms = obj["atoms"]
    if not isinstance(atoms, list) or not atoms:
        raise ParseError("'atoms' must be a non-empty list")
    pairs = []
    for entry in atoms:
        if not isinstance(entry, dict) or "weight" not in entry or "state" not in entry:
            raise ParseError("each atom needs 'weight' and 'state'")
        pairs.append(
            (float(entry["weight"]), validate_state_operator(matrix_from_json(entry["state"])))
        )
    return make_measure(pairs)


def state_to_json(s: StateOperator) -> dict:
    return matrix_to_json(s.matrix)


def load_json(path) -> object:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON in {path}: {exc}") from exc


def dump_json(obj, path) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(obj, indent=2) + "\n", encoding="utf-8")


def _cell(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return str(bool(x))
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        return fmt_float(float(x))
    return str(x)


def write_csv(path, header: list[str], rows) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    lines = [",".join(header)]
    lines.extend(",".join(_cell(x) for x in row) for row in rows)
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
