"""File formats: matrix JSON, params JSON, graph JSON and data CSV.

Floats are written with 17 significant digits so that every value read back
is bit-identical to the one written.
"""
from __future__ import annotations

import csv
import json
import math
import re
from pathlib import Path

import numpy as np

from .covariance import LatentParams, RankOneFactors
from .errors import InvalidInput, WrongDimensions
from .simulation import DataMatrix


def fmt_float(x: float) -> str:
    x = float(x)
    if not math.isfinite(x):
        return "null"
    return format(x, ".17g")


def dumps(obj, indent: int = 2, _level: int = 0) -> str:
    """JSON text with 17-significant-digit floats; lists are kept on one line."""
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        pad = " " * (indent * (_level + 1))
        items = [f"{pad}{json.dumps(str(k))}: {dumps(v, indent, _level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + " " * (indent * _level) + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ", ".join(dumps(v, indent, _level) for v in obj) + "]"
    if isinstance(obj, np.ndarray):
        return dumps(obj.tolist(), indent, _level)
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return fmt_float(obj)
    return json.dumps(obj)


def _load(path) -> dict:
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except json.JSONDecodeError as exc:
        raise InvalidInput(f"{path}: not valid JSON ({exc})") from None
    if not isinstance(doc, dict):
        raise InvalidInput(f"{path}: expected a JSON object")
    return doc


def read_matrix(path, p: int | None = None, q: int | None = None):
    """Return ``(sigma, p, q)``; explicit ``p``/``q`` override the document."""
    doc = _load(path)
    p = doc.get("p") if p is None else p
    q = doc.get("q") if q is None else q
    if not isinstance(p, int) or not isinstance(q, int) or "sigma" not in doc:
        raise WrongDimensions(f"{path}: matrix document needs integer 'p', 'q' and 'sigma'")
    try:
        sigma = np.array(doc["sigma"], dtype=float)
    except (TypeError, ValueError):
        raise WrongDimensions(f"{path}: 'sigma' is not a numeric matrix") from None
    return sigma, p, q


def write_matrix(path, sigma, p: int, q: int) -> None:
    Path(path).write_text(dumps({"p": p, "q": q, "sigma": np.asarray(sigma)}) + "\n")


def read_params(path) -> LatentParams:
    doc = _load(path)
    try:
        return LatentParams.from_json(doc)
    except KeyError as exc:
        raise InvalidInput(f"{path}: params document is missing {exc}") from None
    except (TypeError, ValueError) as exc:
        if isinstance(exc, InvalidInput):
            raise
        raise InvalidInput(f"{path}: {exc}") from None


def write_params(path, params: LatentParams) -> None:
    Path(path).write_text(dumps(params.to_json()) + "\n")


def read_factors(path) -> RankOneFactors:
    doc = _load(path)
    try:
        return RankOneFactors(doc["u"], doc["v"], doc["d"])
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidInput(f"{path}: factors document needs 'u', 'v', 'd' ({exc})") from None


_LABEL = re.compile(r"^([XY])(\d+)$")


def write_csv(data: DataMatrix, path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(data.columns)
        for row in data.values:
            w.writerow([fmt_float(x) for x in row])


def read_csv(path, p: int | None = None) -> DataMatrix:
    """Read a data CSV; ``p`` defaults to the number of ``X`` columns in the header."""
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows:
        raise InvalidInput(f"{path}: empty file")
    header = [h.strip() for h in rows[0]]
    kinds = []
    for h in header:
        m = _LABEL.match(h)
        if not m:
            raise InvalidInput(f"{path}: bad column label {h!r}")
        kinds.append(m.group(1))
    if p is None:
        p = kinds.count("X")
    if kinds != ["X"] * p + ["Y"] * (len(kinds) - p) or p < 1 or p >= len(kinds):
        raise InvalidInput(f"{path}: header must be X1..Xp followed by Y1..Yq")
    try:
        values = np.array([[float(x) for x in r] for r in rows[1:] if r], dtype=float)
    except ValueError as exc:
        raise InvalidInput(f"{path}: {exc}") from None
    if values.size == 0:
        raise InvalidInput(f"{path}: no observations")
    return DataMatrix(values, p, len(header) - p)
