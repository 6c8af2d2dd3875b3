"""JSON and CSV serialization.

Matrices are nested lists of ``[re, im]`` pairs.  A generator document reads

    {"dim": d, "hamiltonian": M, "lindblad_ops": [M, ...], "rho": M?}
"""

from __future__ import annotations

import csv
import io as _io
import json

import numpy as np

from .exceptions import DimensionMismatch, NonFiniteInput, ParseError
from .lindblad import LindbladGenerator

SCHEMA_VERSION = 1


def matrix_to_json(A):
    A = np.asarray(A, dtype=complex)
    return [[[float(z.real), float(z.imag)] for z in row] for row in A]


def matrix_from_json(obj, name="matrix"):
    try:
        arr = np.asarray(obj, dtype=float)
    except (TypeError, ValueError) as exc:
        raise ParseError(f"{name}: expected nested [re, im] pairs") from exc
    if arr.ndim != 3 or arr.shape[-1] != 2 or arr.shape[0] != arr.shape[1]:
        raise ParseError(f"{name}: expected a square matrix of [re, im] pairs, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise NonFiniteInput(f"{name} contains non-finite entries")
    return arr[..., 0] + 1j * arr[..., 1]


def generator_to_json(gen, rho=None):
    doc = {
        "dim": gen.dim,
        "hamiltonian": matrix_to_json(gen.hamiltonian),
        "lindblad_ops": [matrix_to_json(J) for J in gen.lindblad_ops],
    }
    if rho is not None:
        doc["rho"] = matrix_to_json(getattr(rho, "rho", rho))
    return doc


def generator_from_json(doc):
    """Return ``(generator, rho or None)`` from a parsed generator document."""
    if not isinstance(doc, dict):
        raise ParseError("generator document must be a JSON object")
    for key in ("dim", "hamiltonian"):
        if key not in doc:
            raise ParseError(f"missing field {key!r}")
    d = doc["dim"]
    if not isinstance(d, int) or d < 1:
        raise ParseError("'dim' must be a positive integer")
    H = matrix_from_json(doc["hamiltonian"], "hamiltonian")
    ops = [matrix_from_json(J, f"lindblad_ops[{k}]") for k, J in enumerate(doc.get("lindblad_ops", []))]
    for M in [H, *ops]:
        if M.shape != (d, d):
            raise DimensionMismatch(f"matrix of shape {M.shape} in a dim-{d} document")
    rho = matrix_from_json(doc["rho"], "rho") if "rho" in doc else None
    return LindbladGenerator(H, ops), rho


def parse_json(raw):
    """json.loads that reports failures as ParseError with a byte offset."""
    if isinstance(raw, bytes):
        try:
            raw = raw.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ParseError(f"input is not UTF-8: {exc.reason}", offset=exc.start) from exc
    try:
        return json.loads(raw)
    except json.JSONDecodeError as exc:
        offset = len(raw[: exc.pos].encode("utf-8"))
        raise ParseError(f"{exc.msg} (byte {offset})", offset=offset) from exc


def read_json(path):
    try:
        with open(path, "rb") as fh:
            return parse_json(fh.read())
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from exc


def loads_generator(text):
    return generator_from_json(parse_json(text))


def load_generator(path):
    return generator_from_json(read_json(path))


def to_jsonable(obj):
    """Recursively convert numpy scalars/arrays; complex arrays become [re, im] pairs."""
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        if np.iscomplexobj(obj):
            if obj.ndim == 2:
                return matrix_to_json(obj)
            return [[float(z.real), float(z.imag)] for z in obj.ravel()]
        return [to_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, (np.floating, float)):
        x = float(obj)
        return x if np.isfinite(x) else None
    return obj


def dumps_report(report):
    doc = {"schema_version": SCHEMA_VERSION, **report}
    return json.dumps(to_jsonable(doc), indent=2, sort_keys=True) + "\n"


def format_float(x):
    return "%.17g" % x


def dumps_csv(columns):
    """CSV text from an ordered mapping of equal-length columns."""
    names = list(columns)
    buf = _io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(names)
    for row in zip(*(columns[n] for n in names)):
        writer.writerow([format_float(v) for v in row])
    return buf.getvalue()
