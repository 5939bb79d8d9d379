"""
JSON and CSV input/output for the command line.

Malformed input raises :class:`InputError` carrying a location (file path
plus line/column for syntax errors, or a JSON pointer for schema errors).
Numerical failures inside a stage are re-raised as :class:`NumericalFailure`
tagged with the module and operation.
"""

import csv
import io
import json
import math
from contextlib import contextmanager

import numpy as np

from .abelian import MomentSystemError
from .curve import GapSet, GapSetError
from .divisor import Divisor, DivisorError
from .frequency_map import NewtonError
from .potential import PoleProximityError
from .quadrature import QuadratureError

SCHEMA = "gapkit-1"


class InputError(ValueError):
    def __init__(self, message, location):
        super().__init__(f"{location}: {message}")
        self.location = location


class NumericalFailure(RuntimeError):
    def __init__(self, module, op, cause):
        super().__init__(f"{module}.{op}: {cause}")
        self.module = module
        self.op = op
        self.cause = cause


NUMERIC_ERRORS = (
    QuadratureError,
    MomentSystemError,
    NewtonError,
    PoleProximityError,
    ArithmeticError,
    np.linalg.LinAlgError,
)


@contextmanager
def stage(module, op):
    try:
        yield
    except NUMERIC_ERRORS as exc:
        raise NumericalFailure(module, op, exc) from exc


def load_json(path):
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise InputError(str(exc.strerror or exc), path) from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(exc.msg, f"{path}:{exc.lineno}:{exc.colno}") from exc


def parse_number(x, where):
    if isinstance(x, bool) or not isinstance(x, (int, float)) or not math.isfinite(x):
        raise InputError(f"expected a finite number, got {x!r}", where)
    return float(x)


def _list(x, where):
    if not isinstance(x, list):
        raise InputError(f"expected a list, got {type(x).__name__}", where)
    return x


def field(obj, key, where):
    if not isinstance(obj, dict):
        raise InputError(f"expected an object, got {type(obj).__name__}", where)
    if key not in obj:
        raise InputError(f"missing field {key!r}", where)
    return obj[key]


def parse_gapset(obj, where="#"):
    """``{"gaps": [[a1, b1], ...]}`` (a bare list of pairs is accepted too)."""
    gaps = obj if isinstance(obj, list) else field(obj, "gaps", where)
    loc = where if isinstance(obj, list) else f"{where}/gaps"
    pairs = []
    for i, g in enumerate(_list(gaps, loc)):
        g = _list(g, f"{loc}/{i}")
        if len(g) != 2:
            raise InputError("a gap is a pair [a, b]", f"{loc}/{i}")
        pairs.append((parse_number(g[0], f"{loc}/{i}/0"), parse_number(g[1], f"{loc}/{i}/1")))
    try:
        return GapSet(tuple(pairs))
    except GapSetError as exc:
        raise InputError(str(exc), loc) from exc


def parse_divisor(obj, gs, where="#/divisor"):
    entries = obj if isinstance(obj, list) else field(obj, "entries", where)
    loc = where if isinstance(obj, list) else f"{where}/entries"
    out = []
    for i, e in enumerate(_list(entries, loc)):
        e = _list(e, f"{loc}/{i}")
        if len(e) != 2:
            raise InputError("a divisor entry is [lambda, eps]", f"{loc}/{i}")
        eps = e[1]
        if eps not in (-1, 1) or isinstance(eps, bool):
            raise InputError(f"eps must be +1 or -1, got {eps!r}", f"{loc}/{i}/1")
        out.append((parse_number(e[0], f"{loc}/{i}/0"), int(eps)))
    try:
        return Divisor(gs, tuple(out))
    except DivisorError as exc:
        raise InputError(str(exc), loc) from exc


def parse_vector(obj, key, where="#"):
    loc = f"{where}/{key}"
    return np.array([parse_number(x, f"{loc}/{i}") for i, x in enumerate(_list(field(obj, key, where), loc))])


def parse_weights(obj, where):
    w = parse_vector(obj, "weights", where)
    x = parse_vector(obj, "nodes", where)
    if len(w) != len(x) or len(w) == 0:
        raise InputError("weights and nodes need equal non-zero length", where)
    if np.any(w <= 0) or np.any(x <= 0):
        raise InputError("weights and nodes must be positive", where)
    return w, x


def jsonable(x):
    """Convert numpy scalars/arrays and complex numbers for json.dumps."""
    if isinstance(x, dict):
        return {str(k): jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [jsonable(v) for v in x]
    if isinstance(x, np.ndarray):
        return jsonable(x.tolist())
    if isinstance(x, (complex, np.complexfloating)):
        return [jsonable(float(x.real)), jsonable(float(x.imag))]
    if isinstance(x, (np.bool_, bool)):
        return bool(x)
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, (float, np.floating)):
        x = float(x)
        if math.isnan(x):
            return "nan"
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return x
    return x


def dumps(report):
    body = {"schema": SCHEMA}
    body.update(report)
    return json.dumps(jsonable(body), indent=2, sort_keys=True) + "\n"


def csv_text(header, rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([repr(float(v)) if isinstance(v, (float, np.floating)) else v for v in r])
    return buf.getvalue()
