"""Deterministic text formatting for CSV/JSON outputs."""

import json
import math

import numpy as np


def fmt(x):
    """17 significant digits, '.' decimal, fixed spellings for inf/nan."""
    x = float(x)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    if x == 0.0:
        return "0"
    return format(x, ".17g")


def jsonable(obj):
    """Convert numpy/complex values into plain JSON types ([re, im] pairs)."""
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return jsonable(obj.tolist())
    if isinstance(obj, (complex, np.complexfloating)):
        return [_num(obj.real), _num(obj.imag)]
    if isinstance(obj, (np.floating, float)):
        return _num(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj


def _num(x):
    x = float(x)
    if math.isfinite(x):
        return float(format(x, ".17g"))
    return str(x)


def dump_json(obj, fh):
    json.dump(jsonable(obj), fh, indent=2, sort_keys=True)
    fh.write("\n")
