"""Scenario JSON parsing: numbers, matrices, grids and function specs.

Complex numbers are ``[re, im]`` pairs, matrices are row-major nested lists.
"""

import math

import numpy as np

from .errors import BadParams, SchemaError, UnknownName


def parse_complex(x):
    if isinstance(x, (int, float)):
        return complex(x)
    if isinstance(x, (list, tuple)) and len(x) == 2 and all(isinstance(t, (int, float)) for t in x):
        return complex(x[0], x[1])
    if isinstance(x, str):
        return complex(parse_real(x))
    raise BadParams(f"not a number: {x!r}")


_CONSTS = {"pi": math.pi, "inf": math.inf, "-inf": -math.inf}


def parse_real(x):
    """A float, or a string like "pi/4", "-inf", "atan(1)"."""
    if isinstance(x, (int, float)):
        return float(x)
    if isinstance(x, str):
        s = x.strip()
        if s in _CONSTS:
            return _CONSTS[s]
        allowed = {"pi": math.pi, "atan": math.atan, "sqrt": math.sqrt, "inf": math.inf}
        if not set(s) <= set("0123456789.+-*/() eEpiatnsqrf"):
            raise BadParams(f"cannot parse real value {x!r}")
        try:
            return float(eval(s, {"__builtins__": {}}, allowed))  # restricted arithmetic only
        except Exception as exc:
            raise BadParams(f"cannot parse real value {x!r}") from exc
    raise BadParams(f"not a real number: {x!r}")


def parse_matrix(x):
    """Scalar, ``[re, im]`` pair or nested list -> 2-D complex array."""
    if isinstance(x, (int, float, str)):
        return np.array([[parse_complex(x)]])
    if isinstance(x, (list, tuple)):
        if len(x) == 2 and all(isinstance(t, (int, float)) for t in x) and not isinstance(x[0], list):
            # ambiguous: a 1x2 row is never a valid square matrix, so read as complex
            return np.array([[complex(x[0], x[1])]])
        rows = [[parse_complex(v) for v in row] for row in x]
        if any(len(r) != len(rows) for r in rows):
            raise BadParams("matrix must be square")
        return np.array(rows, dtype=complex)
    raise BadParams(f"not a matrix: {x!r}")


def parse_grid(spec):
    """List of reals, or ``{"linspace": [a, b, num]}``; must be sorted."""
    if isinstance(spec, dict):
        if "linspace" in spec:
            a, b, num = spec["linspace"]
            grid = np.linspace(parse_real(a), parse_real(b), int(num)).tolist()
        else:
            raise BadParams(f"unknown grid spec {spec!r}")
    elif isinstance(spec, list):
        grid = [parse_real(v) for v in spec]
    else:
        raise BadParams("grid must be a list or {'linspace': [a, b, num]}")
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise BadParams("grid must be strictly increasing")
    return grid


def parse_points(spec):
    """List of complex points in the upper half-plane."""
    pts = [parse_complex(v) for v in spec]
    if not pts:
        raise BadParams("empty point list")
    return pts


def require(obj, key, where):
    if not isinstance(obj, dict) or key not in obj:
        raise SchemaError(f"{where}: missing key {key!r}")
    return obj[key]


# -- functions ---------------------------------------------------------------

def build_measure(spec, dim):
    from .measures import MatrixMeasure, constant_piece, power_piece

    atoms = [
        (parse_real(require(a, "at", "atom")), parse_matrix(require(a, "weight", "atom")))
        for a in spec.get("atoms", [])
    ]
    pieces = []
    for p in spec.get("pieces", []):
        kind = p.get("kind", "constant")
        a, b = parse_real(require(p, "a", "piece")), parse_real(require(p, "b", "piece"))
        W = parse_matrix(p.get("weight", [[1.0]] if dim == 1 else None))
        if kind == "constant":
            pieces.append(constant_piece(a, b, parse_real(p.get("value", 1.0)), W))
        elif kind == "power":
            pieces.append(power_piece(a, b, parse_real(p.get("coef", 1.0)),
                                      parse_real(require(p, "exponent", "piece")),
                                      parse_real(p.get("origin", 0.0)), W))
        else:
            raise BadParams(f"unknown piece kind {kind!r}")
    return MatrixMeasure(dim, atoms, pieces)


def build_function(spec):
    """HerglotzFunction from a scenario block.

    Kinds: ``catalog`` (name, params), ``representation`` (C, D, measure),
    ``sum`` (terms), ``diag`` (blocks), ``transformed`` (base, A).
    """
    from . import catalog, herglotz_core as hc, lft

    if not isinstance(spec, dict):
        raise SchemaError("function spec must be an object")
    kind = spec.get("kind", "catalog")
    if kind == "catalog":
        name = require(spec, "name", "function")
        params = {k: parse_real(v) for k, v in spec.get("params", {}).items()}
        return catalog.function(name, **params)
    if kind == "representation":
        C = parse_matrix(spec.get("C", 0.0))
        D = parse_matrix(spec.get("D", 0.0))
        mu = build_measure(spec.get("measure", {}), C.shape[0])
        return hc.RepresentationFunction(C, D, mu)
    if kind == "sum":
        return hc.SumFunction([build_function(t) for t in require(spec, "terms", "sum")])
    if kind == "diag":
        return hc.DirectSumFunction([build_function(t) for t in require(spec, "blocks", "diag")])
    if kind == "transformed":
        base = build_function(require(spec, "base", "transformed"))
        A = lft.from_spec(require(spec, "A", "transformed"), base.dim)
        return lft.apply(A, base)
    raise UnknownName(f"unknown function kind {kind!r}")
