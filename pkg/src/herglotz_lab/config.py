"""Numerical tolerances shared by all modules.

Values can be overridden for the duration of a block with
:func:`override`, which the command line ``--tol-override`` flag uses.
"""

import contextlib
import os

TOL = {
    "tol_herm": 1e-12,
    "psd_tol": 1e-10,
    "rank_rel_tol": 1e-8,
    # boundary ladder
    "bv_tol": 1e-7,
    "t_div": 1e8,
    "pp_tol": 1e-6,
    "ac_abs_tol": 1e-8,
    # representation D ladder
    "d_cauchy": 1e-8,
    # moment ladder
    "delta_div": 1e-6,
    "delta_conv": 1e-10,
    # extension limits
    "t_ext": 1e6,
    # linear-fractional maps
    "pencil_tol": 1e-12,
    "member_tol": 1e-10,
    "quad_abs": 1e-10,
}


def get(name):
    return TOL[name]


@contextlib.contextmanager
def override(**values):
    unknown = set(values) - set(TOL)
    if unknown:
        raise KeyError(f"unknown tolerance(s): {sorted(unknown)}")
    saved = {k: TOL[k] for k in values}
    TOL.update({k: float(v) for k, v in values.items()})
    try:
        yield
    finally:
        TOL.update(saved)


def max_threads():
    """Worker cap from ``HERGLOTZ_LAB_THREADS`` (default 1)."""
    raw = os.environ.get("HERGLOTZ_LAB_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1
