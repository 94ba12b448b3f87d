"""Command line front end.

    herglotz-lab run <scenario.json> [--out DIR] [--tol-override k=v ...]
    herglotz-lab selftest [--filter NAME]
    herglotz-lab catalog list

Exit codes: 0 ok, 2 malformed input, 3 numerical failure, 4 violated
precondition.
"""

import argparse
import io
import json
import math
import os
import sys

import numpy as np

from . import acceptance, boundary, catalog, classify, config, extensions, lft
from . import herglotz_core as hc
from .errors import HerglotzLabError, SchemaError
from .io_utils import dump_json, fmt
from .scenario import (
    build_function, parse_complex, parse_grid, parse_matrix, parse_points, parse_real, require,
)

OPS = ("eval", "invert", "classify", "transform", "xi", "krein", "extension",
       "extension_tests", "borg", "selftest")


def _param(sc, key, default=None):
    """Operation parameters may sit at the top level or under ``params``."""
    params = sc.get("params", {})
    if key in params:
        return params[key]
    return sc.get(key, default)


def _default_points(seed, k=10):
    rng = np.random.default_rng(seed)
    return [complex(x, y) for x, y in zip(rng.uniform(-3, 3, k), rng.uniform(0.1, 3, k))]


def _points(sc):
    spec = _param(sc, "points")
    return parse_points(spec) if spec is not None else _default_points(int(sc.get("seed", 0)))


def _values_csv(points, values):
    out = io.StringIO()
    n = values[0].shape[0]
    cols = ["z_re", "z_im"]
    cols += [f"re_M{j + 1}{k + 1}" for j in range(n) for k in range(n)]
    cols += [f"im_M{j + 1}{k + 1}" for j in range(n) for k in range(n)]
    out.write(",".join(cols) + "\n")
    for z, M in zip(points, values):
        row = [fmt(z.real), fmt(z.imag)] + [fmt(x) for x in M.real.ravel()] + [fmt(x) for x in M.imag.ravel()]
        out.write(",".join(row) + "\n")
    return out.getvalue()


# -- operations ----------------------------------------------------------------------

def op_eval(sc, h):
    pts = _points(sc)
    vals = [h(z) for z in pts]
    rep = hc.verify_herglotz(h)
    summary = {"dim": h.dim, "points": len(pts), "herglotz_ok": rep.ok,
               "imag_rank": rep.common_rank, "failures": rep.failures}
    return _values_csv(pts, vals), summary


def op_invert(sc, h):
    out = {"atoms": [], "densities": [], "intervals": []}
    for lam in _param(sc, "atoms", []):
        lam = parse_real(lam)
        out["atoms"].append({"lambda": lam, "mass": boundary.point_mass(h, lam)})
    for lam in _param(sc, "density", []):
        lam = parse_real(lam)
        out["densities"].append({"lambda": lam, "density": boundary.ac_density(h, lam)})
    for l1, l2 in _param(sc, "intervals", []):
        l1, l2 = parse_real(l1), parse_real(l2)
        ends = boundary.endpoint_atoms(h, l1, l2)
        out["intervals"].append({
            "l1": l1, "l2": l2, "mass": boundary.stieltjes_interval(h, l1, l2),
            "endpoint_atoms": [{"lambda": k, "mass": v} for k, v in sorted(ends.items())],
        })
    if _param(sc, "total_mass", False):
        v = boundary.total_mass(h)
        out["total_mass"] = {"value": v.value, "divergent": v.divergent, "inconclusive": v.inconclusive}
    return None, out


def _profile_csv(prof, xi=None):
    buf = io.StringIO()
    prof.to_csv(buf)
    if xi is None:
        return buf.getvalue()
    lines = buf.getvalue().splitlines()
    out = [lines[0] + ",xi"] + [ln + "," + fmt(x) for ln, x in zip(lines[1:], xi)]
    return "\n".join(out) + "\n"


def op_classify(sc, h):
    grid = parse_grid(require(sc.get("params", sc), "grid", "classify"))
    prof = classify.scan_support(h, grid)
    if _param(sc, "refine_atoms", True):
        prof = classify.refine_atoms(h, prof)
    xi = None
    if h.dim == 1 and _param(sc, "xi", True):
        xi = []
        for lam in prof.grid:
            try:
                xi.append(classify.xi_scalar(h, lam))
            except HerglotzLabError:
                xi.append(math.nan)
    summary = {"grid_points": len(grid), "located_atoms": len(prof.grid) - len(grid),
               "sets": classify.support_summary(prof)}
    return _profile_csv(prof, xi), summary


def op_transform(sc, h):
    A = lft.from_spec(require(sc.get("params", sc), "A", "transform"), h.dim)
    hA = lft.apply(A, h)
    pts = _points(sc)
    vals = [hA(z) for z in pts]
    resid = {}
    for z in pts:
        for k, v in lft.identity_residuals(A, h(z)).items():
            resid[k] = max(resid.get(k, 0.0), v)
    summary = {"member": lft.is_member(A.A), "membership_residual": lft.membership_residual(A),
               "max_identity_residuals": resid, "herglotz_ok": hc.verify_herglotz(hA).ok}
    return _values_csv(pts, vals), summary


def op_xi(sc, h):
    grid = parse_grid(require(sc.get("params", sc), "grid", "xi"))
    buf = io.StringIO()
    n = h.dim
    if n == 1:
        buf.write("lambda,xi,clamp\n")
        for lam in grid:
            v = classify.xi_scalar(h, lam, detail=True)
            buf.write(f"{fmt(lam)},{fmt(v.value)},{fmt(v.clamp_distance)}\n")
    else:
        cols = [f"re_Xi{j + 1}{k + 1}" for j in range(n) for k in range(n)]
        cols += [f"im_Xi{j + 1}{k + 1}" for j in range(n) for k in range(n)]
        buf.write(",".join(["lambda"] + cols + ["clamp"]) + "\n")
        for lam in grid:
            X, c = classify.xi_matrix(h, lam, detail=True)
            row = [fmt(lam)] + [fmt(x) for x in X.real.ravel()] + [fmt(x) for x in X.imag.ravel()] + [fmt(c)]
            buf.write(",".join(row) + "\n")
    summary = {"grid_points": len(grid)}
    if _param(sc, "duality", False):
        summary["duality"] = classify.xi_duality_check(h, grid)
    return buf.getvalue(), summary


def _krein_data(block, n):
    if "P_i" in block:
        return extensions.KreinData(parse_matrix(block["P_i"]))
    if "alpha2" in block:
        a = block["alpha2"]
        a = parse_real(a) if isinstance(a, (str, int, float)) else parse_matrix(a)
        return extensions.KreinData.from_alpha2(a, n)
    raise SchemaError("krein block needs P_i or alpha2")


def op_krein(sc, h):
    block = sc.get("krein") or {k: sc[k] for k in ("P_i", "alpha2") if k in sc}
    if not block:
        block = {k: v for k, v in sc.get("params", {}).items() if k in ("P_i", "alpha2")}
    kd = _krein_data(block, h.dim)
    M2 = extensions.krein_transform(h, kd)
    pts = _points(sc)
    vals = [M2(z) for z in pts]
    summary = {"P_i": kd.P_i, "im_P_i_inverse_deviation":
               float(np.linalg.norm(np.linalg.inv(kd.P_i).imag + np.eye(h.dim))) if h.dim == 1 else
               float(np.linalg.norm((np.linalg.inv(kd.P_i) - np.linalg.inv(kd.P_i).conj().T) / 2j + np.eye(h.dim))),
               "herglotz_ok": hc.verify_herglotz(M2).ok}
    if getattr(h, "name", None) == "kreinB_M1" and "alpha2" in block and h.dim == 1:
        a2 = parse_real(block["alpha2"])
        ref = catalog.function("kreinB_M2", alpha2=a2)
        summary["max_deviation_closed_form_M2"] = max(abs(complex(M2(z)[0, 0] - ref(z)[0, 0])) for z in pts)
        if abs(math.cos(a2)) > 1e-12:
            P = catalog.function("kreinB_P", alpha2=a2)
            summary["max_deviation_closed_form_P"] = max(
                abs(complex(extensions.krein_p_of_z(kd, h, z)[0, 0] - P(z)[0, 0])) for z in pts)
    return _values_csv(pts, vals), summary


def op_extension(sc, h):
    src = {**sc, **sc.get("params", {})}
    if "rank_one" in src:
        b = src["rank_one"]
        img = extensions.rank_one_image(h, parse_real(b["alpha"]), parse_real(b["beta"]))
        kind = "rank_one"
    elif "finite_rank" in src:
        b = src["finite_rank"]
        img = extensions.finite_rank_image(h, [parse_real(x) for x in b["alpha"]],
                                           [parse_real(x) for x in b["beta"]])
        kind = "finite_rank"
    elif "extension" in src:
        b = src["extension"]
        img = extensions.extension_image(h, parse_matrix(b["alpha_matrix"]), parse_matrix(b["beta_matrix"]))
        kind = "extension"
    else:
        raise SchemaError("extension op needs a rank_one, finite_rank or extension block")
    pts = _points(sc)
    vals = [img(z) for z in pts]
    return _values_csv(pts, vals), {"kind": kind, "herglotz_ok": hc.verify_herglotz(img).ok}


def op_extension_tests(sc, h):
    out = {}
    for name, fn in (("friedrichs", extensions.friedrichs_test), ("krein", extensions.krein_test)):
        out[name] = fn(h)
    for which in ("F", "K"):
        di = extensions.domain_intersection_test(h, which)
        out[f"domain_intersection_{which}"] = {"finite": di.finite, "limit": di.limit}
    return None, out


def op_borg(sc, h_unused):
    src = {**sc, **sc.get("params", {})}
    b = require(src, "borg", "borg")
    a = lft.from_spec(b.get("a", {"name": "shear", "T": 1.0}), 1)
    norm = dict(require(b, "normalization", "borg"))
    if norm.get("kind") == "value":
        norm["z0"] = parse_complex(norm["z0"])
        norm["value"] = parse_complex(norm["value"])
    data = classify.TwoSpectra([parse_real(x) for x in require(b, "poles", "borg")],
                               [parse_real(x) for x in require(b, "zeros", "borg")], norm)
    m = classify.borg_reconstruct(data, a)
    pts = _points(sc)
    C, D, mu = m.truth
    summary = {"scale": m.K, "C": C, "D": D,
               "atoms": [{"lambda": x.position, "mass": x.weight} for x in mu.atoms]}
    return _values_csv(pts, [m(z) for z in pts]), summary


def op_selftest(sc, h_unused):
    results = acceptance.run(_param(sc, "filter"))
    return None, {"checks": [{"name": r.name, "passed": r.passed, "worst": r.worst, "tol": r.tol,
                              "detail": r.detail} for r in results],
                  "all_passed": all(r.passed for r in results)}


DISPATCH = {
    "eval": op_eval, "invert": op_invert, "classify": op_classify, "transform": op_transform,
    "xi": op_xi, "krein": op_krein, "extension": op_extension,
    "extension_tests": op_extension_tests, "borg": op_borg, "selftest": op_selftest,
}


def run_scenario(sc, out_dir, stem):
    if not isinstance(sc, dict):
        raise SchemaError("scenario must be a JSON object")
    op = require(sc, "op", "scenario")
    if op not in DISPATCH:
        raise SchemaError(f"unknown op {op!r}; expected one of {', '.join(OPS)}")
    h = None
    if op not in ("selftest", "borg"):
        h = build_function(require(sc, "function", "scenario"))
    csv_text, summary = DISPATCH[op](sc, h)
    outputs = sc.get("outputs", {})
    os.makedirs(out_dir, exist_ok=True)
    written = []
    if csv_text is not None:
        path = os.path.join(out_dir, outputs.get("csv", f"{stem}.csv"))
        with open(path, "w", newline="\n", encoding="utf-8") as fh:
            fh.write(csv_text)
        written.append(path)
    path = os.path.join(out_dir, outputs.get("json", f"{stem}.json"))
    doc = {"op": op, "function": h.describe() if h is not None else None, "result": summary}
    with open(path, "w", newline="\n", encoding="utf-8") as fh:
        dump_json(doc, fh)
    written.append(path)
    return summary, written


def _parse_overrides(items):
    out = {}
    for item in items or []:
        if "=" not in item:
            raise SchemaError(f"--tol-override expects key=value, got {item!r}")
        k, v = item.split("=", 1)
        if k not in config.TOL:
            raise SchemaError(f"unknown tolerance {k!r}")
        try:
            out[k] = float(v)
        except ValueError as exc:
            raise SchemaError(f"tolerance {k} needs a number") from exc
    return out


def cmd_run(args):
    try:
        with open(args.scenario, encoding="utf-8") as fh:
            sc = json.load(fh)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"invalid JSON: {exc}") from exc
    stem = sc.get("name") if isinstance(sc, dict) and sc.get("name") else os.path.splitext(os.path.basename(args.scenario))[0]
    with config.override(**_parse_overrides(args.tol_override)):
        summary, written = run_scenario(sc, args.out, stem)
    for p in written:
        print(p)
    if sc.get("op") == "selftest" and not summary["all_passed"]:
        return 3
    return 0


def cmd_selftest(args):
    results = acceptance.run(args.filter)
    if not results:
        print(f"no check matches {args.filter!r}")
        return 2
    for r in results:
        print(r.line())
        for d in r.detail[:5]:
            print(f"      {d}")
    ok = all(r.passed for r in results)
    print(f"{sum(r.passed for r in results)}/{len(results)} checks passed")
    return 0 if ok else 3


def cmd_catalog(args):
    for row in catalog.describe_all():
        params = ", ".join(f"{k}={v:g}" for k, v in row["params"].items())
        truth = "measure" if row["truth"] else "no measure"
        print(f"{row['name']:<20} {params:<28} {truth:<11} {row['notes']}")
    return 0


def build_parser():
    p = argparse.ArgumentParser(prog="herglotz-lab", description="Herglotz function toolkit")
    sub = p.add_subparsers(dest="command", required=True)
    r = sub.add_parser("run", help="run a scenario file")
    r.add_argument("scenario")
    r.add_argument("--out", default=".", help="output directory")
    r.add_argument("--tol-override", action="append", metavar="KEY=VALUE")
    r.set_defaults(func=cmd_run)
    s = sub.add_parser("selftest", help="run the acceptance checks")
    s.add_argument("--filter", default=None, help="substring of a check name")
    s.set_defaults(func=cmd_selftest)
    c = sub.add_parser("catalog", help="catalog commands")
    c.add_argument("action", choices=["list"])
    c.set_defaults(func=cmd_catalog)
    return p


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        return args.func(args)
    except HerglotzLabError as exc:
        print(f"error ({type(exc).__name__}): {exc}", file=sys.stderr)
        return exc.exit_code
    except (OSError, KeyError, TypeError, ValueError) as exc:
        print(f"error ({type(exc).__name__}): {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
