"""Command-line interface and pipeline orchestration.

Subcommands: algebra info, connection build, check flatness, check euler,
singular analyze, solve local, transport, monodromy, run.  All file formats
are documented in docs/formats.md.  Exit codes: 0 ok, 2 configuration error,
3 numeric or degenerate error, 4 inconclusive verdict.
"""

import argparse
import csv
import dataclasses
import json
import logging
import os
import sys
from fractions import Fraction
from importlib import resources
from pathlib import Path

import numpy as np

from . import autmod, connection, frobenius, liealg, singular, transport
from ._canonjson import dump_canonical
from .errors import (
    ConfigurationError,
    InconclusiveVerdictError,
    IrreducibilityError,
    NumericError,
    TkzError,
)

log = logging.getLogger("tkz")


# -- small converters ---------------------------------------------------------


def j2c(v) -> complex:
    """JSON value -> complex: number, [re, im], or 'p/q' string."""
    if isinstance(v, (int, float)):
        return complex(v)
    if isinstance(v, str):
        return complex(Fraction(v))
    if isinstance(v, (list, tuple)) and len(v) == 2:
        return complex(float(v[0]), float(v[1]))
    if isinstance(v, dict) and set(v) == {"num", "den"}:
        return complex(Fraction(int(v["num"]), int(v["den"])))
    raise ConfigurationError(f"cannot parse complex value {v!r}")


def c2j(z: complex) -> list:
    z = complex(z)
    return [z.real, z.imag]


def mat2j(M) -> list:
    return [[c2j(v) for v in row] for row in np.asarray(M)]


def j2mat(data) -> np.ndarray:
    return np.array([[j2c(v) for v in row] for row in data])


def frac2j(f: Fraction) -> dict:
    return {"num": f.numerator, "den": f.denominator}


# -- config ingestion ---------------------------------------------------------


def load_config(path_or_name: str) -> dict:
    p = Path(path_or_name)
    if p.exists():
        return json.loads(p.read_text())
    candidate = resources.files("tkz").joinpath("data", path_or_name)
    if not path_or_name.endswith(".json"):
        candidate = resources.files("tkz").joinpath("data", path_or_name + ".json")
    if candidate.is_file():
        return json.loads(candidate.read_text())
    raise ConfigurationError(f"config {path_or_name!r} not found on disk or in bundled data")


def _build_rep_from_spec(spec, alg) -> liealg.ModuleRep:
    if not isinstance(spec, dict) or "type" not in spec:
        raise ConfigurationError(f"slot spec must be a dict with a 'type': {spec!r}")
    kind = spec["type"]
    if kind == "sl2_spin":
        return liealg.build_irrep_sl2(autmod.parse_rational(spec["spin"]))
    if kind == "trivial":
        rep = liealg.ModuleRep(dim=1, action=(np.zeros((1, 1)),) * alg.dim)
        return rep
    if kind == "matrices":
        action = []
        for m in spec["action"]:
            action.append(None if m is None else j2mat(m))
        dims = {m.shape[0] for m in action if m is not None}
        if len(dims) != 1:
            raise ConfigurationError("matrices slot needs square matrices of one size")
        rep = liealg.ModuleRep(dim=dims.pop(), action=tuple(action))
        liealg.validate_rep(alg, rep)
        return rep
    raise ConfigurationError(f"unknown slot type {kind!r}")


def _build_twisted_from_spec(spec, aut) -> liealg.ModuleRep:
    if spec == "trivial" or (isinstance(spec, dict) and spec.get("type") == "trivial"):
        return autmod.twisted_slot_rep(aut, "trivial")
    if isinstance(spec, dict) and spec.get("type") == "matrices":
        entries = {int(k): j2mat(v) for k, v in spec["entries"].items()}
        return autmod.twisted_slot_rep(aut, entries)
    if isinstance(spec, dict) and spec.get("type") == "sl2_spin":
        rep = liealg.build_irrep_sl2(autmod.parse_rational(spec["spin"]))
        return autmod.twisted_slot_rep(aut, rep)
    raise ConfigurationError(f"unknown twisted slot spec {spec!r}")


def build_system_from_config(cfg: dict):
    """Config -> (alg, aut, slot reps, twisted rep, omega, connection)."""
    alg = liealg.build_algebra(cfg["algebra"]["name"])
    aut_cfg = cfg.get("automorphism", {"type": "inner", "fractions": [0] * (alg.defining[0].shape[0] - 1)})
    if aut_cfg["type"] == "inner":
        aut = autmod.inner_automorphism(alg, aut_cfg["fractions"])
    elif aut_cfg["type"] == "matrix":
        aut = autmod.matrix_automorphism(alg, j2mat(aut_cfg["entries"]))
    else:
        raise ConfigurationError(f"unknown automorphism type {aut_cfg['type']!r}")
    level = j2c(cfg["level"])
    n = int(cfg["N"])
    slots = cfg["slots"]
    untwisted = [_build_rep_from_spec(s, alg) for s in slots["untwisted"]]
    if len(untwisted) != n:
        raise ConfigurationError(f"N = {n} but {len(untwisted)} untwisted slots given")
    def _with_weight(rep):
        if set(rep.defined_indices()) != set(range(alg.dim)):
            return rep  # partial twisted-slot action: no Casimir scalar
        try:
            w = liealg.conformal_weight(alg, rep, level)
        except IrreducibilityError:
            return rep  # reducible slots are allowed; weight stays unset
        return dataclasses.replace(rep, conformal_weight=w)

    untwisted = [_with_weight(r) for r in untwisted]
    twisted = _with_weight(_build_twisted_from_spec(slots.get("twisted", "trivial"), aut))
    dim0 = int(slots.get("slot0_dim", 1))
    omega = connection.build_omega_set(
        alg,
        aut,
        level,
        untwisted,
        twisted,
        dim0=dim0,
        slot_term_order=cfg.get("slot_term_order", "displayed"),
    )
    conn = connection.assemble_connection(
        omega, aut, metadata={"algebra": cfg["algebra"]["name"], "config_N": n}
    )
    return alg, aut, untwisted, twisted, omega, conn


def sample_points(rng, n: int, count: int, domain: dict):
    """Random points in M^N: moduli in [radius_min, radius_max], pairwise
    separation at least min_separation; random branch tuples in {-1, 0, 1}."""
    rmin = float(domain.get("radius_min", 0.6))
    rmax = float(domain.get("radius_max", 1.8))
    sep = float(domain.get("min_separation", 0.3))
    pts, branches = [], []
    attempts = 0
    while len(pts) < count:
        attempts += 1
        if attempts > 1000 * count:
            raise NumericError("could not sample enough separated points")
        z = tuple(
            rng.uniform(rmin, rmax) * np.exp(2j * np.pi * rng.uniform())
            for _ in range(n)
        )
        if all(
            abs(z[i] - z[j]) >= sep for i in range(n) for j in range(i + 1, n)
        ):
            pts.append(z)
            branches.append(tuple(int(b) for b in rng.integers(-1, 2, size=n)))
    return pts, branches


# -- pipeline -----------------------------------------------------------------


def run_pipeline(cfg: dict, out_dir: Path | None = None) -> dict:
    """Execute the configured stages and return the report dict."""
    out_dir = Path(out_dir) if out_dir else Path.cwd()
    seed = int(cfg.get("seed", 0))
    rng = np.random.default_rng(seed)
    report: dict = {"seed": seed, "stages": {}}

    def stage(name):
        log.info("stage: %s", name)
        return report["stages"].setdefault(name, {})

    alg, aut, untwisted, twisted, omega, conn = build_system_from_config(cfg)
    stage("algebra").update(
        {
            "name": cfg["algebra"]["name"],
            "dim": alg.dim,
            "dual_coxeter": frac2j(alg.dual_coxeter),
            "basis_labels": list(alg.basis_labels),
        }
    )
    stage("automorphism").update(
        {
            "order": aut.order,
            "alpha": [frac2j(a) for a in aut.alpha[: alg.dim]],
            "fixed_subalgebra": list(autmod.fixed_subalgebra(aut)),
        }
    )
    stage("slots").update(
        {
            "dims": list(conn.dims),
            "conformal_weights": [
                None if r.conformal_weight is None else c2j(r.conformal_weight)
                for r in untwisted + [twisted]
            ],
        }
    )
    degs = conn.entry_degrees()
    stage("connection").update(
        {
            "N": conn.N,
            "t": conn.t,
            "state_dim": conn.state_dim,
            "terms_per_equation": [len(eq) for eq in conn.terms],
            "degrees": sorted(str(d) for d in degs),
            "homogeneous_degree_minus_one": degs <= {Fraction(-1)},
        }
    )

    checks = cfg.get("checks", {})
    domain = checks.get("point_domain", {})
    if checks.get("euler_points"):
        pts, brs = sample_points(rng, conn.N, int(checks["euler_points"]), domain)
        res = connection.euler_contraction(conn, pts, brs)
        stage("euler").update(
            {
                "matrix": mat2j(res.mean),
                "max_deviation": res.max_deviation,
                "points": len(pts),
            }
        )
    if checks.get("flatness_points"):
        pts, brs = sample_points(rng, conn.N, int(checks["flatness_points"]), domain)
        rows = []
        for z, p in zip(pts, brs):
            fr = connection.flatness_residual(conn, z, p)
            rows.append(
                {
                    "z": [c2j(v) for v in z],
                    "branches": list(p),
                    "residual": fr.max_residual,
                    "est_error": fr.est_error,
                }
            )
        stage("flatness").update(
            {
                "per_point": rows,
                "max_residual": max((r["residual"] for r in rows), default=0.0),
                "asserted_zero": False,
            }
        )

    analyses = []
    transformed = []
    for idx, ch in enumerate(cfg.get("changes", [])):
        cov = singular.ChangeOfVariables(
            A=j2mat(ch["A"]),
            beta=np.array([j2c(v) for v in ch["beta"]]),
            delta=tuple(ch["delta"]),
            t=int(ch.get("t", conn.t)),
        )
        cutoff = ch.get("cutoff", 8)
        ts = singular.transform_system(conn, cov, cutoff)
        verdict = singular.check_simple_singularity(ts)
        entry = {
            "change_index": idx,
            "name": ch.get("name", f"change-{idx}"),
            "beta_is_zero": bool(np.all(np.abs(cov.beta) == 0)),
            "holomorphic": verdict.holomorphic,
            "offenders": [
                {
                    "component": o.component,
                    "row": o.row,
                    "col": o.col,
                    "exponents": [f"{e}" for e in o.exponents],
                }
                for o in verdict.offenders
            ],
        }
        if verdict.holomorphic:
            per_component = []
            for j in range(conn.N):
                ind = singular.indicial_data(ts, j)
                per_component.append(
                    {
                        "component": j,
                        "H0": mat2j(ind.H0),
                        "exponents": [
                            {"value": c2j(v), "multiplicity": m} for v, m in ind.exponents
                        ],
                        "resonant": ind.resonant,
                    }
                )
            entry["indicial"] = per_component
        analyses.append(entry)
        transformed.append(ts)
    if analyses:
        stage("singular")["analyses"] = analyses

    locals_out = []
    for req in cfg.get("solve_local", []):
        ts = transformed[int(req.get("change", 0))]
        j = int(req.get("component", 0))
        fixed = {int(k): j2c(v) for k, v in req.get("fix", {}).items()}
        order = int(req.get("order", cfg.get("truncation", {}).get("frobenius_order", 12)))
        cutoff_j = ts.cutoffs[j]
        if cutoff_j is not None:
            order = min(order, int(cutoff_j) - 1)
        H = singular.restrict_component(ts, j, fixed, order=order)
        sol = frobenius.frobenius_fundamental(H, order=order, r_H=float(req.get("r_H", 1.0)))
        eta_chk = 0.25 * sol.radius
        locals_out.append(
            {
                "change": int(req.get("change", 0)),
                "component": j,
                "order": sol.order,
                "Lambda": mat2j(sol.Lambda),
                "exponents": [
                    {"value": c2j(v), "multiplicity": m}
                    for v, m in singular.cluster_eigenvalues(np.linalg.eigvals(sol.Lambda))
                ],
                "radius": sol.radius,
                "s0_determinant": c2j(sol.s0_determinant),
                "residual_at_quarter_radius": frobenius.solution_residual(sol, H, eta_chk),
                "monodromy_factor": mat2j(sol.monodromy_factor()),
            }
        )
    if locals_out:
        stage("frobenius")["solutions"] = locals_out

    transports = []
    for idx, p in enumerate(cfg.get("paths", [])):
        path = transport.PathSpec.from_json(p)
        psi0 = (
            np.array([j2c(v) for v in p["psi0"]])
            if "psi0" in p
            else np.ones(conn.state_dim, dtype=complex)
        )
        res = transport.integrate_path(conn, path, psi0, tol=float(p.get("tol", 1e-10)))
        transports.append(
            {
                "path_index": idx,
                "psi": [c2j(v) for v in res.psi],
                "est_error": res.est_error,
                "end_branches": list(res.end_branches),
                "n_steps": res.n_steps,
            }
        )
    if transports:
        stage("transport")["results"] = transports

    monodromies = []
    for idx, l in enumerate(cfg.get("loops", [])):
        loop = transport.PathSpec.from_json(l)
        seed_m = j2mat(l["basis_seed"]) if "basis_seed" in l else None
        res = transport.monodromy_loop(conn, loop, seed_m, tol=float(l.get("tol", 1e-10)))
        monodromies.append(
            {
                "loop_index": idx,
                "matrix": mat2j(res.matrix),
                "est_error": res.est_error,
                "determinant": c2j(np.linalg.det(res.matrix)),
            }
        )
    if monodromies:
        stage("monodromy")["results"] = monodromies

    output = cfg.get("output", {})
    if output.get("report"):
        dump_canonical(report, out_dir / output["report"])
    if output.get("csv_dir"):
        _write_csvs(report, out_dir / output["csv_dir"])
    return report


def _write_csvs(report: dict, csv_dir: Path) -> None:
    csv_dir.mkdir(parents=True, exist_ok=True)
    singular_stage = report["stages"].get("singular", {})
    rows = []
    for ana in singular_stage.get("analyses", []):
        for comp in ana.get("indicial", []):
            for ex in comp["exponents"]:
                rows.append(
                    [
                        ana["change_index"],
                        comp["component"],
                        ex["value"][0],
                        ex["value"][1],
                        ex["multiplicity"],
                    ]
                )
    with open(csv_dir / "exponents.csv", "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["change_index", "component", "exponent_re", "exponent_im", "multiplicity"])
        w.writerows(rows)
    flat = report["stages"].get("flatness", {})
    with open(csv_dir / "residuals.csv", "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["point_index", "residual", "est_error"])
        for i, row in enumerate(flat.get("per_point", [])):
            w.writerow([i, row["residual"], row["est_error"]])


# -- subcommand handlers ------------------------------------------------------


def _cmd_algebra_info(args) -> int:
    alg = liealg.build_algebra(args.name)
    info = {
        "name": args.name,
        "dim": alg.dim,
        "dual_coxeter": frac2j(alg.dual_coxeter),
        "basis_labels": list(alg.basis_labels),
        "form": mat2j(alg.form),
    }
    if args.out:
        dump_canonical(info, args.out)
    else:
        print(json.dumps(info, indent=2))
    return 0


def _cmd_connection_build(args) -> int:
    cfg = load_config(args.config)
    *_rest, conn = build_system_from_config(cfg)
    dump_canonical(conn.to_json(), args.out)
    print(f"wrote {args.out}: N={conn.N}, t={conn.t}, state_dim={conn.state_dim}")
    return 0


def _load_points(path: str, n: int):
    data = json.loads(Path(path).read_text())
    pts = [tuple(j2c(v) for v in z) for z in data["points"]]
    branches = [tuple(int(b) for b in p) for p in data.get("branches", [])]
    if not branches:
        branches = [(0,) * n] * len(pts)
    return pts, branches


def _cmd_check_flatness(args) -> int:
    conn = connection.ConnectionSystem.from_json(json.loads(Path(args.conn).read_text()))
    pts, branches = _load_points(args.points, conn.N)
    rows = []
    for z, p in zip(pts, branches):
        fr = connection.flatness_residual(conn, z, p)
        rows.append({"z": [c2j(v) for v in z], "residual": fr.max_residual, "est_error": fr.est_error})
        print(f"flatness residual at {z}: {fr.max_residual:.6e} (est_error {fr.est_error:.2e})")
    out = {"per_point": rows, "max_residual": max((r["residual"] for r in rows), default=0.0)}
    if args.out:
        dump_canonical(out, args.out)
    return 0


def _cmd_check_euler(args) -> int:
    conn = connection.ConnectionSystem.from_json(json.loads(Path(args.conn).read_text()))
    pts, branches = _load_points(args.points, conn.N)
    res = connection.euler_contraction(conn, pts, branches)
    print(f"euler contraction deviation across {len(pts)} points: {res.max_deviation:.3e}")
    if args.out:
        dump_canonical({"matrix": mat2j(res.mean), "max_deviation": res.max_deviation}, args.out)
    return 0


def _cmd_singular_analyze(args) -> int:
    conn = connection.ConnectionSystem.from_json(json.loads(Path(args.conn).read_text()))
    cov = singular.ChangeOfVariables.from_json(json.loads(Path(args.change).read_text()))
    ts = singular.transform_system(conn, cov, args.cutoff)
    verdict = singular.check_simple_singularity(ts)
    out = {
        "holomorphic": verdict.holomorphic,
        "offenders": [
            {"component": o.component, "row": o.row, "col": o.col, "exponents": [str(e) for e in o.exponents]}
            for o in verdict.offenders
        ],
    }
    if verdict.holomorphic:
        out["indicial"] = []
        for j in range(conn.N):
            ind = singular.indicial_data(ts, j)
            out["indicial"].append(
                {
                    "component": j,
                    "H0": mat2j(ind.H0),
                    "exponents": [{"value": c2j(v), "multiplicity": m} for v, m in ind.exponents],
                    "resonant": ind.resonant,
                }
            )
    print("holomorphic" if verdict.holomorphic else f"NOT holomorphic ({len(verdict.offenders)} offenders)")
    if args.out:
        dump_canonical(out, args.out)
    if args.emit_system:
        fixed = {}
        for spec in args.fix or []:
            k, v = spec.split("=", 1)
            fixed[int(k)] = complex(v)
        comps = []
        for j in range(conn.N):
            fx = {k: v for k, v in fixed.items() if k != j}
            H = singular.restrict_component(ts, j, fx)
            comps.append({"H": [mat2j(h) for h in H]})
        dump_canonical({"state_dim": conn.state_dim, "components": comps}, args.emit_system)
    return 0


def _cmd_solve_local(args) -> int:
    data = json.loads(Path(args.system).read_text())
    H = [j2mat(h) for h in data["components"][args.component]["H"]]
    sol = frobenius.frobenius_fundamental(H, order=args.order, r_H=args.r_h)
    out = {
        "Lambda": mat2j(sol.Lambda),
        "S_coeffs": [mat2j(s) for s in sol.S_coeffs],
        "order": sol.order,
        "radius": sol.radius,
        "s0_determinant": c2j(sol.s0_determinant),
        "resonant_shifts": [m for m, _ in sol.resonance_shifts],
        "nil": mat2j(sol.nil) if sol.nil is not None else None,
    }
    if args.out:
        dump_canonical(out, args.out)
    print(f"local solution: order {sol.order}, radius {sol.radius:.4g}")
    return 0


def _cmd_transport(args) -> int:
    conn = connection.ConnectionSystem.from_json(json.loads(Path(args.conn).read_text()))
    pdata = json.loads(Path(args.path).read_text())
    path = transport.PathSpec.from_json(pdata)
    psi0 = (
        np.array([j2c(v) for v in pdata["psi0"]])
        if "psi0" in pdata
        else np.ones(conn.state_dim, dtype=complex)
    )
    res = transport.integrate_path(conn, path, psi0, tol=args.tol)
    out = {
        "psi": [c2j(v) for v in res.psi],
        "est_error": res.est_error,
        "end_branches": list(res.end_branches),
        "end_thetas": list(res.end_thetas),
        "diff_windings": res.diff_windings,
        "n_steps": res.n_steps,
    }
    print(f"transport finished in {res.n_steps} steps, est_error {res.est_error:.3e}")
    if args.out:
        dump_canonical(out, args.out)
    return 0


def _cmd_monodromy(args) -> int:
    conn = connection.ConnectionSystem.from_json(json.loads(Path(args.conn).read_text()))
    ldata = json.loads(Path(args.loop).read_text())
    loop = transport.PathSpec.from_json(ldata)
    seed = j2mat(ldata["basis_seed"]) if "basis_seed" in ldata else None
    res = transport.monodromy_loop(conn, loop, seed, tol=args.tol)
    out = {
        "matrix": mat2j(res.matrix),
        "est_error": res.est_error,
        "determinant": c2j(np.linalg.det(res.matrix)),
    }
    print(f"monodromy est_error {res.est_error:.3e}")
    if args.out:
        dump_canonical(out, args.out)
    return 0


def _cmd_run(args) -> int:
    cfg = load_config(args.config)
    report = run_pipeline(cfg, out_dir=Path(args.out_dir) if args.out_dir else None)
    target = cfg.get("output", {}).get("report")
    if target:
        print(f"report written to {Path(args.out_dir or '.') / target}")
    else:
        print(json.dumps(report, indent=2, default=str))
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="tkz", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    alg = sub.add_parser("algebra", help="algebra utilities").add_subparsers(
        dest="sub", required=True
    )
    p = alg.add_parser("info", help="print algebra data")
    p.add_argument("--name", required=True)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_algebra_info)

    p = sub.add_parser("connection", help="connection utilities").add_subparsers(
        dest="sub", required=True
    ).add_parser("build", help="build and serialize the connection")
    p.add_argument("--config", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_connection_build)

    chk = sub.add_parser("check", help="consistency checks").add_subparsers(
        dest="sub", required=True
    )
    p = chk.add_parser("flatness", help="report flatness residuals")
    p.add_argument("--conn", required=True)
    p.add_argument("--points", required=True)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_check_flatness)
    p = chk.add_parser("euler", help="Euler contraction constancy")
    p.add_argument("--conn", required=True)
    p.add_argument("--points", required=True)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_check_euler)

    p = sub.add_parser("singular", help="singularity analysis").add_subparsers(
        dest="sub", required=True
    ).add_parser("analyze", help="holomorphy verdict and indicial data")
    p.add_argument("--conn", required=True)
    p.add_argument("--change", required=True)
    p.add_argument("--cutoff", type=int, default=8)
    p.add_argument("--out")
    p.add_argument("--emit-system", dest="emit_system")
    p.add_argument("--fix", action="append", help="k=value for frozen variables")
    p.set_defaults(func=_cmd_singular_analyze)

    p = sub.add_parser("solve", help="local solutions").add_subparsers(
        dest="sub", required=True
    ).add_parser("local", help="Frobenius fundamental solution")
    p.add_argument("--system", required=True)
    p.add_argument("--component", type=int, required=True)
    p.add_argument("--order", type=int, default=frobenius.DEFAULT_ORDER)
    p.add_argument("--r-h", dest="r_h", type=float, default=1.0)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_solve_local)

    p = sub.add_parser("transport", help="integrate along a path")
    p.add_argument("--conn", required=True)
    p.add_argument("--path", required=True)
    p.add_argument("--tol", type=float, default=1e-10)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_transport)

    p = sub.add_parser("monodromy", help="monodromy around a loop")
    p.add_argument("--conn", required=True)
    p.add_argument("--loop", required=True)
    p.add_argument("--tol", type=float, default=1e-10)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_monodromy)

    p = sub.add_parser("run", help="run the configured pipeline")
    p.add_argument("--config", required=True)
    p.add_argument("--out-dir", dest="out_dir")
    p.set_defaults(func=_cmd_run)
    return ap


def main(argv=None) -> int:
    logging.basicConfig(level=os.environ.get("TKZ_LOG", "WARNING").upper())
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except ConfigurationError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    except NumericError as exc:
        print(f"numeric error: {exc}", file=sys.stderr)
        return 3
    except InconclusiveVerdictError as exc:
        print(f"inconclusive: {exc}", file=sys.stderr)
        return 4
    except TkzError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
