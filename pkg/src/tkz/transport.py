"""Parallel transport along polyline paths in the configuration space
{ z_i != 0, z_i != z_j }, monodromy around the singular locus, and
cross-validation against local Frobenius solutions.

The integrator is an embedded Dormand-Prince 5(4) pair with adaptive steps.
Branches are carried as continuous arguments for every z_i and every
difference z_i - z_j (a straight segment avoiding a point subtends less than
pi around it, so per-segment argument increments are principal values);
endpoints convert back to discrete l_p indices.  The step size is capped by
half the distance to the singular locus over the local speed.
"""

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from .connection import ConnectionSystem
from .errors import ConfigurationError, ProximityError
from .frobenius import FrobeniusSolution, eval_solution
from .rcalc import arg2pi

# Dormand-Prince 5(4) tableau
_C = (0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0)
_A = (
    (),
    (1 / 5,),
    (3 / 40, 9 / 40),
    (44 / 45, -56 / 15, 32 / 9),
    (19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729),
    (9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656),
    (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84),
)
_B5 = (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0)
_B4 = (5179 / 57600, 0.0, 7571 / 16695, 393 / 640, -92097 / 339200, 187 / 2100, 1 / 40)
_E = tuple(b5 - b4 for b5, b4 in zip(_B5, _B4))

MIN_STEP_FRACTION = 1e-13


def _dopri_step(rhs, s, y, h):
    k = [rhs(s, y)]
    for i in range(1, 7):
        yi = y + h * sum(a * kk for a, kk in zip(_A[i], k))
        k.append(rhs(s + _C[i] * h, yi))
    y5 = y + h * sum(b * kk for b, kk in zip(_B5, k) if b != 0.0)
    err = h * sum(e * kk for e, kk in zip(_E, k) if e != 0.0)
    return y5, err


def transport_ode(rhs, y0, s0, s1, tol, max_step=None, describe=None):
    """Integrate y' = rhs(s, y) from s0 to s1 adaptively.

    Returns (y, est_error, n_steps, max_local_est) where est_error accumulates
    the per-step embedded error estimates of accepted steps.
    """
    span = s1 - s0
    y = np.array(y0, dtype=complex)
    s = s0
    cap = max_step(s0) if max_step else span
    h = min(span / 16, cap) if cap > 0 else span / 16
    est = 0.0
    max_local = 0.0
    nsteps = 0
    while s < s1 - 1e-12 * span:
        h_prop = min(h, max_step(s)) if max_step else h
        if h_prop < MIN_STEP_FRACTION * span:
            where = describe(s) if describe else f"s = {s:.6g}"
            raise ProximityError(f"step size collapsed near the singular locus at {where}")
        h_eff = min(h_prop, s1 - s)
        y5, err = _dopri_step(rhs, s, y, h_eff)
        scale = tol + tol * max(float(np.linalg.norm(y)), float(np.linalg.norm(y5)))
        err_norm = float(np.linalg.norm(err)) / scale
        if err_norm <= 1.0:
            s += h_eff
            y = y5
            local = float(np.linalg.norm(err))
            est += local
            max_local = max(max_local, local)
            nsteps += 1
        factor = 0.9 * (err_norm ** -0.2) if err_norm > 0 else 5.0
        h = h_eff * min(5.0, max(0.2, factor))
    return y, est, nsteps, max_local


def _seg_min_abs(a: complex, d: complex) -> float:
    """min over s in [0,1] of |a + s d|."""
    if d == 0:
        return abs(a)
    s_star = -((a.conjugate() * d).real) / abs(d) ** 2
    vals = [abs(a), abs(a + d)]
    if 0.0 < s_star < 1.0:
        vals.append(abs(a + s_star * d))
    return min(vals)


def _locus_distance(z) -> tuple[float, str]:
    n = len(z)
    best, name = math.inf, ""
    for i in range(n):
        if abs(z[i]) < best:
            best, name = abs(z[i]), f"z{i + 1}"
        for j in range(i + 1, n):
            if abs(z[i] - z[j]) < best:
                best, name = abs(z[i] - z[j]), f"z{i + 1}-z{j + 1}"
    return best, name


@dataclass(frozen=True)
class PathSpec:
    """Polyline in the configuration space with a starting branch tuple."""

    vertices: tuple
    branch_start: tuple[int, ...]
    avoid_margin: float = 1e-3

    def __post_init__(self):
        verts = tuple(tuple(complex(v) for v in vertex) for vertex in self.vertices)
        object.__setattr__(self, "vertices", verts)
        n = len(verts[0])
        if len(verts) < 2:
            raise ConfigurationError("a path needs at least two vertices")
        if any(len(v) != n for v in verts):
            raise ConfigurationError("all vertices must have the same dimension")
        if len(self.branch_start) != n:
            raise ConfigurationError("branch_start must give one integer per variable")
        for a, b in zip(verts, verts[1:]):
            for i in range(n):
                if _seg_min_abs(a[i], b[i] - a[i]) < self.avoid_margin:
                    raise ConfigurationError(
                        f"segment approaches z{i + 1} = 0 within avoid_margin"
                    )
                for j in range(i + 1, n):
                    da, dd = a[i] - a[j], (b[i] - a[i]) - (b[j] - a[j])
                    if _seg_min_abs(da, dd) < self.avoid_margin:
                        raise ConfigurationError(
                            f"segment approaches z{i + 1} = z{j + 1} within avoid_margin"
                        )

    @property
    def n(self) -> int:
        return len(self.vertices[0])

    def is_closed(self, tol: float = 1e-12) -> bool:
        return all(
            abs(a - b) <= tol for a, b in zip(self.vertices[0], self.vertices[-1])
        )

    def to_json(self) -> dict:
        return {
            "vertices": [[[v.real, v.imag] for v in vert] for vert in self.vertices],
            "branch_start": list(self.branch_start),
            "avoid_margin": self.avoid_margin,
        }

    @classmethod
    def from_json(cls, data: dict) -> "PathSpec":
        verts = tuple(
            tuple(complex(v[0], v[1]) for v in vert) for vert in data["vertices"]
        )
        return cls(
            vertices=verts,
            branch_start=tuple(int(p) for p in data["branch_start"]),
            avoid_margin=float(data.get("avoid_margin", 1e-3)),
        )


@dataclass(frozen=True)
class TransportResult:
    psi: np.ndarray
    est_error: float
    end_thetas: tuple
    end_branches: tuple
    diff_windings: dict = field(default_factory=dict)
    n_steps: int = 0
    max_local_est: float = 0.0


def _initial_thetas(path: PathSpec):
    return [
        arg2pi(z) + 2 * math.pi * p
        for z, p in zip(path.vertices[0], path.branch_start)
    ]


def integrate_path(
    conn: ConnectionSystem, path: PathSpec, psi0, tol: float = 1e-10, max_step_cap=None
) -> TransportResult:
    """Solve d psi/ds = (sum_l A_l(z(s)) dz_l/ds) psi along the polyline."""
    if path.n != conn.N:
        raise ConfigurationError(f"path has {path.n} variables, connection has {conn.N}")
    psi = np.array(psi0, dtype=complex)
    thetas = _initial_thetas(path)
    diff_args = {
        (i, j): arg2pi(path.vertices[0][i] - path.vertices[0][j])
        for i in range(conn.N)
        for j in range(i + 1, conn.N)
    }
    est_total = 0.0
    nsteps_total = 0
    max_local = 0.0
    for a, b in zip(path.vertices, path.vertices[1:]):
        a = np.array(a)
        b = np.array(b)
        d = b - a
        speed = max(
            max(abs(v) for v in d),
            max(
                (abs(d[i] - d[j]) for i in range(conn.N) for j in range(i + 1, conn.N)),
                default=0.0,
            ),
            1e-300,
        )

        def z_of(s):
            return a + s * d

        def theta_of(s):
            z = z_of(s)
            return [
                t0 + cmath.log(zi / ai).imag if di != 0 else t0
                for t0, zi, ai, di in zip(thetas, z, a, d)
            ]

        def rhs(s, y):
            z = z_of(s)
            th = theta_of(s)
            A = np.zeros((conn.state_dim,) * 2, dtype=complex)
            for l in range(1, conn.N + 1):
                if d[l - 1] != 0:
                    A += d[l - 1] * conn.eval_A_with_args(l, z, th)
            return A @ y

        def max_step(s):
            dist, _name = _locus_distance(z_of(s))
            return 0.5 * dist / speed

        def describe(s):
            _dist, name = _locus_distance(z_of(s))
            return f"component {name}, z = {tuple(z_of(s))}"

        if max_step_cap is not None:
            base = max_step
            max_step = lambda s, _b=base: min(_b(s), max_step_cap)  # noqa: E731
        psi, est, nsteps, loc = transport_ode(rhs, psi, 0.0, 1.0, tol, max_step, describe)
        est_total += est
        nsteps_total += nsteps
        max_local = max(max_local, loc)
        thetas = theta_of(1.0)
        for (i, j) in diff_args:
            da, db = a[i] - a[j], b[i] - b[j]
            diff_args[(i, j)] += cmath.log(db / da).imag
    end_branches = tuple(
        int(round((th - arg2pi(z)) / (2 * math.pi)))
        for th, z in zip(thetas, path.vertices[-1])
    )
    return TransportResult(
        psi=psi,
        est_error=est_total,
        end_thetas=tuple(thetas),
        end_branches=end_branches,
        diff_windings={f"{i + 1},{j + 1}": v for (i, j), v in diff_args.items()},
        n_steps=nsteps_total,
        max_local_est=max_local,
    )


@dataclass(frozen=True)
class MonodromyResult:
    loop: PathSpec
    matrix: np.ndarray
    est_error: float
    n_steps: int = 0


def monodromy_loop(
    conn: ConnectionSystem,
    loop: PathSpec,
    basis_seed=None,
    tol: float = 1e-10,
    refine: float = 16.0,
) -> MonodromyResult:
    """Transport a fundamental matrix around the closed loop; M = Y_end Y_0^{-1}.

    M acts on the left; concatenated loops compose as M_later @ M_earlier.
    est_error compares against a second pass at tol/refine.
    """
    if not loop.is_closed():
        raise ConfigurationError("monodromy needs a closed loop")
    Y0 = (
        np.eye(conn.state_dim, dtype=complex)
        if basis_seed is None
        else np.array(basis_seed, dtype=complex)
    )
    if abs(np.linalg.det(Y0)) < 1e-300:
        raise ConfigurationError("basis_seed must be invertible")
    res1 = integrate_path(conn, loop, Y0, tol)
    res2 = integrate_path(conn, loop, Y0, tol / refine)
    Y0inv = np.linalg.inv(Y0)
    M1 = res1.psi @ Y0inv
    M2 = res2.psi @ Y0inv
    est = float(np.linalg.norm(M1 - M2))
    return MonodromyResult(loop=loop, matrix=M2, est_error=est, n_steps=res2.n_steps)


def match_local_global(
    sol: FrobeniusSolution,
    H_coeffs,
    anchor: complex,
    target: complex,
    p: int = 0,
    tol: float = 1e-12,
) -> float:
    """Relative difference between transporting the local fundamental solution
    from anchor to target (straight segment) and evaluating it there.

    H_coeffs defines the one-variable system eta psi' = H(eta) psi that the
    Frobenius solution solves.
    """
    anchor, target = complex(anchor), complex(target)
    if abs(anchor) >= sol.radius:
        raise ConfigurationError(
            f"anchor |eta| = {abs(anchor):.3g} outside the disc (radius {sol.radius:.3g})"
        )
    H = [np.asarray(h, complex) for h in H_coeffs]
    Y0 = eval_solution(sol, anchor, p)
    d = target - anchor

    def rhs(s, y):
        eta = anchor + s * d
        Hval = np.zeros_like(Y0)
        for h in reversed(H):
            Hval = Hval * eta + h
        return d * (Hval / eta) @ y

    def max_step(s):
        return 0.5 * abs(anchor + s * d) / abs(d) if d != 0 else 1.0

    Y_t, _est, _n, _loc = transport_ode(rhs, Y0, 0.0, 1.0, tol, max_step)
    # continued branch at the target
    theta = arg2pi(anchor) + 2 * math.pi * p + cmath.log(target / anchor).imag
    p_target = int(round((theta - arg2pi(target)) / (2 * math.pi)))
    Y_loc = eval_solution(sol, target, p_target)
    den = float(np.linalg.norm(Y_loc))
    return float(np.linalg.norm(Y_t - Y_loc)) / den if den > 0 else float("inf")
