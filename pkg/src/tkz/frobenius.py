"""Local fundamental solutions at a regular singular point.

For eta psi' = H(eta) psi with H = H_0 + H_1 eta + ... the fundamental
solution is Psi(eta) = S(eta) eta^Lambda eta^Nil with S_0 = Id.  Without
integer-shifted eigenvalue clusters Nil = 0 and Lambda = H_0, so
Psi = S(eta) eta^Lambda exactly; logarithms enter only through non-semisimple
Lambda.  With resonances (eigenvalues differing by a positive integer) the
coefficients are solved in an eigenbasis of H_0 and the unsolvable components
move into ad-graded nilpotent corrections Nil_m with [Lambda, Nil_m] = m Nil_m,
producing the extra logarithms through eta^Nil.
"""

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm

from .errors import (
    ConfigurationError,
    InsufficientDataError,
    NumericError,
    OutOfDiscWarning,
)
from .rcalc import lp

CLUSTER_TOL = 1e-9
DEFAULT_ORDER = 40


@dataclass(frozen=True)
class FrobeniusSolution:
    """Psi(eta) = S(eta) eta^Lambda eta^Nil; S_0 = Id, Nil = 0 when non-resonant."""

    Lambda: np.ndarray
    S_coeffs: tuple
    order: int
    radius: float
    nil: np.ndarray | None = None
    resonance_shifts: tuple = ()
    s0_determinant: complex = 1.0 + 0j

    @property
    def dim(self) -> int:
        return self.Lambda.shape[0]

    @property
    def radius_estimate(self) -> float:
        return self.radius

    def monodromy_factor(self) -> np.ndarray:
        """Right factor picked up under eta -> eta e^{2 pi i}: exp(2 pi i Lambda)
        (times exp(2 pi i Nil) in the resonant case)."""
        M = expm(2j * np.pi * self.Lambda)
        if self.nil is not None:
            M = M @ expm(2j * np.pi * self.nil)
        return M

    def S_at(self, eta: complex) -> np.ndarray:
        out = np.zeros_like(self.Lambda)
        for S_m in reversed(self.S_coeffs):
            out = out * eta + S_m
        return out

    def S_prime_at(self, eta: complex) -> np.ndarray:
        out = np.zeros_like(self.Lambda)
        for m in range(self.order, 0, -1):
            out = out * eta + m * self.S_coeffs[m]
        return out


def _resonance_shifts(eigs, max_order: int, tol: float):
    shifts = set()
    for a in eigs:
        for b in eigs:
            d = a - b
            m = round(d.real)
            if 1 <= m <= max_order and abs(d - m) < tol:
                shifts.add(m)
    return tuple(sorted(shifts))


def frobenius_fundamental(
    H_coeffs, order: int | None = None, r_H: float = 1.0, cluster_tol: float = CLUSTER_TOL
) -> FrobeniusSolution:
    """Solve the coefficient recursion S_m (H_0 + m) - H_0 S_m = sum_q H_q S_{m-q}.

    H_coeffs is the list H_0..H_K of matrix Taylor coefficients of H; missing
    orders up to ``order`` are treated as zero.  r_H is the validity radius of
    the coefficient series, used to cap the radius estimate.
    """
    H = [np.asarray(h, dtype=complex) for h in H_coeffs]
    if not H:
        raise ConfigurationError("need at least H_0")
    d = H[0].shape[0]
    if any(h.shape != (d, d) for h in H):
        raise ConfigurationError("H coefficients must be square matrices of equal size")
    M = int(order) if order is not None else max(len(H) - 1, 1)
    if M < 1:
        raise ConfigurationError("order M must be >= 1")
    H = H + [np.zeros((d, d), complex)] * (M + 1 - len(H))

    H0 = H[0]
    eigs = np.linalg.eigvals(H0)
    shifts = _resonance_shifts(eigs, M, cluster_tol)

    if not shifts:
        S, nils = _solve_plain(H, H0, M, d, cluster_tol)
        Lam = H0
    else:
        Lam, S, nils = _solve_resonant(H, H0, M, d, cluster_tol)

    nil_total = None
    if nils:
        nil_total = sum(nils.values())
    S_t = tuple(S)
    radius = r_H
    if M >= 8:
        radius = _radius_from_tail(S_t, r_H)
    return FrobeniusSolution(
        Lambda=Lam,
        S_coeffs=S_t,
        order=M,
        radius=float(radius),
        nil=nil_total,
        resonance_shifts=tuple((m, None) for m in shifts) if shifts else (),
        s0_determinant=complex(np.linalg.det(S_t[0])),
    )


def _solve_plain(H, H0, M, d, tol):
    """Non-resonant recursion: Sylvester solves in the original basis."""
    I = np.eye(d)
    S = [I.copy()]
    for m in range(1, M + 1):
        R = sum((H[q] @ S[m - q] for q in range(1, m + 1)), np.zeros((d, d), complex))
        L = np.kron(np.eye(d), (m * I + H0).T) - np.kron(H0, np.eye(d))
        try:
            x = np.linalg.solve(L, R.reshape(-1))
        except np.linalg.LinAlgError as exc:
            raise NumericError(
                f"Sylvester solve singular at order {m} outside the declared resonance set"
            ) from exc
        cond = np.linalg.cond(L)
        if not np.isfinite(cond) or cond > 1e13:
            raise NumericError(
                f"Sylvester solve ill-conditioned at order {m} (cond = {cond:.3e}); "
                "an undeclared resonance?"
            )
        S.append(x.reshape(d, d))
    return S, {}


def _solve_resonant(H, H0, M, d, tol):
    """Resonant recursion in an eigenbasis of H_0; unsolvable components become
    ad-graded nilpotent corrections."""
    evals, V = np.linalg.eig(H0)
    condV = np.linalg.cond(V)
    if not np.isfinite(condV) or condV > 1e8:
        raise NumericError(
            "resonant leading matrix is defective (ill-conditioned eigenbasis); "
            "this corner is not supported"
        )
    Vinv = np.linalg.inv(V)
    Ht = [Vinv @ h @ V for h in H]
    D = np.diag(evals)
    St = [np.eye(d, dtype=complex)]
    Nt: dict[int, np.ndarray] = {}
    for m in range(1, M + 1):
        R = sum((Ht[q] @ St[m - q] for q in range(1, m + 1)), np.zeros((d, d), complex))
        for q, Nq in Nt.items():
            if q < m:
                R -= St[m - q] @ Nq
        X = np.zeros((d, d), complex)
        Nm = np.zeros((d, d), complex)
        for a in range(d):
            for b in range(d):
                fac = m + evals[b] - evals[a]
                if abs(fac) < tol:
                    Nm[a, b] = R[a, b]
                else:
                    X[a, b] = R[a, b] / fac
        if np.abs(Nm).max() > 0:
            Nt[m] = Nm
        St.append(X)
    S = [V @ s @ Vinv for s in St]
    nils = {m: V @ N @ Vinv for m, N in Nt.items()}
    Lam = V @ D @ Vinv
    return Lam, S, nils


def _radius_from_tail(S, r_H: float) -> float:
    """min(r_H, reciprocal growth rate of ||S_m||^(1/m) over the last 5 orders)."""
    M = len(S) - 1
    growth = 0.0
    for m in range(max(1, M - 4), M + 1):
        nrm = float(np.linalg.norm(S[m]))
        if nrm > 0:
            growth = max(growth, nrm ** (1.0 / m))
    if growth == 0.0:
        return float(r_H)
    return float(min(r_H, 1.0 / growth))


def radius_estimate(sol: FrobeniusSolution, r_H: float = math.inf) -> float:
    """Tail-based convergence radius; needs at least 8 coefficients."""
    if len(sol.S_coeffs) - 1 < 8:
        raise InsufficientDataError("need at least 8 series coefficients for a tail estimate")
    return _radius_from_tail(sol.S_coeffs, r_H)


def eval_solution(sol: FrobeniusSolution, eta: complex, p: int = 0) -> np.ndarray:
    """S(eta) exp(Lambda l_p(eta)) [exp(Nil l_p(eta))]; warns outside the disc."""
    eta = complex(eta)
    if eta == 0:
        raise ConfigurationError("local solutions cannot be evaluated at the singular point")
    if abs(eta) >= sol.radius:
        warnings.warn(
            f"|eta| = {abs(eta):.3g} >= radius estimate {sol.radius:.3g}",
            OutOfDiscWarning,
            stacklevel=2,
        )
    l_val = lp(eta, p)
    out = sol.S_at(eta) @ expm(sol.Lambda * l_val)
    if sol.nil is not None:
        out = out @ expm(sol.nil * l_val)
    return out


def solution_residual(sol: FrobeniusSolution, H_coeffs, eta: complex, p: int = 0) -> float:
    """Relative norm of eta Psi' - H(eta) Psi; order eta^{M+1} by construction."""
    eta = complex(eta)
    H = [np.asarray(h, complex) for h in H_coeffs]
    l_val = lp(eta, p)
    Phi = expm(sol.Lambda * l_val)
    if sol.nil is not None:
        eN = expm(sol.nil * l_val)
        dPhi = sol.Lambda @ Phi @ eN + Phi @ sol.nil @ eN
        Phi = Phi @ eN
    else:
        dPhi = sol.Lambda @ Phi
    S_val = sol.S_at(eta)
    Psi = S_val @ Phi
    dPsi = eta * sol.S_prime_at(eta) @ Phi + S_val @ dPhi  # eta * d/deta
    Hval = np.zeros_like(Psi)
    for h in reversed(H):
        Hval = Hval * eta + h
    num = float(np.linalg.norm(dPsi - Hval @ Psi))
    den = float(np.linalg.norm(Psi))
    return num / den if den > 0 else num


def gauss_companion_coeffs(a: float, b: float, c: float, order: int):
    """First-order companion of the hypergeometric equation in theta = eta d/deta:

        theta psi = H(eta) psi,  psi = (w, theta w),
        H_0 = [[0, 1], [0, 1 - c]],  H_m = [[0, 0], [a b, 1 - c + a + b]]  (m >= 1).

    Regular singular at 0 with indicial exponents {0, 1 - c}; series radius 1.
    """
    H0 = np.array([[0.0, 1.0], [0.0, 1.0 - c]], dtype=complex)
    Hm = np.array([[0.0, 0.0], [a * b, 1.0 - c + a + b]], dtype=complex)
    return [H0] + [Hm.copy() for _ in range(order)]
