"""Finite-dimensional simple Lie algebras and their finite-dimensional modules.

Supported algebras are sl(n) in the Cartan-Weyl basis (e_gamma, h_i, f_gamma),
with the invariant form normalized to the trace form of the defining
representation.  In this normalization long roots have squared length 2 and
the dual Coxeter number of sl(n) is n.
"""

import re
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import (
    ConfigurationError,
    CriticalLevelError,
    IrreducibilityError,
    NumericError,
    ShapeError,
)

STRUCT_TOL = 1e-12
COND_LIMIT = 1e12


def _freeze(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a)
    a.flags.writeable = False
    return a


@dataclass(frozen=True)
class LieAlgebraData:
    """Structure constants, invariant form and dual Coxeter number.

    ``structure_constants[i, j, k]`` is the coefficient of ``a^k`` in
    ``[a^i, a^j]``; ``form[i, j] = (a^i, a^j)``.
    """

    dim: int
    basis_labels: tuple[str, ...]
    structure_constants: np.ndarray
    form: np.ndarray
    dual_coxeter: Fraction
    defining: tuple[np.ndarray, ...] | None = field(default=None, repr=False)

    def __post_init__(self):
        c = np.asarray(self.structure_constants, dtype=complex)
        g = np.asarray(self.form, dtype=complex)
        if c.shape != (self.dim,) * 3 or g.shape != (self.dim,) * 2:
            raise ShapeError("structure constants or form have the wrong shape")
        object.__setattr__(self, "structure_constants", _freeze(c))
        object.__setattr__(self, "form", _freeze(g))
        if self.defining is not None:
            object.__setattr__(
                self, "defining", tuple(_freeze(np.asarray(m, complex)) for m in self.defining)
            )
        _validate_algebra(self)

    def bracket(self, u: np.ndarray, v: np.ndarray) -> np.ndarray:
        """Coordinates of [u, v] for coordinate vectors u, v."""
        return np.einsum("i,j,ijk->k", u, v, self.structure_constants)

    def pairing(self, u: np.ndarray, v: np.ndarray) -> complex:
        return complex(u @ self.form @ v)


def _validate_algebra(alg: LieAlgebraData) -> None:
    c = alg.structure_constants
    g = alg.form
    scale = max(1.0, float(np.abs(c).max(initial=0.0)), float(np.abs(g).max()))
    if np.abs(c + np.swapaxes(c, 0, 1)).max(initial=0.0) > STRUCT_TOL * scale:
        raise ConfigurationError("structure constants are not antisymmetric")
    # Jacobi: [[a_i,a_j],a_k] + cyclic = 0
    t1 = np.einsum("ijm,mkl->ijkl", c, c)
    jac = t1 + np.transpose(t1, (1, 2, 0, 3)) + np.transpose(t1, (2, 0, 1, 3))
    if np.abs(jac).max(initial=0.0) > STRUCT_TOL * scale * scale:
        raise ConfigurationError("Jacobi identity fails for the structure constants")
    if np.abs(g - g.T).max() > STRUCT_TOL * scale:
        raise ConfigurationError("bilinear form is not symmetric")
    # invariance: ([a_i,a_j],a_k) + (a_j,[a_i,a_k]) = 0
    inv = np.einsum("ijm,mk->ijk", c, g) + np.einsum("ikm,jm->ijk", c, g)
    if np.abs(inv).max(initial=0.0) > STRUCT_TOL * scale * scale:
        raise ConfigurationError("bilinear form is not invariant")
    cond = np.linalg.cond(g)
    if not np.isfinite(cond) or cond > COND_LIMIT:
        raise NumericError(f"bilinear form is numerically singular (cond = {cond:.3e})")


@dataclass(frozen=True)
class ModuleRep:
    """Finite-dimensional module: one matrix per Lie-algebra basis index.

    ``action[i]`` is rho(a^i) on the module, or None when the representation
    is only defined on a subalgebra (twisted-slot modules).
    """

    dim: int
    action: tuple[np.ndarray | None, ...]
    weight_label: Fraction | None = None
    conformal_weight: complex | None = None

    def __post_init__(self):
        mats = []
        for m in self.action:
            if m is None:
                mats.append(None)
                continue
            m = np.asarray(m, dtype=complex)
            if m.shape != (self.dim, self.dim):
                raise ShapeError(f"action matrix has shape {m.shape}, expected {(self.dim,) * 2}")
            mats.append(_freeze(m))
        object.__setattr__(self, "action", tuple(mats))

    def defined_indices(self) -> tuple[int, ...]:
        return tuple(i for i, m in enumerate(self.action) if m is not None)

    def act(self, coords: np.ndarray, tol: float = 1e-13) -> np.ndarray:
        """rho(sum_i coords[i] a^i); errors if an undefined index is touched."""
        out = np.zeros((self.dim, self.dim), dtype=complex)
        for i, x in enumerate(coords):
            if abs(x) <= tol:
                continue
            if self.action[i] is None:
                raise ConfigurationError(
                    f"representation undefined on basis index {i} but the vector touches it"
                )
            out += x * self.action[i]
        return out


def validate_rep(alg: LieAlgebraData, rep: ModuleRep, tol: float = 1e-12) -> None:
    """Check the homomorphism property on every defined basis pair."""
    c = alg.structure_constants
    idx = rep.defined_indices()
    defined = set(idx)
    for i in idx:
        for j in idx:
            support = np.nonzero(np.abs(c[i, j]) > tol)[0]
            if any(k not in defined for k in support):
                # bracket leaves the defined subalgebra; nothing to check
                continue
            lhs = rep.action[i] @ rep.action[j] - rep.action[j] @ rep.action[i]
            rhs = sum(c[i, j, k] * rep.action[k] for k in support)
            rhs = rhs if support.size else np.zeros_like(lhs)
            scale = max(1.0, float(np.abs(lhs).max()), float(np.abs(rhs).max()))
            if np.abs(lhs - rhs).max() > tol * scale:
                raise ConfigurationError(
                    f"homomorphism property fails on basis pair ({i}, {j})"
                )


# -- sl(n) construction ------------------------------------------------------

_SL_RE = re.compile(r"^sl\(?(\d+)\)?$")


def _parse_spec(spec) -> int:
    if isinstance(spec, str):
        m = _SL_RE.match(spec.strip().lower().replace(" ", ""))
        if m:
            return int(m.group(1))
        raise ConfigurationError(f"unsupported algebra {spec!r}; supported: sl(n), n >= 2")
    if isinstance(spec, (tuple, list)) and len(spec) == 2 and spec[0] == "sl":
        return int(spec[1])
    raise ConfigurationError(f"unsupported algebra spec {spec!r}")


def _sln_basis(n: int) -> tuple[list[np.ndarray], list[str]]:
    pos = [(i, j) for i in range(n) for j in range(i + 1, n)]
    mats, labels = [], []
    for i, j in pos:
        m = np.zeros((n, n), complex)
        m[i, j] = 1.0
        mats.append(m)
        labels.append("e" if n == 2 else f"e{i + 1}{j + 1}")
    for i in range(n - 1):
        m = np.zeros((n, n), complex)
        m[i, i] = 1.0
        m[i + 1, i + 1] = -1.0
        mats.append(m)
        labels.append("h" if n == 2 else f"h{i + 1}")
    for i, j in pos:
        m = np.zeros((n, n), complex)
        m[j, i] = 1.0
        mats.append(m)
        labels.append("f" if n == 2 else f"f{i + 1}{j + 1}")
    return mats, labels


def _coords_in_sln_basis(M: np.ndarray, n: int) -> np.ndarray:
    """Coordinates of a traceless matrix in the Cartan-Weyl basis above."""
    pos = [(i, j) for i in range(n) for j in range(i + 1, n)]
    npos = len(pos)
    vec = np.zeros(2 * npos + n - 1, complex)
    for idx, (i, j) in enumerate(pos):
        vec[idx] = M[i, j]
        vec[npos + n - 1 + idx] = M[j, i]
    # diagonal part: diag(d) with sum(d)=0 equals sum_k (d_1+...+d_k) h_k
    partial = np.cumsum(np.diag(M))[: n - 1]
    vec[npos : npos + n - 1] = partial
    return vec


def build_algebra(spec) -> LieAlgebraData:
    """Build sl(n) with the trace form of the defining representation."""
    n = _parse_spec(spec)
    if n < 2:
        raise ConfigurationError("sl(n) requires n >= 2")
    mats, labels = _sln_basis(n)
    dim = len(mats)
    c = np.zeros((dim, dim, dim), complex)
    for i in range(dim):
        for j in range(dim):
            c[i, j] = _coords_in_sln_basis(mats[i] @ mats[j] - mats[j] @ mats[i], n)
    g = np.array([[np.trace(a @ b) for b in mats] for a in mats], complex)
    return LieAlgebraData(
        dim=dim,
        basis_labels=tuple(labels),
        structure_constants=c,
        form=g,
        dual_coxeter=Fraction(n),
        defining=tuple(mats),
    )


def dual_basis(alg: LieAlgebraData) -> np.ndarray:
    """Rows are the coordinates of the dual vectors a^{i'}: (a^{i'}, a^j) = delta_ij."""
    cond = np.linalg.cond(alg.form)
    if not np.isfinite(cond) or cond > COND_LIMIT:
        raise NumericError(f"form not invertible (cond = {cond:.3e})")
    return np.linalg.inv(alg.form).T


def casimir_matrix(alg: LieAlgebraData, rep: ModuleRep) -> np.ndarray:
    """sum_i rho(a^i) rho(a^{i'}) on the module."""
    duals = dual_basis(alg)
    if len(rep.action) != alg.dim:
        raise ShapeError("representation has the wrong number of action matrices")
    out = np.zeros((rep.dim, rep.dim), complex)
    for i in range(alg.dim):
        out += rep.act(np.eye(alg.dim)[i]) @ rep.act(duals[i])
    return out


def conformal_weight(alg: LieAlgebraData, rep: ModuleRep, level) -> complex:
    """Casimir scalar / (2 (level + dual Coxeter)); level must not be critical."""
    lvl = complex(level)
    hv = complex(alg.dual_coxeter)
    if abs(lvl + hv) < 1e-12:
        raise CriticalLevelError(f"level {level} equals -h^vee = {-hv.real}")
    cas = casimir_matrix(alg, rep)
    scalar = np.trace(cas) / rep.dim
    if np.abs(cas - scalar * np.eye(rep.dim)).max() > 1e-10 * (1 + abs(scalar)):
        raise IrreducibilityError("Casimir not scalar: representation is not irreducible")
    return complex(scalar / (2 * (lvl + hv)))


def build_irrep_sl2(spin) -> ModuleRep:
    """The (2j+1)-dimensional sl(2) irrep in the weight basis, h diagonal.

    Basis v_0, ..., v_{2j} with h v_k = (2j - 2k) v_k, so h = diag(2j, ..., -2j).
    """
    try:
        j = Fraction(spin)
    except (TypeError, ValueError) as exc:
        raise ConfigurationError(f"spin {spin!r} is not a rational number") from exc
    two_j = 2 * j
    if two_j.denominator != 1 or two_j < 0:
        raise ConfigurationError(f"spin must be a nonnegative half-integer, got {spin}")
    d = int(two_j) + 1
    e = np.zeros((d, d), complex)
    f = np.zeros((d, d), complex)
    h = np.zeros((d, d), complex)
    for k in range(d):
        h[k, k] = float(two_j) - 2 * k
        if k > 0:
            e[k - 1, k] = np.sqrt(k * (d - k))
        if k < d - 1:
            f[k + 1, k] = np.sqrt((k + 1) * (d - 1 - k))
    return ModuleRep(dim=d, action=(e, h, f), weight_label=j)
