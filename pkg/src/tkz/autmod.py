"""Finite-order automorphism eigendata.

An automorphism g of finite order t acts semisimply; every basis vector a^i,
i in the doubled index set I | I', is an eigenvector with eigenvalue
exp(2 pi i alpha^i), alpha^i a rational in [0,1) with t alpha^i integral.
Alphas are kept as exact Fractions throughout so that branch arithmetic and
singularity verdicts never depend on float comparisons.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd

import numpy as np

from .errors import ConfigurationError, NumericError
from .liealg import LieAlgebraData, ModuleRep, _freeze, dual_basis, validate_rep

AUT_TOL = 1e-12
MAX_ORDER = 512


def parse_rational(x) -> Fraction:
    """Accept int, Fraction, 'p/q' strings and {'num':p,'den':q} dicts."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise ConfigurationError(f"not a rational number: {x!r}")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, float):
        if x.is_integer():
            return Fraction(int(x))
        raise ConfigurationError(
            f"float {x!r} rejected for exact data; pass a string like '1/2'"
        )
    if isinstance(x, str):
        try:
            return Fraction(x)
        except ValueError as exc:
            raise ConfigurationError(f"cannot parse rational {x!r}") from exc
    if isinstance(x, dict) and set(x) == {"num", "den"}:
        return Fraction(int(x["num"]), int(x["den"]))
    raise ConfigurationError(f"cannot parse rational {x!r}")


def alpha_prime(alpha: Fraction) -> Fraction:
    """Eigenvalue of the inverse-twist: 0 -> 0, else 1 - alpha."""
    alpha = parse_rational(alpha)
    if not 0 <= alpha < 1:
        raise ConfigurationError(f"alpha must lie in [0, 1), got {alpha}")
    return Fraction(0) if alpha == 0 else 1 - alpha


@dataclass(frozen=True)
class AutomorphismData:
    """Order, per-index eigenvalue exponents, eigenbasis and the dual involution.

    Indices 0..dim-1 form I (the eigenbasis), dim..2dim-1 form I' (the dual
    basis); ``prime`` is the involution exchanging them.  ``eigenbasis[i]``
    holds the coordinates of a^i in the Lie-algebra basis for all i in I | I'.
    """

    alg: LieAlgebraData = field(repr=False)
    order: int
    alpha: tuple[Fraction, ...]
    prime: tuple[int, ...]
    eigenbasis: np.ndarray
    matrix_g: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "eigenbasis", _freeze(np.asarray(self.eigenbasis, complex)))
        object.__setattr__(self, "matrix_g", _freeze(np.asarray(self.matrix_g, complex)))
        _validate_automorphism(self)

    @property
    def index_set_size(self) -> int:
        return 2 * self.alg.dim

    def alpha_float(self, i: int) -> float:
        return float(self.alpha[i])


def _validate_automorphism(aut: AutomorphismData) -> None:
    alg, g, t = aut.alg, aut.matrix_g, aut.order
    dim = alg.dim
    if len(aut.alpha) != 2 * dim or len(aut.prime) != 2 * dim:
        raise ConfigurationError("alpha table or involution has the wrong size")
    c = alg.structure_constants
    # automorphism property: g[a,b] = [ga, gb] on all basis pairs
    lhs = np.einsum("ijk,lk->ijl", c, g)
    rhs = np.einsum("ai,bj,abk->ijk", g, g, c)
    scale = max(1.0, float(np.abs(c).max()))
    if np.abs(lhs - rhs).max() > 1e-12 * scale * max(1.0, np.abs(g).max() ** 2):
        raise ConfigurationError("matrix is not an automorphism of the bracket")
    # g^t = Id, minimal
    power = np.linalg.matrix_power(g, t)
    if np.abs(power - np.eye(dim)).max() > 1e-12 * max(1.0, np.abs(g).max() ** t):
        raise ConfigurationError(f"g^{t} is not the identity")
    for s in range(1, t):
        if np.abs(np.linalg.matrix_power(g, s) - np.eye(dim)).max() < 1e-9:
            raise ConfigurationError(f"order is not minimal: g^{s} = Id with {s} < {t}")
    # eigenvectors, eigenvalue pairing, involution, duality
    for i in range(2 * dim):
        a = parse_rational(aut.alpha[i])
        if not (0 <= a < 1 and (a * t).denominator == 1):
            raise ConfigurationError(f"alpha[{i}] = {a} is not in [0,1) with t*alpha integral")
        v = aut.eigenbasis[i]
        ev = np.exp(2j * np.pi * float(a))
        if np.abs(g @ v - ev * v).max() > 1e-12 * max(1.0, np.abs(v).max()):
            raise ConfigurationError(f"eigenbasis vector {i} is not a g-eigenvector")
        if aut.prime[aut.prime[i]] != i:
            raise ConfigurationError("prime is not an involution")
        ip = aut.prime[i]
        expected = Fraction(0) if aut.alpha[i] == 0 else 1 - aut.alpha[i]
        if aut.alpha[ip] != expected:
            raise ConfigurationError(f"eigenvalue pairing fails at index {i}")
    pair = aut.eigenbasis[dim:] @ alg.form @ aut.eigenbasis[:dim].T
    if np.abs(pair - np.eye(dim)).max() > AUT_TOL * max(1.0, np.abs(pair).max()):
        raise ConfigurationError("dual eigenbasis does not pair to the identity")


def _lcm(nums) -> int:
    out = 1
    for n in nums:
        out = out * n // gcd(out, n)
    return out


def inner_automorphism(alg: LieAlgebraData, cartan_fractions) -> AutomorphismData:
    """g = Ad exp(2 pi i diag(mu)) with the fractions as simple-root exponents.

    ``cartan_fractions[k]`` is the eigenvalue exponent of the simple root
    vector e_{k,k+1}; every root vector then acquires the exponent forced by
    root additivity, reduced into [0, 1).
    """
    if alg.defining is None:
        raise ConfigurationError("inner automorphisms need the defining representation")
    fracs = [parse_rational(x) for x in cartan_fractions]
    n = alg.defining[0].shape[0]
    if len(fracs) != n - 1:
        raise ConfigurationError(f"expected {n - 1} fractions for sl({n}), got {len(fracs)}")
    mu = [Fraction(0)]
    for c in fracs:
        mu.append(mu[-1] - c)
    t = _lcm([f.denominator for f in fracs]) if fracs else 1

    dim = alg.dim
    alphas: list[Fraction] = []
    for B in alg.defining:
        off = np.nonzero(np.abs(B - np.diag(np.diag(B))) > 0)
        if off[0].size == 0:
            alphas.append(Fraction(0))  # Cartan element
        else:
            r, s = int(off[0][0]), int(off[1][0])
            alphas.append((mu[r] - mu[s]) % 1)
    g = np.diag([np.exp(2j * np.pi * float(a)) for a in alphas])

    duals = dual_basis(alg)
    eigenbasis = np.vstack([np.eye(dim, dtype=complex), duals])
    alpha = tuple(alphas) + tuple(alpha_prime(a) for a in alphas)
    prime = tuple(range(dim, 2 * dim)) + tuple(range(dim))
    return AutomorphismData(
        alg=alg, order=t, alpha=alpha, prime=prime, eigenbasis=eigenbasis, matrix_g=g
    )


def matrix_automorphism(alg: LieAlgebraData, entries, cluster_tol: float = 1e-9) -> AutomorphismData:
    """Arbitrary finite-order automorphism supplied as an explicit matrix."""
    g = np.asarray(entries, dtype=complex)
    if g.shape != (alg.dim, alg.dim):
        raise ConfigurationError(f"automorphism matrix must be {alg.dim}x{alg.dim}")
    t = None
    power = np.eye(alg.dim, dtype=complex)
    for s in range(1, MAX_ORDER + 1):
        power = power @ g
        if np.abs(power - np.eye(alg.dim)).max() < 1e-10:
            t = s
            break
    if t is None:
        raise ConfigurationError(f"matrix has no order <= {MAX_ORDER}; not finite order")
    evals, evecs = np.linalg.eig(g)
    alphas = []
    for ev in evals:
        k = round(float(np.angle(ev)) / (2 * np.pi) * t) % t
        if abs(ev - np.exp(2j * np.pi * k / t)) > cluster_tol:
            raise NumericError(f"eigenvalue {ev} is not a {t}-th root of unity")
        alphas.append(Fraction(k, t))
    order = sorted(range(alg.dim), key=lambda i: (alphas[i], i))
    alphas = [alphas[i] for i in order]
    basis = np.array([evecs[:, i] / np.linalg.norm(evecs[:, i]) for i in order])
    gram = basis @ alg.form @ basis.T
    cond = np.linalg.cond(gram)
    if not np.isfinite(cond) or cond > 1e12:
        raise NumericError(f"eigenbasis Gram matrix is singular (cond = {cond:.3e})")
    duals = np.linalg.inv(gram).T @ basis
    eigenbasis = np.vstack([basis, duals])
    alpha = tuple(alphas) + tuple(alpha_prime(a) for a in alphas)
    prime = tuple(range(alg.dim, 2 * alg.dim)) + tuple(range(alg.dim))
    return AutomorphismData(
        alg=alg, order=t, alpha=alpha, prime=prime, eigenbasis=eigenbasis, matrix_g=g
    )


def fixed_subalgebra(aut: AutomorphismData) -> tuple[int, ...]:
    """Indices i in I with alpha^i = 0; verified closed under brackets."""
    dim = aut.alg.dim
    fixed = tuple(i for i in range(dim) if aut.alpha[i] == 0)
    basis = aut.eigenbasis[:dim]
    for i in fixed:
        for j in fixed:
            w = np.einsum("a,b,abk->k", basis[i], basis[j], aut.alg.structure_constants)
            coords = np.linalg.solve(basis.T, w)
            bad = [k for k in range(dim) if k not in fixed and abs(coords[k]) > 1e-10]
            if bad:
                raise NumericError(
                    f"fixed set not closed: [{i},{j}] has components on {bad}"
                )
    return fixed


def _fixed_span_fill(aut: AutomorphismData, given: dict, d: int) -> tuple:
    """Per-algebra-index action matrices for a map defined on the fixed span.

    ``given`` pins matrices at algebra basis indices; unpinned fixed
    directions act by zero.  An index whose basis vector lies in the span of
    the fixed eigenvectors gets the linear extension, all others None.
    """
    dim = aut.alg.dim
    fixed = [i for i in range(dim) if aut.alpha[i] == 0]
    V = aut.eigenbasis[fixed] if fixed else np.zeros((0, dim), complex)
    zero = np.zeros((d, d), complex)

    def value_at(vec: np.ndarray) -> np.ndarray:
        out = np.zeros((d, d), complex)
        for k in range(dim):
            if abs(vec[k]) > 1e-13 and k in given:
                out += vec[k] * np.asarray(given[k], complex)
        return out

    action: list = []
    for j in range(dim):
        if j in given:
            action.append(np.asarray(given[j], complex))
            continue
        if not fixed:
            action.append(None)
            continue
        e_j = np.eye(dim)[j]
        c, *_ = np.linalg.lstsq(V.T, e_j, rcond=None)
        if np.abs(V.T @ c - e_j).max() > 1e-10:
            action.append(None)
            continue
        M = zero.copy()
        for ci, i in zip(c, fixed):
            if abs(ci) > 1e-13:
                M += ci * value_at(aut.eigenbasis[i])
        action.append(M)
    return tuple(action)


def twisted_slot_rep(aut: AutomorphismData, spec) -> ModuleRep:
    """Representation for the twisted slot, defined on the fixed subalgebra only.

    ``spec`` may be the string "trivial" (one-dimensional, zero action), a dict
    {algebra basis index: matrix} supported on the fixed subalgebra, or a full
    ModuleRep (accepted when every index it defines is fixed).
    """
    fixed = set(fixed_subalgebra(aut))
    dim_alg = aut.alg.dim
    if spec == "trivial":
        rep = ModuleRep(dim=1, action=_fixed_span_fill(aut, {}, 1))
    elif isinstance(spec, ModuleRep):
        bad = [i for i in spec.defined_indices() if i not in fixed]
        if bad:
            raise ConfigurationError(f"matrices supplied for non-fixed indices {bad}")
        rep = spec
    elif isinstance(spec, dict):
        bad = [i for i in spec if i not in fixed]
        if bad:
            raise ConfigurationError(f"matrices supplied for non-fixed indices {bad}")
        mats = {i: np.asarray(m, complex) for i, m in spec.items()}
        dims = {m.shape[0] for m in mats.values()}
        if len(dims) != 1 or any(m.shape[0] != m.shape[1] for m in mats.values()):
            raise ConfigurationError("twisted slot matrices must be square and equal-sized")
        d = dims.pop()
        rep = ModuleRep(dim=d, action=_fixed_span_fill(aut, mats, d))
    else:
        raise ConfigurationError(f"unsupported twisted slot spec {spec!r}")
    validate_rep(aut.alg, rep)
    return rep
