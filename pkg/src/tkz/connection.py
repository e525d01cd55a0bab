"""Omega operators and the twisted KZ connection matrices A_l(z).

The system lives on the dual U = (L(W_0) x ... x L(W_{N+1}))^* of the tensor
of lowest-weight spaces; operators act by pre-composition, so every stored
matrix is the transpose of the corresponding tensor-space operator.  Slots
1..N are untwisted, slot N+1 is twisted, slot 0 is a passive factor.

A_l(z) = sum_{i in I|I'} sum_{p != l} z_p^{a_i} z_l^{-a_i} (z_l - z_p)^{-1} W^i_{lp}
         + z_l^{-1} W_l,

with the 1/(2(level + h_vee)) prefactor folded into the Omega operators,
and ratio powers split as z_p^{a} z_l^{-a} with per-variable branches.
"""

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .autmod import AutomorphismData
from .errors import ConfigurationError, CriticalLevelError, ShapeError
from .liealg import LieAlgebraData, ModuleRep, _freeze, dual_basis
from .rcalc import RElement

OMEGA_SYM_TOL = 1e-12
EQUIVARIANCE_TOL = 1e-10


def _embed(dims: tuple[int, ...], slot: int, M: np.ndarray) -> np.ndarray:
    left = int(np.prod(dims[:slot], initial=1))
    right = int(np.prod(dims[slot + 1 :], initial=1))
    return np.kron(np.kron(np.eye(left), M), np.eye(right))


@dataclass(frozen=True)
class OmegaSet:
    """Pair operators W^i_{lp} and slot operators W_l on the tensor dual."""

    dims: tuple[int, ...]
    level: complex
    prefactor: complex
    pair_ops: dict
    slot_ops: dict
    alpha: tuple[Fraction, ...]
    prime: tuple[int, ...]
    order: int
    slot_term_order: str = "displayed"
    metadata: dict = field(default_factory=dict)

    @property
    def n_points(self) -> int:
        return len(self.dims) - 2

    @property
    def state_dim(self) -> int:
        return int(np.prod(self.dims))


def _slot_actions(
    alg: LieAlgebraData, aut: AutomorphismData, reps: list[ModuleRep]
) -> list[list[np.ndarray | None]]:
    """Per slot, the action of each doubled-index vector a^i (None if undefined)."""
    out = []
    for rep in reps:
        acts: list[np.ndarray | None] = []
        for i in range(2 * alg.dim):
            coords = aut.eigenbasis[i]
            try:
                acts.append(rep.act(coords))
            except ConfigurationError:
                acts.append(None)
        out.append(acts)
    return out


def build_omega_set(
    alg: LieAlgebraData,
    aut: AutomorphismData,
    level,
    slot_reps: list[ModuleRep],
    twisted_rep: ModuleRep,
    dim0: int = 1,
    slot_term_order: str = "displayed",
    validate: bool = True,
) -> OmegaSet:
    """Assemble the pair and slot operators for N = len(slot_reps) points."""
    if slot_term_order not in ("displayed", "swapped"):
        raise ConfigurationError("slot_term_order must be 'displayed' or 'swapped'")
    lvl = complex(level)
    hv = complex(alg.dual_coxeter)
    if abs(lvl + hv) < 1e-12:
        raise CriticalLevelError(f"level {level} equals -h^vee = {-hv.real}")
    n = len(slot_reps)
    if n < 1:
        raise ConfigurationError("need at least one untwisted slot")
    dims = (int(dim0),) + tuple(r.dim for r in slot_reps) + (twisted_rep.dim,)
    pref = 1.0 / (2.0 * (lvl + hv))
    two_dim = 2 * alg.dim

    acts = _slot_actions(alg, aut, list(slot_reps) + [twisted_rep])

    def act(slot: int, i: int) -> np.ndarray:
        a = acts[slot - 1][i]
        if a is None:
            raise ShapeError(f"slot {slot} action undefined for doubled index {i}")
        return a

    pair_ops = {}
    for l in range(1, n + 1):
        for p in range(1, n + 1):
            if p == l:
                continue
            for i in range(two_dim):
                T = _embed(dims, l, act(l, aut.prime[i])) @ _embed(dims, p, act(p, i))
                pair_ops[(l, p, i)] = _freeze((pref * T).T)

    slot_ops = {}
    for l in range(1, n + 1):
        T = np.zeros((int(np.prod(dims)),) * 2, dtype=complex)
        for i in range(two_dim):
            if aut.alpha[i] == 0:
                T += _embed(dims, l, act(l, aut.prime[i])) @ _embed(
                    dims, n + 1, act(n + 1, i)
                )
            else:
                a_i = act(l, i)
                a_ip = act(l, aut.prime[i])
                prod = a_i @ a_ip if slot_term_order == "displayed" else a_ip @ a_i
                T -= float(aut.alpha[i]) * _embed(dims, l, prod)
        slot_ops[l] = _freeze((pref * T).T)

    omega = OmegaSet(
        dims=dims,
        level=lvl,
        prefactor=pref,
        pair_ops=pair_ops,
        slot_ops=slot_ops,
        alpha=tuple(aut.alpha),
        prime=tuple(aut.prime),
        order=aut.order,
        slot_term_order=slot_term_order,
        metadata={"algebra": list(alg.basis_labels), "h_vee": str(alg.dual_coxeter)},
    )
    if validate:
        validate_omega(omega, alg, aut, list(slot_reps) + [twisted_rep])
    return omega


def validate_omega(
    omega: OmegaSet,
    alg: LieAlgebraData,
    aut: AutomorphismData,
    reps: list[ModuleRep],
) -> None:
    """Check W^i_{lp} = W^{i'}_{pl} and equivariance under the fixed subalgebra.

    Equivariance holds for the sum of pair operators within each fixed
    eigenvalue class (the canonical element of the g^[a'] x g^[a] pairing),
    and for each slot operator as a whole.
    """
    n = omega.n_points
    for (l, p, i), op in omega.pair_ops.items():
        other = omega.pair_ops[(p, l, omega.prime[i])]
        if np.abs(op - other).max() > OMEGA_SYM_TOL * max(1.0, np.abs(op).max()):
            raise ShapeError(f"Omega symmetry fails at (l={l}, p={p}, i={i})")

    fixed = [i for i in range(alg.dim) if aut.alpha[i] == 0]
    acts = _slot_actions(alg, aut, reps)
    totals = []
    for i in fixed:
        F = np.zeros((omega.state_dim,) * 2, dtype=complex)
        for slot in range(1, n + 2):
            a = acts[slot - 1][i]
            if a is not None:
                F += _embed(omega.dims, slot, a)
        totals.append(F.T)  # stored operators are transposes as well

    classes = sorted({a for a in omega.alpha})
    for l in range(1, n + 1):
        for p in range(1, n + 1):
            if p == l:
                continue
            for beta in classes:
                S = sum(
                    omega.pair_ops[(l, p, i)]
                    for i in range(len(omega.alpha))
                    if omega.alpha[i] == beta
                )
                for F in totals:
                    comm = S @ F - F @ S
                    if np.abs(comm).max() > EQUIVARIANCE_TOL * max(1.0, np.abs(S).max()):
                        raise ShapeError(
                            f"pair operators of class alpha={beta} not equivariant at (l={l}, p={p})"
                        )
    for l, S in omega.slot_ops.items():
        for F in totals:
            comm = S @ F - F @ S
            if np.abs(comm).max() > EQUIVARIANCE_TOL * max(1.0, np.abs(S).max()):
                raise ShapeError(f"slot operator {l} not equivariant")


@dataclass(frozen=True)
class ConnectionSystem:
    """The N connection matrices, stored as pencils sum_k f_k(z) M_k.

    ``terms[l-1]`` lists (scalar RElement, constant matrix) pairs for A_l.
    """

    N: int
    t: int
    state_dim: int
    dims: tuple[int, ...]
    terms: tuple
    alpha_table: tuple[Fraction, ...]
    level: complex
    branch_convention: str = "l_p(z) = log|z| + i(arg z + 2 p pi), arg in [0, 2pi)"
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        frozen = tuple(
            tuple((f, _freeze(np.asarray(M, complex))) for f, M in eq) for eq in self.terms
        )
        object.__setattr__(self, "terms", frozen)

    # -- evaluation ----------------------------------------------------------

    def eval_A(self, l: int, z, p=None) -> np.ndarray:
        """A_l at the point z on branch tuple p (l is 1-based)."""
        out = np.zeros((self.state_dim,) * 2, dtype=complex)
        for f, M in self.terms[l - 1]:
            out += f.eval(z, p) * M
        return out

    def eval_A_with_args(self, l: int, z, thetas) -> np.ndarray:
        out = np.zeros((self.state_dim,) * 2, dtype=complex)
        for f, M in self.terms[l - 1]:
            out += f.eval_with_args(z, thetas) * M
        return out

    def eval_all(self, z, p=None) -> list[np.ndarray]:
        return [self.eval_A(l, z, p) for l in range(1, self.N + 1)]

    # -- symbolic views ------------------------------------------------------

    def entry_matrices(self) -> list[np.ndarray]:
        """Per equation, a state_dim x state_dim object array of RElements."""
        out = []
        for eq in self.terms:
            entries = np.empty((self.state_dim,) * 2, dtype=object)
            for r in range(self.state_dim):
                for c in range(self.state_dim):
                    acc = RElement.zero(self.t, self.N)
                    for f, M in eq:
                        if M[r, c] != 0:
                            acc = acc + complex(M[r, c]) * f
                    entries[r, c] = acc
            out.append(entries)
        return out

    def entry_degrees(self) -> set:
        degs = set()
        for eq in self.terms:
            for f, _M in eq:
                degs |= f.degrees()
        return degs

    def differentiated_terms(self, l: int, m: int) -> list:
        """Pencil of d A_m / d z_l (both 1-based)."""
        return [(f.differentiate(l - 1), M) for f, M in self.terms[m - 1]]

    # -- serialization -------------------------------------------------------

    def to_json(self) -> dict:
        return {
            "N": self.N,
            "t": self.t,
            "state_dim": self.state_dim,
            "dims": list(self.dims),
            "level": [self.level.real, self.level.imag],
            "alpha_table": [
                {"num": a.numerator, "den": a.denominator} for a in self.alpha_table
            ],
            "branch_convention": self.branch_convention,
            "metadata": self.metadata,
            "equations": [
                [
                    {
                        "scalar": f.to_json(),
                        "matrix": [[[v.real, v.imag] for v in row] for row in M],
                    }
                    for f, M in eq
                ]
                for eq in self.terms
            ],
        }

    @classmethod
    def from_json(cls, data: dict) -> "ConnectionSystem":
        terms = tuple(
            tuple(
                (
                    RElement.from_json(item["scalar"]),
                    np.array(
                        [[complex(v[0], v[1]) for v in row] for row in item["matrix"]]
                    ),
                )
                for item in eq
            )
            for eq in data["equations"]
        )
        return cls(
            N=int(data["N"]),
            t=int(data["t"]),
            state_dim=int(data["state_dim"]),
            dims=tuple(int(d) for d in data["dims"]),
            terms=terms,
            alpha_table=tuple(
                Fraction(int(a["num"]), int(a["den"])) for a in data["alpha_table"]
            ),
            level=complex(data["level"][0], data["level"][1]),
            branch_convention=data.get("branch_convention", ""),
            metadata=data.get("metadata", {}),
        )


def _merge_term(acc: dict, scalar: RElement, M: np.ndarray) -> None:
    """Fold a single-monomial scalar into the pencil accumulator."""
    ((key, coeff),) = scalar.terms.items()
    if key in acc:
        acc[key] = acc[key] + coeff * M
    else:
        acc[key] = coeff * M


def _pencil_from_acc(acc: dict, t: int, n: int) -> tuple:
    out = []
    for key in sorted(acc):
        f = RElement(t, n)
        f.terms[key] = 1.0 + 0j
        out.append((f, acc[key]))
    return tuple(out)


def assemble_connection(omega: OmegaSet, aut: AutomorphismData, metadata=None) -> ConnectionSystem:
    """Build A_l(z) from the Omega operators, splitting every ratio power
    (z_p/z_l)^a into z_p^a z_l^{-a} with independent per-variable branches."""
    n = omega.n_points
    t = omega.order
    state = omega.state_dim
    eqs = []
    for l in range(1, n + 1):
        acc: dict = {}
        for p in range(1, n + 1):
            if p == l:
                continue
            for i in range(len(omega.alpha)):
                a = omega.alpha[i]
                scalar = (
                    RElement.var_power(p - 1, a, t, n)
                    * RElement.var_power(l - 1, -a, t, n)
                    * RElement.diff_power(l - 1, p - 1, -1, t, n)
                )
                _merge_term(acc, scalar, omega.pair_ops[(l, p, i)])
        _merge_term(acc, RElement.var_power(l - 1, -1, t, n), omega.slot_ops[l])
        eqs.append(_pencil_from_acc(acc, t, n))
    return ConnectionSystem(
        N=n,
        t=t,
        state_dim=state,
        dims=omega.dims,
        terms=tuple(eqs),
        alpha_table=tuple(omega.alpha),
        level=omega.level,
        metadata=dict(metadata or {}, slot_term_order=omega.slot_term_order),
    )


def assemble_classical(
    alg: LieAlgebraData,
    level,
    slot_reps: list[ModuleRep],
    twisted_rep: ModuleRep,
    dim0: int = 1,
    metadata=None,
) -> ConnectionSystem:
    """Classical KZ connection built with alpha identically zero; a separate
    code path used to cross-check the g = identity reduction."""
    lvl = complex(level)
    hv = complex(alg.dual_coxeter)
    if abs(lvl + hv) < 1e-12:
        raise CriticalLevelError(f"level {level} equals -h^vee = {-hv.real}")
    n = len(slot_reps)
    dims = (int(dim0),) + tuple(r.dim for r in slot_reps) + (twisted_rep.dim,)
    pref = 1.0 / (2.0 * (lvl + hv))
    duals = dual_basis(alg)
    eye = np.eye(alg.dim)

    def coords(i: int) -> np.ndarray:
        return eye[i] if i < alg.dim else duals[i - alg.dim]

    def dual_coords(i: int) -> np.ndarray:
        return duals[i] if i < alg.dim else eye[i - alg.dim]

    reps = list(slot_reps) + [twisted_rep]

    def act(slot: int, vec: np.ndarray) -> np.ndarray:
        return reps[slot - 1].act(vec)

    eqs = []
    for l in range(1, n + 1):
        acc: dict = {}
        for p in range(1, n + 1):
            if p == l:
                continue
            for i in range(2 * alg.dim):
                T = _embed(dims, l, act(l, dual_coords(i))) @ _embed(dims, p, act(p, coords(i)))
                _merge_term(acc, RElement.diff_power(l - 1, p - 1, -1, 1, n), (pref * T).T)
        T = np.zeros((int(np.prod(dims)),) * 2, dtype=complex)
        for i in range(2 * alg.dim):
            T += _embed(dims, l, act(l, dual_coords(i))) @ _embed(
                dims, n + 1, act(n + 1, coords(i))
            )
        _merge_term(acc, RElement.var_power(l - 1, -1, 1, n), (pref * T).T)
        eqs.append(_pencil_from_acc(acc, 1, n))
    return ConnectionSystem(
        N=n,
        t=1,
        state_dim=int(np.prod(dims)),
        dims=dims,
        terms=tuple(eqs),
        alpha_table=tuple(Fraction(0) for _ in range(2 * alg.dim)),
        level=lvl,
        metadata=dict(metadata or {}, classical=True),
    )


def validate_connection_shape(conn: ConnectionSystem) -> None:
    """Every monomial of A_l must be z_p^a z_l^{-a} (z_l - z_p)^{-1} or z_l^{-1}."""
    npairs = conn.N * (conn.N - 1) // 2
    pairs = [(i, j) for i in range(conn.N) for j in range(i + 1, conn.N)]
    for l0, eq in enumerate(conn.terms):
        for f, _M in eq:
            for (powers, dpows) in f.terms:
                nz_d = [k for k in range(npairs) if dpows[k] != 0]
                if not nz_d:
                    expect = tuple(-conn.t if i == l0 else 0 for i in range(conn.N))
                    if powers != expect:
                        raise ShapeError(f"slot term of A_{l0 + 1} has powers {powers}")
                    continue
                if len(nz_d) != 1 or dpows[nz_d[0]] != -1:
                    raise ShapeError(f"pair term of A_{l0 + 1} has diffs {dpows}")
                i, j = pairs[nz_d[0]]
                p0 = i if j == l0 else j
                if l0 not in (i, j):
                    raise ShapeError(f"pair term of A_{l0 + 1} touches ({i}, {j})")
                a = powers[p0]
                expect = tuple(
                    a if k == p0 else (-a if k == l0 else 0) for k in range(conn.N)
                )
                if powers != expect or not (0 <= a < conn.t):
                    raise ShapeError(f"pair term of A_{l0 + 1} has powers {powers}")


@dataclass(frozen=True)
class EulerResult:
    mean: np.ndarray
    max_deviation: float
    samples: tuple


def euler_contraction(conn: ConnectionSystem, sample_points, branches=None) -> EulerResult:
    """E(z) = sum_l z_l A_l(z) at each sample; constant for the split-ratio
    representation, so the max entrywise deviation across samples is reported."""
    if branches is None:
        branches = [(0,) * conn.N] * len(sample_points)
    samples = []
    for z, p in zip(sample_points, branches):
        E = np.zeros((conn.state_dim,) * 2, dtype=complex)
        for l in range(1, conn.N + 1):
            E += complex(z[l - 1]) * conn.eval_A(l, z, p)
        samples.append(E)
    mean = sum(samples) / len(samples)
    dev = max(float(np.abs(s - mean).max()) for s in samples)
    return EulerResult(mean=mean, max_deviation=dev, samples=tuple(samples))


@dataclass(frozen=True)
class FlatnessResult:
    max_residual: float
    per_pair: dict
    est_error: float


def flatness_residual(conn: ConnectionSystem, z, branches=None) -> FlatnessResult:
    """max over pairs (l, m) of || d_l A_m - d_m A_l - [A_l, A_m] ||_F.

    Derivatives are exact in the coefficient ring and evaluated at z; the
    returned value is reported, never asserted to vanish for twisted systems.
    est_error is a first-order roundoff scale for the evaluated expression.
    """
    p = branches
    A = {l: conn.eval_A(l, z, p) for l in range(1, conn.N + 1)}
    per_pair = {}
    max_res = 0.0
    scale = 0.0
    for l in range(1, conn.N + 1):
        for m in range(l + 1, conn.N + 1):
            zero = np.zeros((conn.state_dim,) * 2, complex)
            dAm = sum((f.eval(z, p) * M for f, M in conn.differentiated_terms(l, m)), zero)
            dAl = sum((f.eval(z, p) * M for f, M in conn.differentiated_terms(m, l)), zero)
            R = dAm - dAl - (A[l] @ A[m] - A[m] @ A[l])
            res = float(np.linalg.norm(R))
            per_pair[(l, m)] = res
            max_res = max(max_res, res)
            scale = max(
                scale,
                float(np.abs(dAm).max()),
                float(np.abs(dAl).max()),
                float((np.abs(A[l]) @ np.abs(A[m])).max()),
            )
    est = 1e-15 * scale * conn.state_dim
    return FlatnessResult(max_residual=max_res, per_pair=per_pair, est_error=est)
