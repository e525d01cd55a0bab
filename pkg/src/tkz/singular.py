"""Affine coordinate changes, the root substitution eta_j^{s(delta_j) t} = zeta_j,
machine verification of holomorphy after the change, and indicial data.

The change (zeta_1,...,zeta_N) = (z_1,...,z_N) A - beta targets the point
(zeta) = (delta) with delta_j in {0, inf}; s(0) = +1, s(inf) = -1.  In the
eta variables the system reads eta_j d/deta_j psi = B_j(eta) psi with

    B_j = s(delta_j) * t * zeta_j * sum_l b_{jl} A_l,   b = A^{-1},

and the holomorphy verdict is decided on exact exponent lattices.
"""

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .connection import ConnectionSystem
from .errors import (
    ConfigurationError,
    InconclusiveVerdictError,
    NonHolomorphicError,
    NumericError,
)
from .liealg import _freeze
from .rcalc import PuiseuxSeries, compose_change, normalize_cutoffs

PRUNE_TOL = 1e-13
CLUSTER_TOL = 1e-9


@dataclass(frozen=True)
class ChangeOfVariables:
    """(zeta) = (z) A - beta with target component pattern delta and root order t."""

    A: np.ndarray
    beta: np.ndarray
    delta: tuple[str, ...]
    t: int

    def __post_init__(self):
        A = np.asarray(self.A, dtype=complex)
        beta = np.asarray(self.beta, dtype=complex).reshape(-1)
        n = A.shape[0]
        if A.shape != (n, n) or beta.shape != (n,):
            raise ConfigurationError("A must be square and beta of matching length")
        if len(self.delta) != n or any(d not in ("0", "inf") for d in self.delta):
            raise ConfigurationError("delta entries must be '0' or 'inf'")
        if self.t < 1:
            raise ConfigurationError("root order t must be a positive integer")
        cond = np.linalg.cond(A)
        if not np.isfinite(cond) or cond > 1e12:
            raise ConfigurationError(f"A is numerically singular (cond = {cond:.3e})")
        object.__setattr__(self, "A", _freeze(A))
        object.__setattr__(self, "beta", _freeze(beta))
        object.__setattr__(self, "_b", _freeze(np.linalg.inv(A)))

    @property
    def n(self) -> int:
        return self.A.shape[0]

    @property
    def b_matrix(self) -> np.ndarray:
        """B = A^{-1}; z_l = sum_j zeta_j B[j, l] + gamma_l."""
        return self._b

    @property
    def gamma(self) -> np.ndarray:
        return self.beta @ self._b

    def s(self, j: int) -> int:
        return 1 if self.delta[j] == "0" else -1

    @property
    def condition_number(self) -> float:
        return float(np.linalg.cond(self.A))

    def to_json(self) -> dict:
        return {
            "A": [[[v.real, v.imag] for v in row] for row in self.A],
            "beta": [[v.real, v.imag] for v in self.beta],
            "delta": list(self.delta),
            "t": self.t,
        }

    @classmethod
    def from_json(cls, data: dict) -> "ChangeOfVariables":
        A = np.array([[complex(v[0], v[1]) for v in row] for row in data["A"]])
        beta = np.array([complex(v[0], v[1]) for v in data["beta"]])
        return cls(A=A, beta=beta, delta=tuple(data["delta"]), t=int(data["t"]))


@dataclass(frozen=True)
class TransformedSystem:
    """Pencils of Puiseux series: B_j = sum_k g_k(eta) M_k per component j."""

    components: tuple
    conn: ConnectionSystem = field(repr=False)
    cov: ChangeOfVariables = field(repr=False)
    cutoffs: tuple
    branch_records: tuple = ()

    @property
    def n(self) -> int:
        return len(self.components)

    @property
    def state_dim(self) -> int:
        return self.conn.state_dim

    def entry_series(self, j: int) -> np.ndarray:
        """state_dim x state_dim object array of series for component j."""
        d = self.state_dim
        out = np.empty((d, d), dtype=object)
        for r in range(d):
            for c in range(d):
                acc = PuiseuxSeries.zero(self.n, self.cutoffs)
                for g, M in self.components[j]:
                    if M[r, c] != 0:
                        acc = acc + complex(M[r, c]) * g
                out[r, c] = acc
        return out

    def H0(self, j: int) -> np.ndarray:
        d = self.state_dim
        out = np.zeros((d, d), dtype=complex)
        for g, M in self.components[j]:
            out += g.constant_term() * M
        return out

    def eval_component(self, j: int, eta, p=None) -> np.ndarray:
        d = self.state_dim
        out = np.zeros((d, d), dtype=complex)
        for g, M in self.components[j]:
            out += g.eval(eta, p) * M
        return out


def transform_system(
    conn: ConnectionSystem, cov: ChangeOfVariables, cutoffs
) -> TransformedSystem:
    """Compose the connection through the change; errors on configurations
    that are not component-isolated (a factor without dominant monomial)."""
    n = conn.N
    if cov.n != n:
        raise ConfigurationError(f"change has {cov.n} variables, connection has {n}")
    if cov.t % conn.t != 0:
        raise ConfigurationError(
            f"root order {cov.t} must be a multiple of the connection order {conn.t}"
        )
    cutoffs = normalize_cutoffs(cutoffs, n)
    records: list = []
    components = []
    for j in range(n):
        s_j = cov.s(j)
        zeta_exp = Fraction(s_j * cov.t)
        adj = tuple(
            (None if c is None else c - zeta_exp) if k == j else c
            for k, c in enumerate(cutoffs)
        )
        acc: list = []
        for l in range(n):
            b_jl = cov.b_matrix[j, l]
            if b_jl == 0:
                continue
            for f, M in conn.terms[l]:
                series = compose_change(f, cov, adj, record=records)
                series = series.shift(
                    tuple(zeta_exp if k == j else Fraction(0) for k in range(n)),
                    new_cutoffs=cutoffs,
                )
                acc.append((complex(s_j * cov.t * b_jl) * series, M))
        components.append(tuple(acc))
    return TransformedSystem(
        components=tuple(components),
        conn=conn,
        cov=cov,
        cutoffs=cutoffs,
        branch_records=tuple(records),
    )


@dataclass(frozen=True)
class Offender:
    component: int
    row: int
    col: int
    exponents: tuple


@dataclass(frozen=True)
class SingularityVerdict:
    holomorphic: bool
    offenders: tuple
    min_exponents: tuple  # per component, per entry table of min exponent vectors


def _verdict_once(ts: TransformedSystem, prune_tol: float):
    offenders = []
    tables = []
    for j in range(ts.n):
        entries = ts.entry_series(j)
        d = ts.state_dim
        table = {}
        for r in range(d):
            for c in range(d):
                series = entries[r, c].prune(prune_tol)
                mins = series.min_exponents()
                if not series.is_zero():
                    table[(r, c)] = mins
                for (exps, _logs) in series.terms:
                    if any(e < 0 for e in exps):
                        offenders.append(
                            Offender(component=j, row=r, col=c, exponents=tuple(exps))
                        )
        tables.append(table)
    # deduplicate offender exponent patterns per entry
    seen = set()
    uniq = []
    for o in offenders:
        key = (o.component, o.row, o.col, o.exponents)
        if key not in seen:
            seen.add(key)
            uniq.append(o)
    return SingularityVerdict(
        holomorphic=not uniq, offenders=tuple(uniq), min_exponents=tuple(tables)
    )


def check_simple_singularity(
    ts: TransformedSystem, prune_tol: float = PRUNE_TOL, stability_check: bool = True
) -> SingularityVerdict:
    """Holomorphic iff every stored exponent of every entry is componentwise >= 0.

    Coefficients below prune_tol are discarded before the verdict.  The
    verdict is re-derived at cutoff + t; a mismatch in verdict or per-entry
    minimum exponents raises InconclusiveVerdictError.
    """
    verdict = _verdict_once(ts, prune_tol)
    if stability_check:
        bumped = tuple(
            None if c is None else c + ts.cov.t for c in ts.cutoffs
        )
        ts2 = transform_system(ts.conn, ts.cov, bumped)
        verdict2 = _verdict_once(ts2, prune_tol)
        stable = verdict.holomorphic == verdict2.holomorphic and all(
            t1 == t2 for t1, t2 in zip(verdict.min_exponents, verdict2.min_exponents)
        )
        if not stable:
            raise InconclusiveVerdictError(
                "verdict changed when cutoffs were raised; increase the cutoff"
            )
    return verdict


@dataclass(frozen=True)
class IndicialData:
    H0: np.ndarray
    exponents: tuple  # (eigenvalue, multiplicity) pairs
    resonant: bool


def cluster_eigenvalues(values, tol: float = CLUSTER_TOL):
    """Group close eigenvalues; returns (representative, multiplicity) pairs."""
    out: list[list] = []
    for v in sorted(values, key=lambda w: (round(w.real, 9), round(w.imag, 9))):
        for grp in out:
            if abs(v - grp[0]) <= tol:
                grp[1] += 1
                grp[0] = grp[0] + (v - grp[0]) / grp[1]
                break
        else:
            out.append([v, 1])
    return tuple((complex(v), int(m)) for v, m in out)


def indicial_data(ts: TransformedSystem, j: int, prune_tol: float = PRUNE_TOL) -> IndicialData:
    """Constant term of B_j, its eigenvalues, and the integer-shift flag."""
    entries = ts.entry_series(j)
    for r in range(ts.state_dim):
        for c in range(ts.state_dim):
            series = entries[r, c].prune(prune_tol)
            mins = series.min_exponents()
            if any(e != math.inf and e < 0 for e in mins):
                raise NonHolomorphicError(
                    f"component {j} entry ({r},{c}) has negative exponents {mins}"
                )
    H0 = ts.H0(j)
    eigs = np.linalg.eigvals(H0)
    clusters = cluster_eigenvalues(eigs)
    resonant = False
    for va, _ in clusters:
        for vb, _ in clusters:
            diff = va - vb
            near = round(diff.real)
            if near > 0 and abs(diff - near) < CLUSTER_TOL:
                resonant = True
    return IndicialData(H0=H0, exponents=clusters, resonant=resonant)


def restrict_component(ts: TransformedSystem, j: int, fixed: dict | None = None, order: int | None = None):
    """One-variable matrix power series H_0..H_M in eta_j with the other
    variables frozen at regular values; input for the Frobenius solver."""
    fixed = dict(fixed or {})
    for k in range(ts.n):
        if k != j and k not in fixed:
            raise ConfigurationError(f"variable eta_{k + 1} needs a fixed value")
    cutoff_j = ts.cutoffs[j]
    if order is None:
        if cutoff_j is None:
            raise ConfigurationError("unbounded cutoff: pass an explicit order")
        order = int(math.ceil(float(cutoff_j))) - 1
    d = ts.state_dim
    H = [np.zeros((d, d), dtype=complex) for _ in range(order + 1)]
    for g, M in ts.components[j]:
        for (exps, logs), coeff in g.terms.items():
            if any(lg != 0 for lg in logs):
                raise NumericError("log terms cannot be restricted to one variable")
            e_j = exps[j]
            if e_j.denominator != 1 or e_j < 0:
                raise NonHolomorphicError(
                    f"component {j} is not holomorphic (exponent {e_j} in eta_{j + 1})"
                )
            if int(e_j) > order:
                continue
            val = complex(coeff)
            ok = True
            for k in range(ts.n):
                if k == j:
                    continue
                e_k = exps[k]
                if e_k == 0:
                    continue
                if e_k.denominator != 1:
                    raise ConfigurationError(
                        f"fractional exponent {e_k} in eta_{k + 1}: branch ambiguous"
                    )
                zk = complex(fixed[k])
                if zk == 0:
                    if e_k > 0:
                        ok = False
                        break
                    raise ConfigurationError(f"fixed value for eta_{k + 1} must be regular")
                val *= zk ** int(e_k)
            if ok:
                H[int(e_j)] += val * M
    return H
