"""Exact arithmetic in the coefficient ring C[x_i^{+-1/t}, (x_i - x_j)^{-1}],
branch-aware evaluation through the logarithms l_p(z) = log|z| + i(arg z + 2 p pi)
with arg in [0, 2pi), radial-ordering expansion of difference factors, and
truncated multivariate Puiseux series.

Exponents are exact: variable powers are integer numerators over the root
order t, difference powers are integers, and Puiseux exponents are Fractions.
Only coefficients are floating complex.
"""

import cmath
import math
from fractions import Fraction

import numpy as np

from .errors import (
    ConfigurationError,
    DegenerateConfigurationError,
    SingularPointError,
)

_POWER_CAP = 10_000  # guard for runaway series loops


def arg2pi(z: complex) -> float:
    """Argument of z in [0, 2pi); the branch cut is the positive real axis."""
    a = math.atan2(z.imag, z.real)
    return a if a >= 0 else a + 2 * math.pi


def lp(z: complex, p: int = 0) -> complex:
    """The branch l_p(z) = log|z| + i(arg z + 2 p pi)."""
    z = complex(z)
    if z == 0:
        raise SingularPointError("l_p(0) is undefined")
    return complex(math.log(abs(z)), arg2pi(z) + 2 * math.pi * p)


def binom_fraction(r, k: int) -> Fraction:
    """Generalized binomial coefficient C(r, k) for rational r, exact."""
    r = Fraction(r)
    out = Fraction(1)
    for j in range(k):
        out = out * (r - j) / (j + 1)
    return out


def _pairs(n: int) -> list[tuple[int, int]]:
    return [(i, j) for i in range(n) for j in range(i + 1, n)]


class RElement:
    """Element of the ring: sum of c * prod x_i^{r_i} * prod (x_i - x_j)^{m_ij}.

    Monomial keys are (powers, dpows): ``powers`` holds integer numerators of
    the r_i over t, ``dpows`` holds the integer exponents m_ij in the
    lexicographic (i, j), i < j order.
    """

    __slots__ = ("t", "nvars", "terms")

    def __init__(self, t: int, nvars: int, terms=None):
        if t < 1 or nvars < 1:
            raise ConfigurationError("root order and variable count must be positive")
        self.t = int(t)
        self.nvars = int(nvars)
        self.terms: dict = {}
        if terms:
            for key, coeff in terms.items():
                c = complex(coeff)
                if c != 0:
                    self.terms[key] = self.terms.get(key, 0) + c
            self.terms = {k: v for k, v in self.terms.items() if v != 0}

    # -- constructors --------------------------------------------------------

    @classmethod
    def zero(cls, t: int, nvars: int) -> "RElement":
        return cls(t, nvars)

    @classmethod
    def constant(cls, c, t: int, nvars: int) -> "RElement":
        out = cls(t, nvars)
        if complex(c) != 0:
            out.terms[cls._unit_key(nvars)] = complex(c)
        return out

    @classmethod
    def one(cls, t: int, nvars: int) -> "RElement":
        return cls.constant(1.0, t, nvars)

    @staticmethod
    def _unit_key(nvars: int):
        return ((0,) * nvars, (0,) * (nvars * (nvars - 1) // 2))

    @classmethod
    def var_power(cls, i: int, r, t: int, nvars: int) -> "RElement":
        """x_i^r with r in (1/t)Z."""
        r = Fraction(r)
        num = r * t
        if num.denominator != 1:
            raise ConfigurationError(f"exponent {r} is not in (1/{t})Z")
        powers = [0] * nvars
        powers[i] = int(num)
        out = cls(t, nvars)
        out.terms[(tuple(powers), (0,) * (nvars * (nvars - 1) // 2))] = 1.0 + 0j
        return out

    @classmethod
    def diff_power(cls, i: int, j: int, m: int, t: int, nvars: int) -> "RElement":
        """(x_i - x_j)^m for i != j; stored on the i < j key with sign (-1)^m."""
        if i == j:
            raise ConfigurationError("difference factor needs distinct indices")
        coeff = 1.0 + 0j
        if i > j:
            i, j = j, i
            coeff = (-1.0) ** (m % 2)
        dpows = [0] * (nvars * (nvars - 1) // 2)
        dpows[_pairs(nvars).index((i, j))] = int(m)
        out = cls(t, nvars)
        out.terms[((0,) * nvars, tuple(dpows))] = coeff
        return out

    # -- ring operations -----------------------------------------------------

    def _check_compatible(self, other: "RElement"):
        if self.t != other.t or self.nvars != other.nvars:
            raise ConfigurationError("mixing RElements over different rings")

    def __add__(self, other):
        if isinstance(other, (int, float, complex)):
            other = RElement.constant(other, self.t, self.nvars)
        self._check_compatible(other)
        terms = dict(self.terms)
        for key, c in other.terms.items():
            s = terms.get(key, 0) + c
            if s == 0:
                terms.pop(key, None)
            else:
                terms[key] = s
        out = RElement(self.t, self.nvars)
        out.terms = terms
        return out

    __radd__ = __add__

    def __neg__(self):
        out = RElement(self.t, self.nvars)
        out.terms = {k: -c for k, c in self.terms.items()}
        return out

    def __sub__(self, other):
        return self + (-other if isinstance(other, RElement) else RElement.constant(-other, self.t, self.nvars))

    def __mul__(self, other):
        if isinstance(other, (int, float, complex)):
            c = complex(other)
            out = RElement(self.t, self.nvars)
            if c != 0:
                out.terms = {k: v * c for k, v in self.terms.items()}
            return out
        self._check_compatible(other)
        out = RElement(self.t, self.nvars)
        terms: dict = {}
        for (p1, d1), c1 in self.terms.items():
            for (p2, d2), c2 in other.terms.items():
                key = (
                    tuple(a + b for a, b in zip(p1, p2)),
                    tuple(a + b for a, b in zip(d1, d2)),
                )
                s = terms.get(key, 0) + c1 * c2
                if s == 0:
                    terms.pop(key, None)
                else:
                    terms[key] = s
        out.terms = terms
        return out

    __rmul__ = __mul__

    def __eq__(self, other):
        return (
            isinstance(other, RElement)
            and self.t == other.t
            and self.nvars == other.nvars
            and self.terms == other.terms
        )

    def equals(self, other: "RElement", tol: float = 0.0) -> bool:
        """Structural equality with coefficient tolerance."""
        if not isinstance(other, RElement) or self.t != other.t or self.nvars != other.nvars:
            return False
        keys = set(self.terms) | set(other.terms)
        return all(abs(self.terms.get(k, 0) - other.terms.get(k, 0)) <= tol for k in keys)

    def prune(self, tol: float) -> "RElement":
        out = RElement(self.t, self.nvars)
        out.terms = {k: c for k, c in self.terms.items() if abs(c) > tol}
        return out

    def is_zero(self) -> bool:
        return not self.terms

    def copy(self) -> "RElement":
        out = RElement(self.t, self.nvars)
        out.terms = dict(self.terms)
        return out

    def degrees(self) -> set[Fraction]:
        """Set of monomial degrees: sum r_i + sum m_ij."""
        return {
            Fraction(sum(p), self.t) + sum(d) for (p, d) in self.terms
        }

    # -- calculus ------------------------------------------------------------

    def differentiate(self, i: int) -> "RElement":
        """Exact d/dx_i by the product rule over monomial factors."""
        pairs = _pairs(self.nvars)
        out = RElement(self.t, self.nvars)
        terms: dict = {}

        def _acc(key, c):
            if c == 0:
                return
            s = terms.get(key, 0) + c
            if s == 0:
                terms.pop(key, None)
            else:
                terms[key] = s

        for (p, d), c in self.terms.items():
            if p[i] != 0:
                r = Fraction(p[i], self.t)
                np_ = list(p)
                np_[i] -= self.t
                _acc((tuple(np_), d), c * complex(r))
            for idx, (a, b) in enumerate(pairs):
                if d[idx] == 0 or (a != i and b != i):
                    continue
                sign = 1.0 if a == i else -1.0
                nd = list(d)
                nd[idx] -= 1
                _acc((p, tuple(nd)), c * d[idx] * sign)
        out.terms = terms
        return out

    # -- evaluation ----------------------------------------------------------

    def _factor_checks(self, z):
        pairs = _pairs(self.nvars)
        for (p, d) in self.terms:
            for i, num in enumerate(p):
                if num == 0:
                    continue
                if z[i] == 0 and (num % self.t != 0 or num < 0):
                    raise SingularPointError(
                        f"x{i + 1}^({Fraction(num, self.t)}) evaluated at z{i + 1} = 0"
                    )
            for idx, m in enumerate(d):
                if m < 0:
                    a, b = pairs[idx]
                    if z[a] == z[b]:
                        raise SingularPointError(
                            f"(x{a + 1} - x{b + 1})^{m} evaluated at z{a + 1} = z{b + 1}"
                        )

    def eval_with_args(self, z, thetas) -> complex:
        """Evaluate with explicit continuous arguments theta_i for each variable."""
        z = [complex(w) for w in z]
        self._factor_checks(z)
        pairs = _pairs(self.nvars)
        logs = []
        for i, w in enumerate(z):
            logs.append(None if w == 0 else complex(math.log(abs(w)), thetas[i]))
        total = 0j
        for (p, d), c in self.terms.items():
            val = c
            for i, num in enumerate(p):
                if num == 0:
                    continue
                if logs[i] is None:  # z_i == 0 with positive integer power
                    val = 0j
                    break
                val *= cmath.exp(logs[i] * num / self.t)
            else:
                for idx, m in enumerate(d):
                    if m == 0:
                        continue
                    a, b = pairs[idx]
                    val *= (z[a] - z[b]) ** m
                total += val
                continue
            # a zero factor annihilated the monomial
        return total

    def eval(self, z, p=None) -> complex:
        """Evaluate on the branch tuple p: x_i^r -> exp(r l_{p_i}(z_i))."""
        z = [complex(w) for w in z]
        if p is None:
            p = (0,) * self.nvars
        if isinstance(p, int):
            p = (p,) * self.nvars
        thetas = [
            (arg2pi(w) + 2 * math.pi * pi_) if w != 0 else 0.0
            for w, pi_ in zip(z, p)
        ]
        return self.eval_with_args(z, thetas)

    # -- serialization -------------------------------------------------------

    def to_json(self) -> dict:
        pairs = _pairs(self.nvars)
        items = []
        for (p, d) in sorted(self.terms):
            c = self.terms[(p, d)]
            diffs = {f"{pairs[idx][0]},{pairs[idx][1]}": m for idx, m in enumerate(d) if m}
            items.append({"coeff": [c.real, c.imag], "powers": list(p), "diffs": diffs})
        return {"t": self.t, "nvars": self.nvars, "terms": items}

    @classmethod
    def from_json(cls, data: dict) -> "RElement":
        t, nvars = int(data["t"]), int(data["nvars"])
        pairs = _pairs(nvars)
        out = cls(t, nvars)
        for item in data["terms"]:
            powers = tuple(int(x) for x in item["powers"])
            dpows = [0] * len(pairs)
            for key, m in item.get("diffs", {}).items():
                i, j = (int(x) for x in key.split(","))
                dpows[pairs.index((i, j))] = int(m)
            c = complex(item["coeff"][0], item["coeff"][1])
            key = (powers, tuple(dpows))
            out.terms[key] = out.terms.get(key, 0) + c
        out.terms = {k: v for k, v in out.terms.items() if v != 0}
        return out

    def __repr__(self):
        if not self.terms:
            return "RElement(0)"
        pairs = _pairs(self.nvars)
        bits = []
        for (p, d), c in sorted(self.terms.items()):
            factors = [f"({c:.6g})"]
            for i, num in enumerate(p):
                if num:
                    factors.append(f"x{i + 1}^({Fraction(num, self.t)})")
            for idx, m in enumerate(d):
                if m:
                    a, b = pairs[idx]
                    factors.append(f"(x{a + 1}-x{b + 1})^{m}")
            bits.append("*".join(factors))
        return " + ".join(bits)


class PuiseuxSeries:
    """Truncated multivariate series with exponents in Q and log powers.

    Keys are (exponents, log powers); a term is kept only while every
    exponent is strictly below the per-variable cutoff.
    """

    __slots__ = ("nvars", "cutoffs", "terms")

    def __init__(self, nvars: int, cutoffs, terms=None):
        self.nvars = int(nvars)
        self.cutoffs = normalize_cutoffs(cutoffs, nvars)
        self.terms: dict = {}
        if terms:
            for key, c in terms.items():
                c = complex(c)
                if c == 0 or not self._inside(key[0]):
                    continue
                self.terms[key] = self.terms.get(key, 0) + c
            self.terms = {k: v for k, v in self.terms.items() if v != 0}

    def _inside(self, exps) -> bool:
        return all(
            c is None or e < c for e, c in zip(exps, self.cutoffs)
        )

    # -- constructors --------------------------------------------------------

    @classmethod
    def zero(cls, nvars: int, cutoffs) -> "PuiseuxSeries":
        return cls(nvars, cutoffs)

    @classmethod
    def constant(cls, c, nvars: int, cutoffs) -> "PuiseuxSeries":
        out = cls(nvars, cutoffs)
        key = ((Fraction(0),) * nvars, (0,) * nvars)
        if complex(c) != 0 and out._inside(key[0]):
            out.terms[key] = complex(c)
        return out

    @classmethod
    def monomial(cls, c, exps, nvars: int, cutoffs, logs=None) -> "PuiseuxSeries":
        out = cls(nvars, cutoffs)
        exps = tuple(Fraction(e) for e in exps)
        logs = tuple(int(l) for l in (logs or (0,) * nvars))
        if complex(c) != 0 and out._inside(exps):
            out.terms[(exps, logs)] = complex(c)
        return out

    # -- arithmetic -----------------------------------------------------------

    def _merge_cutoffs(self, other: "PuiseuxSeries"):
        return tuple(
            a if b is None else b if a is None else min(a, b)
            for a, b in zip(self.cutoffs, other.cutoffs)
        )

    def __add__(self, other):
        if isinstance(other, (int, float, complex)):
            other = PuiseuxSeries.constant(other, self.nvars, self.cutoffs)
        out = PuiseuxSeries(self.nvars, self._merge_cutoffs(other))
        terms = {}
        for src in (self.terms, other.terms):
            for key, c in src.items():
                if not out._inside(key[0]):
                    continue
                s = terms.get(key, 0) + c
                if s == 0:
                    terms.pop(key, None)
                else:
                    terms[key] = s
        out.terms = terms
        return out

    __radd__ = __add__

    def __neg__(self):
        out = PuiseuxSeries(self.nvars, self.cutoffs)
        out.terms = {k: -c for k, c in self.terms.items()}
        return out

    def __sub__(self, other):
        if isinstance(other, (int, float, complex)):
            other = PuiseuxSeries.constant(other, self.nvars, self.cutoffs)
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, float, complex)):
            c = complex(other)
            out = PuiseuxSeries(self.nvars, self.cutoffs)
            if c != 0:
                out.terms = {k: v * c for k, v in self.terms.items()}
            return out
        out = PuiseuxSeries(self.nvars, self._merge_cutoffs(other))
        terms: dict = {}
        for (e1, l1), c1 in self.terms.items():
            for (e2, l2), c2 in other.terms.items():
                exps = tuple(a + b for a, b in zip(e1, e2))
                if not out._inside(exps):
                    continue
                key = (exps, tuple(a + b for a, b in zip(l1, l2)))
                s = terms.get(key, 0) + c1 * c2
                if s == 0:
                    terms.pop(key, None)
                else:
                    terms[key] = s
        out.terms = terms
        return out

    __rmul__ = __mul__

    def shift(self, exps, new_cutoffs=None) -> "PuiseuxSeries":
        """Multiply by the monomial with the given exponent vector."""
        exps = tuple(Fraction(e) for e in exps)
        cutoffs = (
            normalize_cutoffs(new_cutoffs, self.nvars)
            if new_cutoffs is not None
            else tuple(
                None if c is None else c + e for c, e in zip(self.cutoffs, exps)
            )
        )
        out = PuiseuxSeries(self.nvars, cutoffs)
        terms = {}
        for (e, l), c in self.terms.items():
            ne = tuple(a + b for a, b in zip(e, exps))
            if out._inside(ne):
                terms[(ne, l)] = c
        out.terms = terms
        return out

    def prune(self, tol: float) -> "PuiseuxSeries":
        out = PuiseuxSeries(self.nvars, self.cutoffs)
        out.terms = {k: c for k, c in self.terms.items() if abs(c) > tol}
        return out

    def is_zero(self) -> bool:
        return not self.terms

    def min_exponents(self):
        """Per-variable minimum exponent; +inf sentinel on the empty series."""
        if not self.terms:
            return (math.inf,) * self.nvars
        mins = [None] * self.nvars
        for (exps, _logs) in self.terms:
            for i, e in enumerate(exps):
                if mins[i] is None or e < mins[i]:
                    mins[i] = e
        return tuple(mins)

    def constant_term(self) -> complex:
        return self.terms.get(((Fraction(0),) * self.nvars, (0,) * self.nvars), 0j)

    def coefficient(self, exps, logs=None) -> complex:
        exps = tuple(Fraction(e) for e in exps)
        logs = tuple(int(l) for l in (logs or (0,) * self.nvars))
        return self.terms.get((exps, logs), 0j)

    def eval(self, z, p=None) -> complex:
        z = [complex(w) for w in z]
        if p is None:
            p = (0,) * self.nvars
        if isinstance(p, int):
            p = (p,) * self.nvars
        ls = [lp(w, pi_) if w != 0 else None for w, pi_ in zip(z, p)]
        total = 0j
        for (exps, logs), c in self.terms.items():
            val = c
            for i, e in enumerate(exps):
                if e == 0:
                    continue
                if ls[i] is None:
                    if e > 0 and e.denominator == 1:
                        val = 0j
                        break
                    raise SingularPointError(f"series evaluated at z{i + 1} = 0")
                val *= cmath.exp(ls[i] * float(e))
            else:
                for i, k in enumerate(logs):
                    if k:
                        if ls[i] is None:
                            raise SingularPointError(f"log of 0 in variable {i + 1}")
                        val *= ls[i] ** k
                total += val
        return total

    def __repr__(self):
        n = len(self.terms)
        return f"PuiseuxSeries({self.nvars} vars, {n} terms, cutoffs={self.cutoffs})"


def normalize_cutoffs(cutoffs, nvars: int):
    """Accept a scalar or per-variable cutoffs; None / inf mean unbounded."""
    if cutoffs is None:
        return (None,) * nvars
    if isinstance(cutoffs, (int, Fraction)):
        return (Fraction(cutoffs),) * nvars
    if isinstance(cutoffs, float):
        if math.isinf(cutoffs):
            return (None,) * nvars
        return (Fraction(cutoffs),) * nvars
    out = []
    for c in cutoffs:
        if c is None or (isinstance(c, float) and math.isinf(c)):
            out.append(None)
        else:
            out.append(Fraction(c))
    if len(out) != nvars:
        raise ConfigurationError(f"expected {nvars} cutoffs, got {len(out)}")
    return tuple(out)


def series_min_exponents(s: PuiseuxSeries):
    return s.min_exponents()


def iota_expand(f: RElement, cutoffs) -> PuiseuxSeries:
    """Radial-ordering expansion |x_1| > ... > |x_N|: each (x_i - x_j)^m with
    i < j expands in nonnegative powers of the later variable x_j."""
    n = f.nvars
    cutoffs = normalize_cutoffs(cutoffs, n)
    pairs = _pairs(n)
    total = PuiseuxSeries.zero(n, cutoffs)
    for (p, d), c in f.terms.items():
        exps = [Fraction(num, f.t) for num in p]
        term = PuiseuxSeries.monomial(c, exps, n, cutoffs)
        for idx, m in enumerate(d):
            if m == 0:
                continue
            i, j = pairs[idx]
            if m > 0:
                fac = PuiseuxSeries.zero(n, cutoffs)
                for k in range(m + 1):
                    e = [Fraction(0)] * n
                    e[i], e[j] = Fraction(m - k), Fraction(k)
                    fac += PuiseuxSeries.monomial(
                        float(binom_fraction(m, k)) * (-1.0) ** k, e, n, cutoffs
                    )
            else:
                cj = cutoffs[j]
                if cj is None:
                    raise ConfigurationError(
                        f"expanding (x{i + 1}-x{j + 1})^{m} needs a finite cutoff in x{j + 1}"
                    )
                fac = PuiseuxSeries.zero(n, cutoffs)
                k = 0
                while k < cj and k < _POWER_CAP:
                    e = [Fraction(0)] * n
                    e[i], e[j] = Fraction(m - k), Fraction(k)
                    coeff = float(binom_fraction(m, k)) * (-1.0) ** k
                    fac += PuiseuxSeries.monomial(coeff, e, n, cutoffs)
                    k += 1
            term = term * fac
        total = total + term
    return total


# -- composition through a change of variables --------------------------------


def _laurent_power(
    poly: dict,
    r: Fraction,
    nvars: int,
    cutoffs,
    name: str,
    lead_branch: int = 0,
    record=None,
) -> PuiseuxSeries:
    """Raise a Laurent polynomial in eta (dict: exponent tuple -> coeff) to the
    rational power r, expanding around its dominant monomial as eta -> 0."""
    if not poly:
        raise DegenerateConfigurationError(f"factor {name} is identically zero")
    r = Fraction(r)
    if r == 0:
        return PuiseuxSeries.constant(1.0, nvars, cutoffs)
    if r.denominator == 1 and r >= 0:
        # negative exponents in the base can pull cross-terms back under the
        # cutoff, so compute wide and truncate once at the end
        spread = int(r) * max(0, max((-min(e for e in k) for k in poly), default=0))
        wide = tuple(
            None if c is None else c + spread
            for c in normalize_cutoffs(cutoffs, nvars)
        )
        base = PuiseuxSeries(nvars, wide, {(k, (0,) * nvars): v for k, v in poly.items()})
        out = PuiseuxSeries.constant(1.0, nvars, wide)
        for _ in range(int(r)):
            out = out * base
        return PuiseuxSeries(nvars, cutoffs, out.terms)
    # dominant monomial: every other exponent vector exceeds it componentwise
    lead = None
    for a in poly:
        if all(b == a or all(bb >= aa for aa, bb in zip(a, b)) for b in poly):
            lead = a
            break
    if lead is None:
        raise DegenerateConfigurationError(
            f"factor {name} has no dominant monomial; configuration is not component-isolated"
        )
    c_lead = poly[lead]
    shift = tuple(r * e for e in lead)
    adj = tuple(
        None if c is None else c - s for c, s in zip(normalize_cutoffs(cutoffs, nvars), shift)
    )
    u = PuiseuxSeries(
        nvars,
        adj,
        {
            (tuple(b - a for a, b in zip(lead, key)), (0,) * nvars): v / c_lead
            for key, v in poly.items()
            if key != lead
        },
    )
    acc = PuiseuxSeries.constant(1.0, nvars, adj)
    u_pow = PuiseuxSeries.constant(1.0, nvars, adj)
    k = 1
    while k < _POWER_CAP:
        u_pow = u_pow * u
        if u_pow.is_zero():
            break
        acc = acc + float(binom_fraction(r, k)) * u_pow
        k += 1
    lead_val = cmath.exp(lp(c_lead, lead_branch) * float(r))
    if record is not None:
        record.append(
            {"factor": name, "lead_coeff": c_lead, "exponent": r, "branch": lead_branch}
        )
    return (lead_val * acc).shift(shift, new_cutoffs=cutoffs)


def compose_change(f: RElement, change, cutoffs, lead_branch: int = 0, record=None) -> PuiseuxSeries:
    """Substitute z_l = sum_k b_{kl} eta_k^{s(delta_k) t} + gamma_l into f and
    expand as a truncated Puiseux series in eta.

    ``change`` provides ``b_matrix`` (the inverse of its A), ``gamma``,
    ``delta`` and the root order ``t`` (see singular.ChangeOfVariables).
    Fractional powers expand as lead^r (1 + rest/lead)^r around the dominant
    monomial; a missing dominant monomial raises DegenerateConfigurationError
    naming the factor.
    """
    n = f.nvars
    cutoffs = normalize_cutoffs(cutoffs, n)
    t = int(change.t)
    B = np.asarray(change.b_matrix, dtype=complex)
    gamma = np.asarray(change.gamma, dtype=complex)
    if B.shape != (n, n) or gamma.shape != (n,):
        raise ConfigurationError("change of variables has the wrong dimensions")
    signs = [change.s(j) for j in range(n)]

    def _sub_poly(l: int) -> dict:
        poly: dict = {}
        for j in range(n):
            if B[j, l] != 0:
                key = tuple(
                    Fraction(signs[j] * t) if k == j else Fraction(0) for k in range(n)
                )
                poly[key] = poly.get(key, 0) + complex(B[j, l])
        if gamma[l] != 0:
            key = (Fraction(0),) * n
            poly[key] = poly.get(key, 0) + complex(gamma[l])
        return poly

    subs = [_sub_poly(l) for l in range(n)]
    pairs = _pairs(n)

    def _diff_poly(a: int, b: int) -> dict:
        dpoly: dict = dict(subs[a])
        for key, v in subs[b].items():
            s = dpoly.get(key, 0) - v
            if s == 0:
                dpoly.pop(key, None)
            else:
                dpoly[key] = s
        return dpoly

    def _dip(poly: dict, r: Fraction) -> list:
        """Per-variable worst negative exponent of poly^r (0 if none)."""
        if not poly:
            return [Fraction(0)] * n
        mins = [min(key[i] for key in poly) for i in range(n)]
        if r >= 0 and r.denominator == 1:
            return [max(Fraction(0), -r * m) for m in mins]
        # fractional or negative: exponents start at r * (dominant monomial)
        lead = None
        for a in poly:
            if all(b == a or all(bb >= aa for aa, bb in zip(a, b)) for b in poly):
                lead = a
                break
        if lead is None:
            return [Fraction(0)] * n  # the power itself will raise
        return [max(Fraction(0), -r * e) for e in lead]

    total = PuiseuxSeries.zero(n, cutoffs)
    for (p, d), c in f.terms.items():
        factors = []
        for i, num in enumerate(p):
            if num:
                factors.append((subs[i], Fraction(num, f.t), f"z{i + 1}"))
        for idx, m in enumerate(d):
            if m:
                a, b = pairs[idx]
                factors.append((_diff_poly(a, b), Fraction(m), f"z{a + 1}-z{b + 1}"))
        # widen cutoffs by the total downward pull of all factors so that
        # intermediate truncation never discards terms that a later factor
        # with negative exponents would bring back under the final cutoff
        widen = [Fraction(0)] * n
        for poly, r, _name in factors:
            for i, w in enumerate(_dip(poly, r)):
                widen[i] += w
        wide = tuple(
            None if co is None else co + w for co, w in zip(cutoffs, widen)
        )
        term = PuiseuxSeries.constant(c, n, wide)
        for poly, r, name in factors:
            term = term * _laurent_power(poly, r, n, wide, name, lead_branch, record)
        total = total + PuiseuxSeries(n, cutoffs, term.terms)
    return total
