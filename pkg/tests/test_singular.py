import numpy as np
import pytest
from fractions import Fraction

import tkz
from tkz.connection import ConnectionSystem
from tkz.errors import (
    ConfigurationError,
    DegenerateConfigurationError,
    NonHolomorphicError,
)
from tkz.rcalc import RElement
from tkz.singular import cluster_eigenvalues, restrict_component

from _oracles import random_points_m2


def shifted_collision_change():
    """z1 = zeta1 + zeta2 + 1, z2 = zeta1 - zeta2 + 1 targeting (0, 0)."""
    B = np.array([[1.0, 1.0], [1.0, -1.0]])
    A = np.linalg.inv(B)
    beta = np.array([1.0, 1.0]) @ A
    return tkz.ChangeOfVariables(A=A, beta=beta, delta=("0", "0"), t=1)


def shared_pole_system(cl: ConnectionSystem) -> ConnectionSystem:
    """Both equations carrying (z1 - z2)^{-1}: flips the sign of the pair term
    in the second equation."""
    broken = []
    for f, M in cl.terms[1]:
        key = next(iter(f.terms))
        if any(m != 0 for m in key[1]):
            g = RElement(cl.t, cl.N)
            g.terms[key] = 1.0 + 0j
            broken.append((g, -M))
        else:
            broken.append((f, M))
    return ConnectionSystem(
        N=cl.N,
        t=cl.t,
        state_dim=cl.state_dim,
        dims=cl.dims,
        terms=(cl.terms[0], tuple(broken)),
        alpha_table=cl.alpha_table,
        level=cl.level,
    )


def test_transform_n1_constant(twisted_n1):
    cov = tkz.ChangeOfVariables(A=np.eye(1), beta=np.zeros(1), delta=("0",), t=2)
    ts = tkz.transform_system(twisted_n1, cov, 10)
    entries = ts.entry_series(0)
    # B_1 = 2 z A_1 = -(1/3) Id, constant
    assert abs(entries[0, 0].constant_term() + 1 / 3) < 1e-14
    assert entries[0, 1].is_zero()
    H0 = ts.H0(0)
    assert np.abs(H0 + np.eye(2) / 3).max() < 1e-14


def test_transform_identity_change_reproduces_connection(sl2, spin_half):
    """Identity change, delta = 0, t = 1: B_1(eta) at eta = z equals z A_1(z).

    Stated for a system without difference factors; with pair terms the
    identity change targets a point that is not component-isolated (the
    z1 = z2 locus enters every punctured polydisc) and must error instead."""
    cl1 = tkz.assemble_classical(sl2, 1, [spin_half], spin_half)
    cov = tkz.ChangeOfVariables(A=np.eye(1), beta=np.zeros(1), delta=("0",), t=1)
    ts = tkz.transform_system(cl1, cov, 12)
    for z in (0.21, 0.15 + 0.1j, -0.4):
        B = ts.eval_component(0, (z,))
        direct = z * cl1.eval_A(1, (z,), (0,))
        assert np.abs(B - direct).max() < 1e-10


def test_transform_identity_change_n2_not_isolated(classical_n2):
    cov = tkz.ChangeOfVariables(A=np.eye(2), beta=np.zeros(2), delta=("0", "0"), t=1)
    with pytest.raises(DegenerateConfigurationError):
        tkz.transform_system(classical_n2, cov, 8)


def test_classical_collision_change_holomorphic(classical_n2):
    cov = tkz.ChangeOfVariables(
        A=np.array([[1.0, 0], [-1, 1]]), beta=np.zeros(2), delta=("0", "inf"), t=1
    )
    ts = tkz.transform_system(classical_n2, cov, 8)
    verdict = tkz.check_simple_singularity(ts)
    assert verdict.holomorphic
    ind = tkz.indicial_data(ts, 0)
    # H0 at the collision is Omega_12: eigenvalues (C - 3)/6 on spin sectors
    got = sorted((round(v.real, 6), m) for v, m in ind.exponents)
    assert got == [(-0.5, 2), (round(1 / 6, 6), 6)]


def test_shared_pole_discrimination(classical_n2):
    cov = shifted_collision_change()
    ts_true = tkz.transform_system(classical_n2, cov, 8)
    assert tkz.check_simple_singularity(ts_true).holomorphic
    ts_mod = tkz.transform_system(shared_pole_system(classical_n2), cov, 8)
    verdict = tkz.check_simple_singularity(ts_mod)
    assert not verdict.holomorphic
    exps = {o.exponents for o in verdict.offenders}
    assert exps == {(Fraction(1), Fraction(-1))}


def test_degenerate_configuration_named(classical_n2):
    # zeta = (z1 - z2, z1 + z2) at (0, 0): z1 = (zeta1 + zeta2)/2 vanishes
    # inside every punctured polydisc
    A = np.array([[1.0, 1.0], [-1.0, 1.0]])
    cov = tkz.ChangeOfVariables(A=A, beta=np.zeros(2), delta=("0", "0"), t=1)
    with pytest.raises(DegenerateConfigurationError):
        tkz.transform_system(classical_n2, cov, 8)


def test_indicial_n1(twisted_n1):
    cov = tkz.ChangeOfVariables(A=np.eye(1), beta=np.zeros(1), delta=("0",), t=2)
    ts = tkz.transform_system(twisted_n1, cov, 10)
    ind = tkz.indicial_data(ts, 0)
    assert np.abs(ind.H0 + np.eye(2) / 3).max() < 1e-13
    assert ind.exponents[0][1] == 2
    assert abs(ind.exponents[0][0] + 1 / 3) < 1e-12
    assert not ind.resonant


def test_indicial_rejects_nonholomorphic(classical_n2):
    ts = tkz.transform_system(shared_pole_system(classical_n2), shifted_collision_change(), 8)
    with pytest.raises(NonHolomorphicError):
        tkz.indicial_data(ts, 0)


def test_exponent_covariance_doubling_t(twisted_n1):
    exps = {}
    for t in (2, 4):
        cov = tkz.ChangeOfVariables(A=np.eye(1), beta=np.zeros(1), delta=("0",), t=t)
        ts = tkz.transform_system(twisted_n1, cov, 12)
        ind = tkz.indicial_data(ts, 0)
        exps[t] = ind.exponents[0][0]
    assert abs(exps[4] - 2 * exps[2]) < 1e-12


def test_verdict_stability_runs(classical_n2):
    cov = tkz.ChangeOfVariables(
        A=np.array([[1.0, 0], [-1, 1]]), beta=np.zeros(2), delta=("0", "inf"), t=1
    )
    ts = tkz.transform_system(classical_n2, cov, 6)
    v1 = tkz.check_simple_singularity(ts, stability_check=True)
    v2 = tkz.check_simple_singularity(ts, stability_check=False)
    assert v1.holomorphic == v2.holomorphic


@pytest.mark.parametrize("system", ["classical", "twisted"])
def test_randomized_regular_targets_holomorphic(system, classical_n2, twisted_n2, rng):
    """Ten randomized affine changes with component-isolated regular targets:
    the transformed systems are holomorphic (the three-case analysis)."""
    conn = classical_n2 if system == "classical" else twisted_n2
    count = 0
    while count < 5:
        w = random_points_m2(rng, 1, rmin=0.7, rmax=1.5, sep=0.5)[0]
        P = rng.normal(size=(2, 2))
        if abs(np.linalg.det(P)) < 0.3:
            continue
        beta = np.array(w) @ P
        cov = tkz.ChangeOfVariables(A=P, beta=beta, delta=("0", "0"), t=conn.t)
        ts = tkz.transform_system(conn, cov, 6)
        verdict = tkz.check_simple_singularity(ts, stability_check=False)
        assert verdict.holomorphic
        count += 1


def test_restrict_component_requires_fixed_values(twisted_n2):
    cov = tkz.ChangeOfVariables(
        A=np.eye(2), beta=np.array([1.0, -2.0]), delta=("0", "0"), t=2
    )
    ts = tkz.transform_system(twisted_n2, cov, 6)
    with pytest.raises(ConfigurationError):
        restrict_component(ts, 0)
    H = restrict_component(ts, 0, {1: 0.05})
    assert H[0].shape == (4, 4)


def test_cluster_eigenvalues():
    vals = np.array([1.0, 1.0 + 1e-12, 2.5, 2.5, 2.5])
    got = cluster_eigenvalues(vals)
    assert [(round(v.real, 6), m) for v, m in got] == [(1.0, 2), (2.5, 3)]


def test_inconclusive_when_cutoff_too_small(twisted_n1):
    """A cutoff so small that entries look empty flips the min-exponent table
    when the checker re-runs at cutoff + t."""
    cov = tkz.ChangeOfVariables(A=np.eye(1), beta=np.zeros(1), delta=("0",), t=2)
    ts = tkz.transform_system(twisted_n1, cov, 0)
    with pytest.raises(tkz.errors.InconclusiveVerdictError):
        tkz.check_simple_singularity(ts)
