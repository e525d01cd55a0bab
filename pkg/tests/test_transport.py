import cmath

import numpy as np
import pytest
from scipy.linalg import expm

import tkz
from tkz.connection import ConnectionSystem
from tkz.errors import ConfigurationError, ProximityError
from tkz.frobenius import gauss_companion_coeffs
from tkz.rcalc import RElement
from tkz.singular import restrict_component
from tkz.transport import transport_ode


def square_loop(center=0.0, radius=1.0):
    c = complex(center)
    pts = [c + radius, c + 1j * radius, c - radius, c - 1j * radius, c + radius]
    return tuple((p,) for p in pts)


def test_zero_connection_is_identity(sl2, identity_twist):
    trivial = tkz.ModuleRep(dim=1, action=(np.zeros((1, 1)),) * 3)
    tw = tkz.twisted_slot_rep(identity_twist, "trivial")
    om = tkz.build_omega_set(sl2, identity_twist, 1, [trivial], tw)
    conn = tkz.assemble_connection(om, identity_twist)
    path = tkz.PathSpec(vertices=((1 + 0j,), (2 + 1j,)), branch_start=(0,), avoid_margin=0.3)
    res = tkz.integrate_path(conn, path, np.array([1.0], complex), tol=1e-10)
    assert abs(res.psi[0] - 1.0) < 1e-12


def test_twisted_n1_scaling(twisted_n1):
    path = tkz.PathSpec(vertices=((1 + 0j,), (4 + 0j,)), branch_start=(0,), avoid_margin=0.4)
    res = tkz.integrate_path(conn=twisted_n1, path=path, psi0=np.array([1.0, 1.0], complex), tol=1e-11)
    assert abs(res.psi[0] - 4 ** (-1 / 6)) < 1e-9
    assert abs(res.psi[1] - 4 ** (-1 / 6)) < 1e-9


def test_retraced_path_returns(classical_n2, rng):
    verts = ((1.0 + 0j, -1.0 + 0j), (1.5 + 0.5j, -0.8 - 0.2j), (1.0 + 0j, -1.0 + 0j))
    path = tkz.PathSpec(vertices=verts, branch_start=(0, 0), avoid_margin=0.3)
    d = classical_n2.state_dim
    psi0 = rng.normal(size=d) + 1j * rng.normal(size=d)
    res = tkz.integrate_path(classical_n2, path, psi0, tol=1e-11)
    assert np.abs(res.psi - psi0).max() < 1e-9 * max(1.0, np.abs(psi0).max())


def test_monodromy_twisted_n1(twisted_n1):
    loop = tkz.PathSpec(vertices=square_loop(), branch_start=(0,), avoid_margin=0.5)
    res = tkz.monodromy_loop(twisted_n1, loop, tol=1e-11)
    expected = np.exp(-1j * np.pi / 3) * np.eye(2)
    assert np.abs(res.matrix - expected).max() < 1e-8
    assert res.est_error < 1e-8
    assert abs(np.linalg.det(res.matrix)) > 0


def test_monodromy_branch_counter(twisted_n1):
    loop = tkz.PathSpec(vertices=square_loop(), branch_start=(0,), avoid_margin=0.5)
    res = tkz.integrate_path(twisted_n1, loop, np.eye(2, dtype=complex), tol=1e-10)
    assert res.end_branches == (1,)  # one positive winding around z = 0


def test_constant_h_small_circle(sl2):
    """Local system eta psi' = H0 psi: monodromy similar to exp(2 pi i H0)."""
    H0 = np.array([[0.25, 1.0], [0.0, -0.4]], dtype=complex)
    # realize as a 1-variable connection: A list with z^{-1} H0
    f = RElement.var_power(0, -1, 1, 1)
    conn = ConnectionSystem(
        N=1, t=1, state_dim=2, dims=(1, 2, 1),
        terms=((  (f, H0), ),),
        alpha_table=(), level=1.0,
    )
    loop = tkz.PathSpec(vertices=square_loop(radius=0.5), branch_start=(0,), avoid_margin=0.25)
    res = tkz.monodromy_loop(conn, loop, tol=1e-11)
    expected = expm(2j * np.pi * H0)
    got = sorted(np.linalg.eigvals(res.matrix), key=lambda v: v.real)
    want = sorted(np.linalg.eigvals(expected), key=lambda v: v.real)
    assert max(abs(a - b) for a, b in zip(got, want)) < 1e-8


def test_classical_collision_monodromy_vs_indicial(classical_n2):
    """Small loop of z1 around z2: eigenvalues of M equal exp(2 pi i * eig(H0))
    for the collision residue computed independently by module singular."""
    cov = tkz.ChangeOfVariables(
        A=np.array([[1.0, 0], [-1, 1]]), beta=np.zeros(2), delta=("0", "inf"), t=1
    )
    ts = tkz.transform_system(classical_n2, cov, 8)
    ind = tkz.indicial_data(ts, 0)
    z2 = 1.0 + 0j
    r = 0.3
    verts = tuple((z2 + r * w, z2) for w in (1, 1j, -1, -1j, 1))
    loop = tkz.PathSpec(vertices=verts, branch_start=(0, 0), avoid_margin=0.2)
    res = tkz.monodromy_loop(classical_n2, loop, tol=1e-11)
    got = np.sort_complex(np.linalg.eigvals(res.matrix))
    want = np.sort_complex(np.exp(2j * np.pi * np.linalg.eigvals(ind.H0)))
    assert np.abs(got - want).max() < 1e-7
    # det(M) = exp(2 pi i tr residue)
    assert abs(np.linalg.det(res.matrix) - np.exp(2j * np.pi * np.trace(ind.H0))) < 1e-7


def test_loop_composition(twisted_n1):
    sq = square_loop()
    double = sq + sq[1:]
    loop1 = tkz.PathSpec(vertices=sq, branch_start=(0,), avoid_margin=0.5)
    loop2 = tkz.PathSpec(vertices=double, branch_start=(0,), avoid_margin=0.5)
    m1 = tkz.monodromy_loop(twisted_n1, loop1, tol=1e-10).matrix
    m2 = tkz.monodromy_loop(twisted_n1, loop2, tol=1e-10).matrix
    assert np.abs(m2 - m1 @ m1).max() < 1e-7


def test_homotopy_stability(twisted_n1):
    loop_a = tkz.PathSpec(vertices=square_loop(), branch_start=(0,), avoid_margin=0.5)
    hex_pts = tuple(
        (cmath.exp(2j * cmath.pi * k / 6) * (1.3 if k % 2 else 0.8),) for k in range(6)
    ) + (((1.3 if 6 % 2 else 0.8) + 0j,),)
    verts = hex_pts[:-1] + (hex_pts[0],)
    loop_b = tkz.PathSpec(vertices=verts, branch_start=(0,), avoid_margin=0.4)
    m_a = tkz.monodromy_loop(twisted_n1, loop_a, tol=1e-10).matrix
    m_b = tkz.monodromy_loop(twisted_n1, loop_b, tol=1e-10).matrix
    assert np.abs(m_a - m_b).max() < 1e-7


def test_order_of_convergence_step_halving(twisted_n1):
    """Fixed-step order sanity: halving the step cuts the error estimate by
    far more than 4x for the 5(4) pair; tightening tol also reduces it."""
    path = tkz.PathSpec(vertices=((1 + 0j,), (3 + 0j,)), branch_start=(0,), avoid_margin=0.4)
    psi0 = np.array([1.0, 1.0], complex)
    res_h = tkz.integrate_path(twisted_n1, path, psi0, tol=1e3, max_step_cap=0.05)
    res_h2 = tkz.integrate_path(twisted_n1, path, psi0, tol=1e3, max_step_cap=0.025)
    assert res_h2.est_error < res_h.est_error / 4
    res_t = tkz.integrate_path(twisted_n1, path, psi0, tol=1e-8)
    res_t2 = tkz.integrate_path(twisted_n1, path, psi0, tol=1e-9)
    assert res_t2.est_error < res_t.est_error


def test_path_validation_rejects_near_misses():
    with pytest.raises(ConfigurationError):
        tkz.PathSpec(vertices=((1 + 0j,), (-1 + 0j,)), branch_start=(0,), avoid_margin=0.1)
    with pytest.raises(ConfigurationError):
        tkz.PathSpec(
            vertices=((1.0, 1.05), (2.0, 2.05)), branch_start=(0, 0), avoid_margin=0.2
        )


def test_proximity_error_names_component(twisted_n1):
    # a legal path, but an adversarial max-step cap forces collapse
    path = tkz.PathSpec(vertices=((1 + 0j,), (2 + 0j,)), branch_start=(0,), avoid_margin=0.5)

    def rhs(s, y):
        return y / (1e-30 + 0j)

    with pytest.raises(ProximityError):
        transport_ode(rhs, np.ones(1, complex), 0.0, 1.0, 1e-10, max_step=lambda s: 1e-16)


def test_match_local_global_cases(twisted_n1):
    cov = tkz.ChangeOfVariables(A=np.eye(1), beta=np.zeros(1), delta=("0",), t=2)
    ts = tkz.transform_system(twisted_n1, cov, 12)
    H = restrict_component(ts, 0)
    sol = tkz.frobenius_fundamental(H, order=10, r_H=1.0)
    assert tkz.match_local_global(sol, H, 0.1, 0.3, tol=1e-12) < 1e-9

    H2 = gauss_companion_coeffs(0.5, 0.5, 1.0, 24)
    sol2 = tkz.frobenius_fundamental(H2, order=24, r_H=1.0)
    assert tkz.match_local_global(sol2, H2, 0.1, 0.3, tol=1e-12) < 1e-7

    Hc = [np.diag([0.25, -0.5]).astype(complex)]
    solc = tkz.frobenius_fundamental(Hc, order=8)
    assert tkz.match_local_global(solc, Hc, 0.2, 0.5 + 0.3j, tol=1e-13) < 1e-10


def test_match_local_global_rejects_outside_anchor():
    Hc = [np.diag([0.25, -0.5]).astype(complex)]
    solc = tkz.frobenius_fundamental(Hc, order=8, r_H=0.5)
    with pytest.raises(ConfigurationError):
        tkz.match_local_global(solc, Hc, 0.9, 0.2)
