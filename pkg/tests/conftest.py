import numpy as np
import pytest

import tkz


@pytest.fixture(scope="session")
def sl2():
    return tkz.build_algebra("sl2")


@pytest.fixture(scope="session")
def sl3():
    return tkz.build_algebra("sl3")


@pytest.fixture(scope="session")
def spin_half():
    return tkz.build_irrep_sl2("1/2")


@pytest.fixture(scope="session")
def half_twist(sl2):
    """sl(2) inner automorphism with fraction 1/2: alpha(e) = alpha(f) = 1/2."""
    return tkz.inner_automorphism(sl2, ["1/2"])


@pytest.fixture(scope="session")
def identity_twist(sl2):
    return tkz.inner_automorphism(sl2, [0])


@pytest.fixture(scope="session")
def twisted_n1(sl2, half_twist, spin_half):
    """Closed-form case: A_1 = -(1/6) z^{-1} Id on one spin-1/2 slot."""
    tw = tkz.twisted_slot_rep(half_twist, "trivial")
    om = tkz.build_omega_set(sl2, half_twist, 1, [spin_half], tw)
    return tkz.assemble_connection(om, half_twist)


@pytest.fixture(scope="session")
def twisted_n2(sl2, half_twist, spin_half):
    tw = tkz.twisted_slot_rep(half_twist, "trivial")
    om = tkz.build_omega_set(sl2, half_twist, 1, [spin_half, spin_half], tw)
    return tkz.assemble_connection(om, half_twist)


@pytest.fixture(scope="session")
def classical_n2(sl2, spin_half):
    """Classical KZ, N = 2 spin-1/2 slots, spin-1/2 third slot, level 1."""
    return tkz.assemble_classical(sl2, 1, [spin_half, spin_half], spin_half)


@pytest.fixture()
def rng():
    return np.random.default_rng(20240610)
