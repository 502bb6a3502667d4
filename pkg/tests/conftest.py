"""Shared instances; session-scoped because exact verification is reused."""

import pytest

from qgroupoid.algebra_core import FiniteAlgebra
from qgroupoid.examples import (
    HopfAction,
    build_convolution_algebroid,
    build_crossed_product,
    build_function_algebroid,
    build_group_hopf,
    build_tensor_algebroid,
    build_two_sided,
    cyclic_group_table,
    function_algebra_z2,
    group_groupoid,
    pair_groupoid,
    standard_integrals,
    swap_action,
)
from qgroupoid.exact_linear import LinearMap, sc
from qgroupoid.integration import BaseWeight, assemble_measured
from qgroupoid.modification import groupoid_rn_modifier, modify


@pytest.fixture(scope="session")
def p2():
    return pair_groupoid([1, 2])


@pytest.fixture(scope="session")
def z2():
    labels, table = cyclic_group_table(2)
    return group_groupoid(labels, table)


@pytest.fixture(scope="session")
def m_fun(p2):
    return build_function_algebroid(p2)


@pytest.fixture(scope="session")
def m_conv(p2):
    return build_convolution_algebroid(p2)


@pytest.fixture(scope="session")
def m_group(z2):
    return build_convolution_algebroid(z2)  # the group algebra of Z/2


@pytest.fixture(scope="session")
def hopf_z2():
    labels, table = cyclic_group_table(2)
    return build_group_hopf(labels, table, "group")


@pytest.fixture(scope="session")
def hopf_z2_fun():
    labels, table = cyclic_group_table(2)
    return build_group_hopf(labels, table, "function")


@pytest.fixture(scope="session")
def m_tensor():
    b = FiniteAlgebra.pointwise(["u1", "u2"], involution=LinearMap.identity(2))
    c = FiniteAlgebra.pointwise(["v1", "v2"], involution=LinearMap.identity(2))
    return build_tensor_algebroid(b, c, LinearMap.identity(2), LinearMap.identity(2))


@pytest.fixture(scope="session")
def m_crossed(hopf_z2):
    c = function_algebra_z2()
    return build_crossed_product(c, hopf_z2, swap_action(hopf_z2, c))


@pytest.fixture(scope="session")
def m_twosided(hopf_z2):
    c = function_algebra_z2()
    b = function_algebra_z2()
    left = swap_action(hopf_z2, c)
    right = HopfAction(
        hopf_z2, b,
        [LinearMap.identity(2), LinearMap.from_rows([[0, 1], [1, 0]])],
        side="right",
    )
    return build_two_sided(c, hopf_z2, b, left, right,
                           LinearMap.identity(2), LinearMap.identity(2))


@pytest.fixture(scope="session")
def weight_14():
    return BaseWeight(mu_B={0: sc(1), 1: sc(4)}, mu_C={0: sc(1), 1: sc(4)})


@pytest.fixture(scope="session")
def weight_uniform():
    return BaseWeight(mu_B={0: sc(1), 1: sc(1)}, mu_C={0: sc(1), 1: sc(1)})


@pytest.fixture(scope="session")
def x_fun_14(m_fun, p2, weight_14):
    phi, psi = standard_integrals("groupoid-functions", m_fun, groupoid=p2)
    return assemble_measured(m_fun, weight_14, phi, psi)


@pytest.fixture(scope="session")
def x_conv_uniform(m_conv, p2, weight_uniform):
    phi, psi = standard_integrals("groupoid-convolution", m_conv, groupoid=p2)
    return assemble_measured(m_conv, weight_uniform, phi, psi)


@pytest.fixture(scope="session")
def rn_cocycle(p2):
    mod, coc = groupoid_rn_modifier(p2, {0: sc(1), 1: sc(4)})
    return mod, coc


@pytest.fixture(scope="session")
def m_conv_mod(m_conv, rn_cocycle):
    mod, _ = rn_cocycle
    return modify(m_conv, mod)


@pytest.fixture(scope="session")
def x_conv_mod(m_conv_mod, p2, weight_14):
    phi, psi = standard_integrals("groupoid-convolution", m_conv_mod, groupoid=p2)
    return assemble_measured(m_conv_mod, weight_14, phi, psi)


@pytest.fixture(scope="session")
def x_group(m_group, z2):
    phi, psi = standard_integrals("groupoid-convolution", m_group, groupoid=z2)
    w = BaseWeight(mu_B={0: sc(1)}, mu_C={0: sc(1)})
    return assemble_measured(m_group, w, phi, psi)


@pytest.fixture(scope="session")
def x_tensor(m_tensor, weight_14):
    phi, psi = standard_integrals(
        "tensor", m_tensor, base_b_dim=2,
        upsilon=dict(weight_14.mu_B), omega=dict(weight_14.mu_C),
    )
    return assemble_measured(m_tensor, weight_14, phi, psi)
