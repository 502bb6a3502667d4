"""Modular theory, uniqueness, faithfulness, dual algebra, Haar rescaling."""

import pytest

from qgroupoid.algebra_core import FiniteAlgebra
from qgroupoid.examples import (
    build_function_algebroid,
    cyclic_group_table,
    disjoint_union,
    group_groupoid,
    standard_integrals,
)
from qgroupoid.exact_linear import ONE, LinearMap, Rref, kron_vec, sc
from qgroupoid.integration import (
    BaseWeight,
    assemble_measured,
    ev,
    functional_of_map,
    gram_map,
)
from qgroupoid.report import Rejected
from qgroupoid.structure_theory import (
    convolution,
    convolution_counit_identity,
    dual_algebra,
    faithfulness_check,
    haar_analysis,
    local_projectivity,
    modular_automorphism,
    modular_element,
    uniqueness_check,
)


def test_sigma_identity_on_commutative_instance(x_fun_14):
    sig = modular_automorphism(x_fun_14, "left")
    assert sig.report.ok, str(sig.report)
    assert sig.mapping == LinearMap.identity(4)
    sig_r = modular_automorphism(x_fun_14, "right")
    assert sig_r.report.ok
    assert sig_r.mapping == LinearMap.identity(4)


def test_sigma_on_tensor_instance_is_antipode_square_composite(x_tensor):
    # sigma = S^2 (x) S^-2 legwise; S^2 restricted to either base gives the
    # leg maps, and the kron of those two restrictions must equal sigma
    sig = modular_automorphism(x_tensor, "left")
    assert sig.report.ok
    M = x_tensor.M
    n = M.A.dim
    s2 = M.S.compose(M.S)
    s2_on_c = LinearMap.from_function(
        2, 2, lambda y: M.C.embed.solve(s2.apply(M.C.embed.col(y)))
    )
    s2_on_b = LinearMap.from_function(
        2, 2, lambda x: M.B.embed.solve(s2.apply(M.B.embed.col(x)))
    )
    s_minus2_on_b = s2_on_b.inverse()
    expected = LinearMap.from_function(
        n, n, lambda k: kron_vec(s2_on_c.col(k // 2), s_minus2_on_b.col(k % 2), 2)
    )
    assert sig.mapping == expected


def test_modular_element_p2_weights(x_fun_14, p2):
    me = modular_element(x_fun_14)
    assert me.report.ok, str(me.report)
    # delta(i, j) = mu(j) / mu(i) on the arrows
    mu = {1: sc(1), 2: sc(4)}
    expected = {
        k: mu[a[1]] / mu[a[0]] for k, a in enumerate(p2.arrows)
    }
    expected = {k: v for k, v in expected.items() if v}
    assert me.delta_plus.element() == expected
    assert [str(expected[k]) for k in range(4)] == ["1", "4", "1/4", "1"]


def test_modular_element_trivial_for_invariant_weight(x_conv_uniform):
    me = modular_element(x_conv_uniform)
    assert me.report.ok
    one = x_conv_uniform.M.A.unit()
    assert me.delta_plus.element() == one
    assert me.delta_minus.element() == one


def test_modular_element_group_case(x_group):
    me = modular_element(x_group)
    assert me.report.ok
    assert me.delta_plus.element() == x_group.M.A.unit()  # delta_H = 1 for Z/2


def test_uniqueness_p2(x_fun_14):
    rep = uniqueness_check(x_fun_14)
    assert rep.ok, str(rep)


def test_uniqueness_group(x_group):
    rep = uniqueness_check(x_group)
    assert rep.ok


def test_out_of_family_integral_detected(x_fun_14):
    # the total integral built from a different unit weight is an integral
    # for another base weight, not a member of M(B) . phi
    M = x_fun_14.M
    phi_C = x_fun_14.phi_C.mapping
    other = functional_of_map({0: sc(1), 1: sc(1)}, phi_C)
    from qgroupoid.integration import translate_left

    span = Rref()
    for x in range(2):
        bx = M.B.embed.col(x)
        span.add(translate_left(M.A, bx, x_fun_14.phi.omega))
    assert not span.contains(other)


def test_local_projectivity(m_fun, m_group):
    out, rep = local_projectivity(m_fun)
    assert all(out.values()) and rep.ok
    out, rep = local_projectivity(m_group)
    assert all(out.values())


def test_dual_basis_fails_for_degenerate_action():
    # independent feasibility oracle: a rank-deficient action admits no
    # dual bases because every composite has the same kernel
    algebra = FiniteAlgebra.pointwise(["u", "v"])
    proj = LinearMap.from_rows([[1, 0], [0, 0]])  # not injective on the module
    span = Rref()
    comp = proj.compose(proj)
    v = {}
    for j in range(2):
        for i, s in comp.col(j).items():
            v[j * 2 + i] = s
    span.add(v)
    ident = {0: ONE, 3: ONE}
    assert not span.contains(ident)


def test_faithfulness_on_assembled_instances(x_fun_14, x_conv_uniform, x_tensor):
    for x in (x_fun_14, x_conv_uniform, x_tensor):
        rep = faithfulness_check(x)
        assert rep.ok, str(rep)


def test_zero_functional_not_faithful(m_fun):
    g = gram_map(m_fun.A, {})
    assert not g.is_bijective()


def test_non_full_integral_escapes_hypotheses():
    # on a two-component groupoid, a one-component fiber integral is
    # invariant but not full: the assembly gate reports exactly that
    labels, table = cyclic_group_table(2)
    g2 = disjoint_union(group_groupoid(labels, table), group_groupoid(labels, table))
    m = build_function_algebroid(g2)
    from qgroupoid.integration import check_partial_integral

    phi, psi = standard_integrals(
        "groupoid-functions", m, groupoid=g2, h={0: ONE}
    )
    assert check_partial_integral(m, phi, "left").ok
    w = BaseWeight(
        mu_B={0: sc(1), 1: sc(1)}, mu_C={0: sc(1), 1: sc(1)}
    )
    with pytest.raises(Rejected) as exc:
        assemble_measured(m, w, phi, psi)
    assert exc.value.eq in ("full", "integrals-faithful")


def test_dual_algebra_of_group_is_pointwise(x_group):
    da = dual_algebra(x_group)
    assert da.report.ok, str(da.report)
    hat = da.algebra
    assert hat.dim == 2
    e, g = {0: ONE}, {1: ONE}
    assert hat.mul(e, e) == e
    assert hat.mul(g, g) == g
    assert hat.mul(e, g) == {}
    assert hat.mul(g, e) == {}


def test_dual_algebra_of_p2_functions_is_matrix_algebra(x_fun_14, m_conv):
    da = dual_algebra(x_fun_14)
    assert da.report.ok, str(da.report)
    # the dual table coincides with the convolution algebra of the same
    # groupoid under the identity identification of bases
    assert da.algebra.table == m_conv.A.table
    assert da.algebra.dim == x_fun_14.M.A.dim  # dim A^ = dim A always


def test_convolution_operators(x_fun_14):
    rep = convolution_counit_identity(x_fun_14)
    assert rep.ok, str(rep)
    lam = convolution(x_fun_14, x_fun_14.phi, "lambda")
    rho = convolution(x_fun_14, x_fun_14.psi, "rho")
    assert lam.report.ok and rho.report.ok
    # operators of integrals commute (they live on opposite legs)
    assert lam.operator.compose(rho.operator) == rho.operator.compose(lam.operator)


def test_convolution_antipode_exchange(x_fun_14):
    # rho(upsilon) o S = S o lambda(upsilon o S)
    M = x_fun_14.M
    from qgroupoid.integration import factorize

    ups = x_fun_14.phi
    ups_s = {a: v for a in range(M.A.dim)
             for v in (ev(ups.omega, M.S.col(a)),) if v}
    fact_s, _ = factorize(M, x_fun_14.weight, ups_s)
    rho_u = convolution(x_fun_14, ups, "rho").operator
    lam_us = convolution(x_fun_14, fact_s, "lambda").operator
    assert rho_u.compose(M.S) == M.S.compose(lam_us)


def test_convolution_star_compatibility(x_fun_14):
    # rho(* o upsilon o *) = * o rho(upsilon) o *
    M = x_fun_14.M
    from qgroupoid.integration import factorize
    from qgroupoid.exact_linear import vec_conj

    ups = x_fun_14.phi
    star_ups = {}
    for a in range(M.A.dim):
        val = ev(ups.omega, M.A.star({a: ONE})).conj()
        if val:
            star_ups[a] = val
    fact, _ = factorize(M, x_fun_14.weight, star_ups)
    rho_star = convolution(x_fun_14, fact, "rho").operator
    rho = convolution(x_fun_14, ups, "rho").operator
    n = M.A.dim
    conj_rho = LinearMap.from_function(
        n, n, lambda j: vec_conj(M.A.star(rho.apply(vec_conj(M.A.star({j: ONE})))))
    )
    assert rho_star == conj_rho


def test_haar_rescaling_p2_uniform(m_fun, p2, weight_uniform):
    phi, psi = standard_integrals("groupoid-functions", m_fun, groupoid=p2)
    x = assemble_measured(m_fun, weight_uniform, phi, psi)
    h, rep = haar_analysis(x)
    assert rep.ok, str(rep)
    hs = {c: v for c in range(4) for v in (ev(h, m_fun.S.col(c)),) if v}
    assert hs == h


def test_haar_group_case(x_group):
    h, rep = haar_analysis(x_group)
    assert rep.ok
    # normalized: h(e) = 1, h(g) = 0
    assert h == {0: ONE}


def test_haar_gate_needs_unit():
    class FakeM:
        A = FiniteAlgebra([[{}]])

    class FakeX:
        M = FakeM()

    with pytest.raises(Rejected):
        haar_analysis(FakeX())


def test_uniqueness_phi_psi_subspace_identity(x_fun_14):
    # (A . Bphi(A)) . psi = (A . Cpsi(A)) . phi as subspaces of the dual
    M = x_fun_14.M
    A, n = M.A, M.A.dim
    from qgroupoid.integration import translate_left

    lhs, rhs = Rref(), Rref()
    for a in range(n):
        for b in range(n):
            u = A.mul({a: ONE}, M.B.embed.apply(x_fun_14.phi.factor_Bl.col(b)))
            lhs.add(translate_left(A, u, x_fun_14.psi.omega))
            v = A.mul({a: ONE}, M.C.embed.apply(x_fun_14.psi.factor_Cl.col(b)))
            rhs.add(translate_left(A, v, x_fun_14.phi.omega))
    assert lhs.rank == rhs.rank
    assert all(lhs.contains(r) for r in rhs.basis())


def test_convolution_base_translation_laws(x_fun_14):
    # translating the functional by base elements moves them into the
    # operator's argument or across it through the anti-isomorphisms
    M = x_fun_14.M
    A, n = M.A, M.A.dim
    from qgroupoid.integration import factorize, translate_left, translate_right

    ups = x_fun_14.phi
    rho_u = convolution(x_fun_14, ups, "rho").operator
    lam_u = convolution(x_fun_14, ups, "lambda").operator

    def op_of(f, kind):
        fact, _ = factorize(M, x_fun_14.weight, f)
        return convolution(x_fun_14, fact, kind).operator

    for k in range(2):
        bx, sbx = M.B.embed.col(k), M.emb_SB().col(k)
        cy, scy = M.C.embed.col(k), M.emb_SC().col(k)
        r1 = op_of(translate_left(A, bx, ups.omega), "rho")
        r2 = op_of(translate_right(A, ups.omega, bx), "rho")
        r3 = op_of(translate_left(A, sbx, ups.omega), "rho")
        r4 = op_of(translate_right(A, ups.omega, cy), "rho")
        for b in range(n):
            assert r1.col(b) == rho_u.apply(A.mul(bx, {b: ONE}))
            assert r2.col(b) == rho_u.apply(A.mul({b: ONE}, bx))
            assert r3.col(b) == A.mul(rho_u.col(b), bx)
            assert r4.col(b) == A.mul(scy, rho_u.col(b))
        l1 = op_of(translate_left(A, cy, ups.omega), "lambda")
        l2 = op_of(translate_right(A, ups.omega, cy), "lambda")
        l3 = op_of(translate_left(A, bx, ups.omega), "lambda")
        l4 = op_of(translate_right(A, ups.omega, scy), "lambda")
        for b in range(n):
            assert l1.col(b) == lam_u.apply(A.mul({b: ONE}, cy))
            assert l2.col(b) == lam_u.apply(A.mul(cy, {b: ONE}))
            assert l3.col(b) == A.mul(lam_u.col(b), sbx)
            assert l4.col(b) == A.mul(cy, lam_u.col(b))
