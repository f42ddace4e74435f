import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tblim.bethe import (
    AnsatzVariant,
    SolverConfig,
    bethe_eigenvalue,
    bethe_residuals,
    bethe_slots,
    bethe_state,
    canonicalize_roots,
    check_dynamical_relations,
    check_offshell_action,
    check_reduction_formula,
    check_T_decomposition,
    check_vacuum_action,
    delta_fn,
    dyn_B,
    dyn_D,
    f_fn,
    g_fn,
    solve_bethe,
)
from tblim.core_model import ModelParams, Parity, trig_c, trig_s
from tblim.errors import DomainError, PoleError
from tblim.operators import projector_time
from tblim.spectral import joint_spectrum


def mx(a):
    return float(np.max(np.abs(a))) if np.size(a) else 0.0


def make(n, K, L, parity):
    return ModelParams(n=n, K=K, L=L, parity=parity)


class TestScalars:
    def test_delta_zeros(self):
        p = make(6, 2, 3, Parity.MINUS)
        assert abs(delta_fn(p, p.n - p.L + p.K + 0.5)) < 1e-15
        assert abs(delta_fn(p, p.n - p.L - p.K - 0.5)) < 1e-15

    def test_delta_at_origin(self):
        p = make(6, 2, 3, Parity.MINUS)
        want = trig_c(p, p.L - p.K - 0.5) * trig_c(p, p.L + p.K + 0.5)
        assert delta_fn(p, 0.0) == pytest.approx(want, abs=1e-16)

    @settings(deadline=None, max_examples=40)
    @given(re=st.floats(0.2, 5.0), im=st.floats(-0.7, 0.7), v=st.floats(0.3, 4.0))
    def test_f_even_in_second_argument(self, re, im, v):
        p = make(6, 2, 3, Parity.MINUS)
        u = complex(re, im)
        if abs(trig_s(p, u - v)) < 1e-3 or abs(trig_s(p, u + v)) < 1e-3:
            return
        assert f_fn(p, u, v) == pytest.approx(f_fn(p, u, -v), rel=1e-12)

    def test_f_vanishes_at_shifted_diagonal(self):
        p = make(8, 3, 4, Parity.MINUS)
        for u in (0.7, 1.3 + 0.2j, 2.9 - 0.4j):
            assert abs(f_fn(p, u, u - 1)) < 1e-14

    def test_f_pole_on_diagonal(self):
        p = make(8, 3, 4, Parity.MINUS)
        with pytest.raises(PoleError):
            f_fn(p, 1.1, 1.1)

    def test_g_matches_independent_coding(self):
        p = make(6, 2, 3, Parity.MINUS)
        u, v, m = 0.3 + 0.1j, 1.2, 4
        s = lambda x: np.sin(np.pi * x / (2 * p.n))
        want = s(1) * s(2 * v - 1) * s(2 * m + v - u) / (s(2 * m) * s(2 * u) * s(u - v))
        assert g_fn(p, u, v, m) == pytest.approx(want, rel=1e-14)


class TestDynamicalOperators:
    def test_creation_operator_tridiagonal(self):
        p = make(7, 3, 4, Parity.MINUS)
        b = dyn_B(p, 0.3 + 0.4j, -4).entries
        assert mx(np.triu(b, 2)) < 1e-13
        assert mx(np.tril(b, -2)) < 1e-13

    def test_zero_dynamical_parameter_rejected(self):
        p = make(6, 2, 3, Parity.PLUS)
        with pytest.raises(PoleError):
            dyn_D(p, 0.3, 0)

    def test_degenerate_slot_rejected(self):
        p = make(6, 2, 3, Parity.MINUS)
        with pytest.raises(PoleError):
            dyn_B(p, 0.3, -6)  # sin(pi m / n) = 0

    def test_window_edge_matrix_element_vanishes(self):
        p = make(8, 3, 4, Parity.MINUS)
        b = dyn_B(p, 0.77 + 0.3j, -p.L - 1).entries
        # row of position L+1, column of position L
        assert abs(b[p.row_of(p.L + 1), p.row_of(p.L)]) < 1e-13

    @pytest.mark.parametrize(
        "n,K,L,parity,u,v,m",
        [
            (6, 2, 3, Parity.MINUS, 0.37, 1.21, 3),
            (6, 2, 3, Parity.PLUS, 0.2 + 0.3j, 0.9 - 0.1j, -4),
            (8, 3, 4, Parity.MINUS, 0.61 - 0.22j, 1.47 + 0.31j, 3),
        ],
    )
    def test_exchange_relations(self, n, K, L, parity, u, v, m):
        p = make(n, K, L, parity)
        r_bb, r_db = check_dynamical_relations(p, u, v, m)
        assert r_bb < 1e-10
        assert r_db < 1e-9

    def test_exchange_symmetric_in_swap(self):
        p = make(6, 2, 3, Parity.MINUS)
        r1, _ = check_dynamical_relations(p, 0.37, 1.21, 3)
        r2, _ = check_dynamical_relations(p, 1.21, 0.37, 3)
        assert r1 == pytest.approx(r2, abs=1e-12)


class TestHeunDecomposition:
    @pytest.mark.parametrize("parity", [Parity.PLUS, Parity.MINUS])
    def test_residuals_small(self, parity):
        p = make(8, 3, 4, parity)
        r1, r2 = check_T_decomposition(p, 0.618)
        assert r1 < 1e-10 and r2 < 1e-10

    def test_residual_independent_of_u(self):
        p = make(8, 3, 4, Parity.MINUS)
        rs = [max(check_T_decomposition(p, u)) for u in (0.3, 0.71 + 0.2j, 1.9, 2.4 - 0.5j, 0.55j + 1.1)]
        assert max(rs) < 1e-9

    def test_pole_at_zero_spectral_parameter(self):
        p = make(8, 3, 4, Parity.MINUS)
        with pytest.raises(PoleError):
            check_T_decomposition(p, 0.0)


class TestVacuumAction:
    def test_minus_m_one_special_case(self):
        # at m = 1 the creation coefficient vanishes identically
        p = make(6, 2, 3, Parity.MINUS)
        assert trig_s(p, 0) == 0.0
        assert check_vacuum_action(p, 0.41, 1) < 1e-11

    def test_plus_generic(self):
        assert check_vacuum_action(make(6, 2, 3, Parity.PLUS), 0.41, 3) < 1e-11

    def test_minus_negative_parameter(self):
        assert check_vacuum_action(make(6, 2, 3, Parity.MINUS), 0.41, -5) < 1e-11

    def test_pole_rejected(self):
        with pytest.raises(PoleError):
            check_vacuum_action(make(6, 2, 3, Parity.MINUS), 0.41, -1)


class TestBetheStates:
    def test_slot_sequences(self):
        assert bethe_slots(AnsatzVariant.MINUS_FIRST, 4) == [4, 3, 2]
        assert bethe_slots(AnsatzVariant.MINUS_SECOND, 4) == [-5, -6, -7]
        assert bethe_slots(AnsatzVariant.PLUS, 3) == [-4, -5, -6]

    def test_empty_product_is_vacuum(self):
        p = make(6, 2, 1, Parity.MINUS)
        v = bethe_state(p, AnsatzVariant.MINUS_FIRST, np.zeros(0))
        want = np.zeros(p.dim)
        want[0] = 1.0
        assert mx(v.coeffs - want) == 0.0

    def test_wrong_root_count(self):
        p = make(6, 2, 3, Parity.MINUS)
        with pytest.raises(DomainError):
            bethe_state(p, AnsatzVariant.MINUS_FIRST, np.array([0.5]))

    @pytest.mark.parametrize("variant,n,K,L", [
        (AnsatzVariant.MINUS_FIRST, 8, 3, 4),
        (AnsatzVariant.MINUS_SECOND, 8, 3, 4),
        (AnsatzVariant.PLUS, 8, 3, 3),
    ])
    def test_window_containment(self, variant, n, K, L):
        p = make(n, K, L, variant.parity)
        rng = np.random.default_rng(5)
        proj = projector_time(p).entries
        for _ in range(4):
            roots = rng.normal(0.9, 0.4, variant.root_count(L)) + 1j * rng.normal(0, 0.3, variant.root_count(L))
            v = bethe_state(p, variant, roots).coeffs
            assert np.linalg.norm(proj @ v - v) < 1e-11 * max(1.0, np.linalg.norm(v))

    def test_permutation_invariance(self):
        p = make(8, 3, 4, Parity.MINUS)
        roots = np.array([0.8 + 0.2j, 1.7 - 0.1j, 2.6 + 0.3j])
        v1 = bethe_state(p, AnsatzVariant.MINUS_FIRST, roots).coeffs
        v2 = bethe_state(p, AnsatzVariant.MINUS_FIRST, roots[[1, 0, 2]]).coeffs
        assert mx(v1 - v2) < 1e-10 * np.linalg.norm(v1)

    def test_offshell_expansion(self):
        p = make(8, 3, 4, Parity.MINUS)
        rng = np.random.default_rng(7)
        roots = rng.normal(0.8, 0.4, 3) + 1j * rng.normal(0, 0.3, 3)
        assert check_offshell_action(p, 0.41 + 0.17j, roots) < 1e-9


class TestReductionFormula:
    @pytest.mark.parametrize("L", [2, 3])
    def test_generic_roots(self, L):
        p = make(8, 3, L, Parity.MINUS)
        rng = np.random.default_rng(11)
        ys = rng.normal(0.9, 0.5, L) + 1j * rng.normal(0, 0.25, L)
        assert check_reduction_formula(p, ys) < 1e-9

    def test_degenerate_final_slot_cleared_form(self):
        # n divides 2L: the closing slot and the prefactor share the same zero
        p = make(8, 3, 4, Parity.MINUS)
        rng = np.random.default_rng(13)
        ys = rng.normal(0.9, 0.5, 4) + 1j * rng.normal(0, 0.25, 4)
        assert check_reduction_formula(p, ys) < 1e-9

    def test_rotation_of_entries(self):
        p = make(8, 3, 3, Parity.MINUS)
        ys = np.array([0.9 + 0.2j, 1.6 - 0.3j, 2.4 + 0.1j])
        assert check_reduction_formula(p, ys, u_slot_last=False) < 1e-9

    def test_coincident_roots_rejected(self):
        p = make(8, 3, 3, Parity.MINUS)
        with pytest.raises(PoleError):
            check_reduction_formula(p, np.array([0.9, 0.9, 1.7]))


class TestEquationsAndEigenvalue:
    def test_empty_system_minus_first(self):
        p = make(6, 2, 1, Parity.MINUS)
        assert bethe_residuals(p, AnsatzVariant.MINUS_FIRST, np.zeros(0)).size == 0

    def test_random_roots_give_order_one_defects(self):
        p = make(6, 2, 3, Parity.MINUS)
        res = bethe_residuals(p, AnsatzVariant.MINUS_FIRST, np.array([0.713, 2.394]))
        assert np.max(np.abs(res)) > 1e-4

    @pytest.mark.parametrize("variant,L,expected", [
        (AnsatzVariant.MINUS_FIRST, 1, None),
        (AnsatzVariant.MINUS_SECOND, 1, None),
        (AnsatzVariant.PLUS, 0, None),
    ])
    def test_rootless_eigenvalue_matches_one_by_one_block(self, variant, L, expected):
        n, K = 6, 2
        p = make(n, K, L, variant.parity)
        want = -2 * trig_c(p, 2 * K + 1) * (trig_c(p, 2) if variant.parity is Parity.MINUS else 1.0)
        for u in (0.31 + 0.17j, 0.9 - 0.4j, 1.7 + 0.05j):
            t = bethe_eigenvalue(p, variant, np.zeros(0), u)
            assert abs(t - want) < 1e-12

    def test_pole_in_spectral_parameter(self):
        p = make(6, 2, 3, Parity.MINUS)
        with pytest.raises(PoleError):
            bethe_eigenvalue(p, AnsatzVariant.MINUS_FIRST, np.array([0.5, 1.5]), 0.0)


class TestCanonicalization:
    @settings(deadline=None, max_examples=60)
    @given(
        re=st.floats(-30, 30),
        im=st.floats(-5, 5),
    )
    def test_fold_into_strip_and_idempotent(self, re, im):
        p = make(6, 2, 3, Parity.MINUS)
        out = canonicalize_roots(p, np.array([complex(re, im)]))
        z = out[0]
        assert -1e-9 <= z.real <= p.n + 1e-9
        again = canonicalize_roots(p, out)
        assert mx(again - out) < 1e-12

    def test_equivalent_roots_collapse(self):
        p = make(6, 2, 3, Parity.MINUS)
        x = 1.3 + 0.4j
        images = [x, -x, x + 2 * p.n, -(x - 2 * p.n)]
        canon = [canonicalize_roots(p, np.array([z]))[0] for z in images]
        assert max(abs(c - canon[0]) for c in canon) < 1e-12

    def test_boundary_line_sign_choice(self):
        p = make(6, 2, 3, Parity.MINUS)
        a = canonicalize_roots(p, np.array([6.0 - 2.5j]))[0]
        b = canonicalize_roots(p, np.array([6.0 + 2.5j]))[0]
        assert a == b
        assert a.imag >= 0

    def test_sorted_output(self):
        p = make(6, 2, 3, Parity.MINUS)
        out = canonicalize_roots(p, np.array([2.5 + 0.1j, 0.7 - 0.2j, 0.7 + 0.1j]))
        keys = [(z.real, z.imag) for z in out]
        assert keys == sorted(keys)


class TestSolver:
    def test_minus_first_full_match(self):
        p = make(6, 2, 3, Parity.MINUS)
        res = solve_bethe(p, AnsatzVariant.MINUS_FIRST)
        assert res.complete and len(res.root_sets) == 3
        for rs in res.root_sets:
            assert rs.residual < 1e-9
            assert rs.u_spread < 1e-8
            assert abs(rs.eigenvalue.real - rs.t_spectral) < 1e-6

    def test_minus_second_same_spectrum(self):
        p = make(6, 2, 3, Parity.MINUS)
        t1 = sorted(rs.t_spectral for rs in solve_bethe(p, AnsatzVariant.MINUS_FIRST).root_sets)
        t2 = sorted(rs.t_spectral for rs in solve_bethe(p, AnsatzVariant.MINUS_SECOND).root_sets)
        assert np.allclose(t1, t2, atol=1e-6)

    def test_plus_ansatz(self):
        p = make(6, 2, 2, Parity.PLUS)
        res = solve_bethe(p, AnsatzVariant.PLUS)
        assert res.complete and len(res.root_sets) == 3

    def test_degenerate_slot_instance(self):
        # creation slots include a pole of the unscaled operator; equations
        # and eigenvalue formulas still resolve the full block
        p = make(4, 2, 2, Parity.PLUS)
        res = solve_bethe(p, AnsatzVariant.PLUS)
        assert res.complete and len(res.root_sets) == 3

    def test_rootless_level(self):
        p = make(6, 2, 1, Parity.MINUS)
        res = solve_bethe(p, AnsatzVariant.MINUS_FIRST)
        assert res.complete and len(res.root_sets) == 1
        assert res.root_sets[0].roots.size == 0

    def test_reproducible(self):
        p = make(6, 3, 3, Parity.MINUS)
        cfg = SolverConfig(rng_seed=42)
        a = solve_bethe(p, AnsatzVariant.MINUS_SECOND, cfg)
        b = solve_bethe(p, AnsatzVariant.MINUS_SECOND, cfg)
        for x, y in zip(a.root_sets, b.root_sets):
            assert mx(x.roots - y.roots) == 0.0

    def test_parity_mismatch_rejected(self):
        p = make(6, 2, 3, Parity.PLUS)
        with pytest.raises(DomainError):
            solve_bethe(p, AnsatzVariant.MINUS_FIRST)

    def test_solutions_verify_as_eigenvectors(self):
        from tblim.operators import heun_tb

        p = make(6, 2, 3, Parity.MINUS)
        t = heun_tb(p).to_dense().entries
        for rs in solve_bethe(p, AnsatzVariant.MINUS_FIRST).root_sets:
            v = bethe_state(p, AnsatzVariant.MINUS_FIRST, rs.roots).coeffs
            v = v / np.linalg.norm(v)
            assert np.linalg.norm(t @ v - rs.eigenvalue.real * v) < 1e-8
