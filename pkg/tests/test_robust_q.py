import numpy as np
import pytest

from aarlcp.lcp import NominalLcp, lcp_residuals
from aarlcp.mip import solve_mip_feasibility
from aarlcp.robust_q import (AffineSolutionQ, SizeLimitError, UncertainLcpQ,
                             build_mip, check_char_system, default_big_m,
                             sample_violation_q, solve_enumeration,
                             solve_mip_q, solve_psd, uniqueness_check_psd,
                             verify_affine_q)
from conftest import random_psd_matrix

# recurring instances: a 2x2 with multiple robust rules, and a positive
# definite one with none
MULTI = UncertainLcpQ(m=np.array([[4.0, 10.0], [1.0, 2.0]]),
                      qbar=np.array([-100.0, -22.0]),
                      ubar=np.array([1.0, 1.0]), h=0)
NONE_PD = UncertainLcpQ(m=np.array([[1.0, 0.5], [0.5, 1.0]]),
                        qbar=np.array([-5.0, -3.0]),
                        ubar=np.array([1.0, 1.0]), h=0)

SOL_1 = AffineSolutionQ(d=np.array([[-0.25, 0.0], [0.0, 0.0]]),
                        r=np.array([25.0, 0.0]))
SOL_2 = AffineSolutionQ(d=np.array([[0.0, 0.0], [0.0, -0.5]]),
                        r=np.array([0.0, 11.0]))


def _random_instance(rng, n, h):
    return UncertainLcpQ(
        m=rng.uniform(-3.0, 3.0, (n, n)).round(2),
        qbar=rng.uniform(-5.0, 3.0, n).round(2),
        ubar=rng.uniform(0.1, 1.0, n).round(2),
        h=h,
    )


def test_instance_partitions_coordinates():
    inst = UncertainLcpQ(m=np.eye(3), qbar=np.zeros(3),
                         ubar=np.array([1.0, 0.0, 0.5]), h=1)
    assert np.array_equal(inst.uncertain_set(), [0, 2])
    assert np.array_equal(inst.certain_set(), [1])


def test_instance_rejects_bad_data():
    with pytest.raises(ValueError):
        UncertainLcpQ(m=np.eye(2), qbar=np.zeros(2),
                      ubar=np.array([-0.1, 1.0]), h=0)
    with pytest.raises(ValueError):
        UncertainLcpQ(m=np.eye(2), qbar=np.zeros(3), ubar=np.ones(2), h=0)
    with pytest.raises(ValueError):
        UncertainLcpQ(m=np.eye(2), qbar=np.zeros(2), ubar=np.ones(2), h=3)


def test_verify_accepts_known_solution():
    report = verify_affine_q(MULTI, SOL_1)
    assert report.overall
    assert all(c.passed for c in report.checks)


def test_verify_rejects_constant_rule_with_wrong_slope():
    # dropping the u-dependence leaves the active row varying with u
    bad = AffineSolutionQ(d=np.zeros((2, 2)), r=np.array([25.0, 0.0]))
    report = verify_affine_q(MULTI, bad)
    assert not report.overall
    failed = {c.condition for c in report.checks if not c.passed}
    assert "active-rows-vanish" in failed


def test_verify_trivial_zero_rule():
    inst = UncertainLcpQ(m=np.array([[3.0, -1.0], [2.0, 5.0]]),
                         qbar=np.array([2.0, 1.5]),
                         ubar=np.array([1.0, 1.0]), h=0)
    zero = AffineSolutionQ(d=np.zeros((2, 2)), r=np.zeros(2))
    assert verify_affine_q(inst, zero).overall


def test_verify_structural_errors():
    with pytest.raises(ValueError):
        verify_affine_q(MULTI, AffineSolutionQ(d=np.zeros((3, 3)),
                                               r=np.zeros(3)))
    h1 = UncertainLcpQ(m=MULTI.m, qbar=MULTI.qbar, ubar=MULTI.ubar, h=1)
    with pytest.raises(ValueError):
        # first row must be zero when it is a here-and-now coordinate
        verify_affine_q(h1, SOL_1)


def test_char_system_examples():
    assert check_char_system(MULTI, SOL_1)
    bumped = AffineSolutionQ(d=SOL_1.d, r=np.array([26.0, 0.0]))
    assert not check_char_system(MULTI, bumped)
    zero = AffineSolutionQ(d=np.zeros((2, 2)), r=np.zeros(2))
    assert check_char_system(MULTI, zero)  # empty support, vacuous


def test_enumeration_finds_both_listed_rules():
    sols = solve_enumeration(MULTI)
    hits = 0
    for sol in sols:
        for ref in (SOL_1, SOL_2):
            if (np.max(np.abs(sol.d - ref.d)) <= 1e-9
                    and np.max(np.abs(sol.r - ref.r)) <= 1e-9):
                hits += 1
    assert hits == 2
    for sol in sols:
        assert verify_affine_q(MULTI, sol).overall


def test_enumeration_empty_on_pd_nonexistence():
    assert solve_enumeration(NONE_PD) == []


def test_enumeration_contains_trivial_rule_when_q_dominates():
    inst = UncertainLcpQ(m=np.array([[0.0, 7.0], [-3.0, 2.0]]),
                         qbar=np.array([1.0, 1.0]),
                         ubar=np.array([1.0, 1.0]), h=0)
    sols = solve_enumeration(inst)
    assert any(np.all(s.r == 0.0) and np.all(s.d == 0.0) for s in sols)


def test_enumeration_requires_full_uncertainty():
    inst = UncertainLcpQ(m=np.eye(2), qbar=np.zeros(2),
                         ubar=np.array([1.0, 0.0]), h=0)
    with pytest.raises(ValueError):
        solve_enumeration(inst)


def test_enumeration_size_cap():
    n = 22
    inst = UncertainLcpQ(m=np.eye(n), qbar=np.zeros(n), ubar=np.ones(n), h=0)
    with pytest.raises(SizeLimitError):
        solve_enumeration(inst)


def test_default_big_m_formula():
    expected = 100.0 * (1.0 + 100.0 + 1.0) * (1.0 + 10.0)
    assert default_big_m(MULTI) == pytest.approx(expected)


def test_build_mip_row_count_hand_expanded():
    """n=1, h=0, one uncertain coordinate. By hand: one row tying r to
    its binary, two rows bracketing M r + q, two rows bracketing the
    rule row M D + I, two envelope rows on z, one row for the worst-case
    z sum, two envelope rows on M z + q, one worst-case row for it:
    11 rows over the 5 columns (x, r, d, a, c)."""
    inst = UncertainLcpQ(m=np.array([[2.0]]), qbar=np.array([-3.0]),
                         ubar=np.array([0.5]), h=0)
    prob, layout = build_mip(inst, 100.0)
    assert prob.lp.lhs.shape == (11, 5)
    assert np.array_equal(prob.binaries, layout.x)


def test_build_mip_pins_here_and_now_rows():
    inst = UncertainLcpQ(m=np.array([[2.0, 0.3], [0.1, 1.5]]),
                         qbar=np.array([1.0, 2.0]),
                         ubar=np.array([0.4, 0.4]), h=2)
    prob, layout = build_mip(inst, 50.0)
    for idx in layout.d.ravel():
        assert prob.lp.lower[idx] == 0.0
        assert prob.lp.upper[idx] == 0.0
    out = solve_mip_feasibility(prob)
    assert out.status == "feasible"  # constant r = 0 is robust here


def test_mip_solution_on_multi_instance_matches_enumeration():
    out = solve_mip_q(MULTI, big_m=1000.0)
    assert out.status == "solution"
    assert out.verification.overall
    refs = solve_enumeration(MULTI)
    close = [np.max(np.abs(out.solution.d - s.d))
             + np.max(np.abs(out.solution.r - s.r)) for s in refs]
    assert min(close) <= 1e-6


def test_mip_nonexistence_with_exact_fallback():
    out = solve_mip_q(NONE_PD, big_m=1000.0, max_doublings=10)
    assert out.status == "no-solution"
    assert out.certificate == "exact"
    assert out.fallback_used


def test_mip_nonexistence_big_m_caveat_without_fallback():
    # a certain coordinate blocks the enumeration fallback; the verdict
    # keeps the bounded big-M caveat
    inst = UncertainLcpQ(m=np.array([[0.0, -1.0], [-1.0, 0.0]]),
                         qbar=np.array([-1.0, -1.0]),
                         ubar=np.array([1.0, 0.0]), h=0)
    out = solve_mip_q(inst, big_m=10.0, max_doublings=3)
    assert out.status == "no-solution"
    assert out.certificate == "big-M bounded"
    assert out.doublings == 3


def test_mip_agrees_with_enumeration_on_small_random_instances():
    rng = np.random.default_rng(20)
    for trial in range(20):
        inst = _random_instance(rng, 3, 0)
        sols = solve_enumeration(inst)
        out = solve_mip_q(inst)
        assert (out.status == "solution") == bool(sols), f"trial {trial}"
        if out.status == "solution":
            assert verify_affine_q(inst, out.solution).overall


def test_psd_pathway_closed_form_identity_case():
    inst = UncertainLcpQ(m=np.eye(2), qbar=np.array([-5.0, -3.0]),
                         ubar=np.array([1.0, 1.0]), h=0)
    out = solve_psd(inst)
    assert out.status == "solution"
    assert out.solution.r == pytest.approx([5.0, 3.0], abs=1e-9)
    assert out.solution.d == pytest.approx(-np.eye(2), abs=1e-9)
    assert out.verification.overall


def test_psd_pathway_proves_nonexistence():
    out = solve_psd(NONE_PD)
    assert out.status == "no-solution"
    assert solve_enumeration(NONE_PD) == []


def test_psd_pathway_rejects_indefinite():
    with pytest.raises(ValueError):
        solve_psd(MULTI)


def test_uniqueness_verdicts():
    assert uniqueness_check_psd(NONE_PD) == "unique-if-exists"
    assert uniqueness_check_psd(MULTI) == "not-applicable"
    flat = UncertainLcpQ(m=np.zeros((1, 1)), qbar=np.zeros(1),
                         ubar=np.ones(1), h=0)
    assert uniqueness_check_psd(flat) == "multiple-nominal-no-aar"


def test_psd_enumeration_returns_at_most_one_with_inverse_block():
    # positive definite data: the enumeration list has at most one rule
    # and its D is the negated block inverse on the support
    rng = np.random.default_rng(21)
    found = 0
    for _ in range(15):
        n = int(rng.integers(2, 6))
        inst = UncertainLcpQ(m=random_psd_matrix(rng, n),
                             qbar=rng.uniform(-4.0, 2.0, n).round(2),
                             ubar=rng.uniform(0.1, 0.8, n).round(2), h=0)
        sols = solve_enumeration(inst)
        assert len(sols) <= 1
        if sols:
            found += 1
            sol = sols[0]
            k = sol.support()
            inv = np.linalg.inv(inst.m[np.ix_(k, k)])
            assert sol.d[np.ix_(k, k)] == pytest.approx(-inv, abs=1e-8)
            mask = np.ones((n, n), dtype=bool)
            mask[np.ix_(k, k)] = False
            assert np.all(sol.d[mask] == 0.0)
    assert found >= 3


def test_solutions_solve_nominal_problem_and_zero_inactive_rows():
    rng = np.random.default_rng(22)
    for _ in range(15):
        inst = _random_instance(rng, int(rng.integers(2, 5)), 0)
        for sol in solve_enumeration(inst):
            zneg, wneg, comp = lcp_residuals(NominalLcp(inst.m, inst.qbar),
                                             sol.r)
            assert zneg >= -1e-9 and wneg >= -1e-8 and comp <= 1e-7
            for i in np.flatnonzero(sol.r <= 1e-7):
                assert np.all(sol.d[i] == 0.0)


def test_sampling_never_beats_analytic_verification():
    rng = np.random.default_rng(23)
    for _ in range(10):
        inst = _random_instance(rng, int(rng.integers(2, 5)), 0)
        for sol in solve_enumeration(inst):
            assert sample_violation_q(inst, sol, count=1000) <= 1e-7


def test_here_and_now_split_respected():
    rng = np.random.default_rng(24)
    for _ in range(10):
        inst = _random_instance(rng, 4, 1)
        for sol in solve_enumeration(inst):
            assert np.all(sol.d[0] == 0.0)  # first row is here-and-now
            assert verify_affine_q(inst, sol).overall
