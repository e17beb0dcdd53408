"""Scenario runners: verdicts on happy paths, failed reports on bad input."""

import math

import numpy as np
import pytest

from ellselberg import (
    BalancingMode,
    ConfigurationError,
    Nomes,
    ParameterSet,
    SCENARIO_NAMES,
    coefficient_c,
    make_continued,
    make_pinched,
    run_suite,
    sample_da_parameters,
    scenario_dixon_anderson,
    scenario_eval_formula,
    scenario_nabla,
    scenario_pinch,
    scenario_qde,
    scenario_recurrence,
    scenario_recurrence_telescope,
)
from ellselberg.report import to_json

NM = Nomes(0.05, 0.12)
A5 = [0.63, 0.58 * np.exp(0.7j), -0.61, 0.64 * np.exp(-1.1j), 0.55]


def pq_set(n=1, t=0.45):
    return ParameterSet.solved(n, t, A5, NM, BalancingMode.PQ)


def one_set(n=1):
    a5 = [0.66, 0.63 * np.exp(0.9j), -0.645, 0.67 * np.exp(-0.5j), 0.62]
    return ParameterSet.solved(n, 0.5, a5, NM, BalancingMode.ONE)


class TestEvalFormula:
    def test_inside_disk(self):
        rep = scenario_eval_formula(1, pq_set(), NM, 1e-8)
        assert rep.passed
        assert rep.scenario == "eval_formula"
        assert rep.rel_err <= 1e-8
        assert rep.runtime_ms is None

    def test_continued_contour_when_solved_entry_leaves_disk(self):
        nm = Nomes(0.05, 0.07)
        ps = ParameterSet.solved(
            1, 0.45, [0.3, 0.4, 0.5, -0.2, 0.25], nm, BalancingMode.PQ
        )
        assert abs(ps.a[5]) > 1
        rep = scenario_eval_formula(1, ps, nm, 1e-8)
        assert rep.passed
        assert "continued contour" in rep.detail

    def test_outside_disk_rejected_at_n2(self):
        ps = pq_set(2, t=0.3)
        bad = ps.with_entry(1, 1.4)
        rep = scenario_eval_formula(2, bad, NM, 1e-6)
        assert not rep.passed
        assert math.isinf(rep.rel_err)
        assert "inside the unit circle" in rep.detail

    def test_timing_flag_fills_runtime(self):
        rep = scenario_eval_formula(1, pq_set(), NM, 1e-8, timing=True)
        assert isinstance(rep.runtime_ms, int)


class TestQde:
    def test_pq_shift(self):
        ps = pq_set()
        rep = scenario_qde(1, 1, ps, NM, 1e-7)
        assert rep.passed
        assert rep.k == 1
        assert rep.balancing == "pq"

    def test_p_shift_variant(self):
        ps = ParameterSet.solved(1, 0.45, A5, NM, BalancingMode.P)
        rep = scenario_qde(1, 2, ps, NM, 1e-7)
        assert rep.passed
        assert rep.balancing == "p"

    def test_shift_index_out_of_range(self):
        rep = scenario_qde(1, 6, pq_set(), NM, 1e-7)
        assert not rep.passed
        assert "shift index" in rep.detail

    def test_solved_entry_outside_window(self):
        # PQ form needs |a_6| < |q|; this set has |a_6| ~ 0.2
        ps = ParameterSet.solved(1, 0.45, [0.3, 0.4, 0.5, 0.55, 0.6], NM, BalancingMode.PQ)
        assert abs(ps.a[5]) >= 0.95 * abs(NM.q)
        rep = scenario_qde(1, 1, ps, NM, 1e-7)
        assert not rep.passed
        assert "SampleRejectionError" in rep.detail


class TestRecurrence:
    def test_single_step(self):
        rep = scenario_recurrence(1, 1, one_set(), NM, 1e-7)
        assert rep.passed
        assert rep.r == 1

    def test_telescoped_ratio_equals_coefficient_product(self):
        ps = one_set()
        rep = scenario_recurrence_telescope(1, ps, NM, 1e-7)
        assert rep.passed
        prod = 1.0 + 0.0j
        for r in range(1, ps.n + 1):
            prod *= coefficient_c(r, ps, NM)
        assert abs(rep.rhs - prod) <= 1e-12 * abs(prod)


class TestNabla:
    def test_vanishing(self):
        rep = scenario_nabla(1, 1, 1, one_set(), NM, 1e-7)
        assert rep.passed
        assert rep.rhs == 0
        assert rep.detail.startswith("reference=")


class TestDixonAnderson:
    def test_identity(self):
        a = sample_da_parameters(1, NM, seed=4, count=1)[0]
        rep = scenario_dixon_anderson(1, a, NM, 1e-8)
        assert rep.passed
        assert rep.constraint_exponent == 1
        assert rep.t is None

    def test_wrong_length(self):
        rep = scenario_dixon_anderson(1, (0.5, 0.4), NM, 1e-8)
        assert not rep.passed
        assert "need 2n+4" in rep.detail

    def test_violated_constraint(self):
        a = list(sample_da_parameters(1, NM, seed=4, count=1)[0])
        a[0] *= 1.01
        rep = scenario_dixon_anderson(1, a, NM, 1e-8)
        assert not rep.passed
        assert "violates" in rep.detail


class TestPinch:
    def test_limit(self):
        ps = make_pinched(pq_set(), NM)
        rep = scenario_pinch(ps, NM, 1e-6, check="limit")
        assert rep.passed

    def test_integral(self):
        ps = make_pinched(pq_set(), NM)
        rep = scenario_pinch(ps, NM, 1e-6, check="integral")
        assert rep.passed

    def test_continued(self):
        ps = make_continued(pq_set(), NM)
        rep = scenario_pinch(ps, NM, 1e-6, check="continued")
        assert rep.passed
        assert abs(ps.a[0]) == pytest.approx(1.05)

    def test_unknown_check(self):
        ps = make_pinched(pq_set(), NM)
        rep = scenario_pinch(ps, NM, 1e-6, check="sideways")
        assert not rep.passed
        assert "unknown pinch check" in rep.detail

    def test_integral_check_rejected_at_n2(self):
        ps = make_pinched(pq_set(2, t=0.45), NM)
        rep = scenario_pinch(ps, NM, 1e-6, check="integral")
        assert not rep.passed
        assert "n = 1 only" in rep.detail


class TestRunSuite:
    def test_unknown_scenario_name(self):
        with pytest.raises(ConfigurationError, match="unknown scenario"):
            run_suite(scenario="evaluation")

    def test_single_scenario_filter(self):
        reports = run_suite(scenario="dixon_anderson", count=1)
        assert reports
        assert all(r.scenario == "dixon_anderson" for r in reports)
        assert sorted({r.n for r in reports}) == [1, 2]
        assert all(r.passed for r in reports)

    def test_reports_sorted(self):
        reports = run_suite(scenario="qde", count=1)
        keys = [
            (r.scenario, r.n, r.seed_index,
             r.k if r.k is not None else -1,
             r.r if r.r is not None else -1,
             r.i if r.i is not None else -1)
            for r in reports
        ]
        assert keys == sorted(keys)
        assert all(r.passed for r in reports)

    def test_deterministic_bytes(self):
        a = run_suite(scenario="dixon_anderson", count=1)
        b = run_suite(scenario="dixon_anderson", count=1)
        assert to_json(a) == to_json(b)

    def test_scenario_names_cover_suite(self):
        reports = run_suite(scenario="recurrence", count=1)
        assert {r.scenario for r in reports} <= set(SCENARIO_NAMES)
