"""Unit tests for closed-form sample budgets."""

import pytest

from shallowscope.exceptions import ConfigError
from shallowscope.tomography import SCENARIOS, plan_budget


class TestPlanBudget:
    """Worked values and input checks."""

    @pytest.mark.parametrize("n,shots", [(1, 3356), (2, 33552), (3, 335512)])
    def test_full(self, n, shots):
        assert plan_budget("full", n, 0.2, 0.1).shots == shots

    def test_overlap(self):
        budget = plan_budget("overlap", 8, 0.25, 0.2, k=2)
        assert budget.shots == 288502
        assert budget.subsets == 28
        assert budget.precision == 0.25

    def test_rank_r_scales_with_rank(self):
        one = plan_budget("full-rank-r", 3, 0.2, 0.1, rank=1).shots
        two = plan_budget("full-rank-r", 3, 0.2, 0.1, rank=2).shots
        assert abs(two - 2 * one) <= 1

    def test_monotone_in_n(self):
        for scenario in SCENARIOS:
            inputs = {"k": 2, "gap": 0.5, "m_terms": 4, "rank": 1}
            shots = [plan_budget(scenario, n, 0.2, 0.1, **inputs).shots for n in range(2, 7)]
            assert shots == sorted(shots)

    def test_monotone_in_epsilon(self):
        assert plan_budget("overlap", 6, 0.1, 0.1, k=2).shots > plan_budget("overlap", 6, 0.2, 0.1, k=2).shots

    def test_ground_precision(self):
        budget = plan_budget("ground-known-graph", 6, 0.2, 0.1, k=2, gap=1.0, m_terms=5)
        assert budget.subsets == 5
        assert budget.precision == pytest.approx(1.0 * 0.04 / 20)

    def test_circuit_known_structure(self):
        budget = plan_budget("circuit-known-structure", 4, 0.2, 0.1, k=2)
        assert budget.subsets == 4
        assert budget.precision == pytest.approx(0.04 / 16)

    def test_to_dict(self):
        data = plan_budget("overlap", 4, 0.2, 0.1, k=2).to_dict()
        assert data["scenario"] == "overlap"
        assert data["inputs"] == {"k": 2}

    @pytest.mark.parametrize("delta", [0.0, 1 / 3, 0.5])
    def test_delta_range(self, delta):
        with pytest.raises(ConfigError) as error:
            plan_budget("full", 2, 0.2, delta)
        assert error.value.field == "delta"

    def test_missing_input(self):
        with pytest.raises(ConfigError) as error:
            plan_budget("ground-known-m", 4, 0.2, 0.1, k=2, gap=1.0)
        assert error.value.field == "m_terms"

    def test_unknown_scenario(self):
        with pytest.raises(ConfigError):
            plan_budget("magic", 4, 0.2, 0.1)

    def test_k_larger_than_n(self):
        with pytest.raises(ConfigError):
            plan_budget("overlap", 2, 0.2, 0.1, k=3)
