from fractions import Fraction as F

import numpy as np
import pytest

import condrsa as cr
from condrsa import (
    CausalStructure,
    CertaintyCell,
    CertaintyClass,
    ContingencyUndefinedError,
    JointTable,
    ScenarioContext,
    State,
    ZeroProbabilityEventError,
    classify_certainty,
    default_utterances,
    delta_p_star,
    joint_from_marginals,
    parse_utterance,
)
from condrsa.analysis import certainty_cell_array
from condrsa.engine import Argmax, Softmax


def istate(pa, pc, label=None):
    return State(joint_from_marginals(pa, pc), CausalStructure.INDEPENDENT, label)


class TestCertainty:
    def test_above_threshold_is_certain(self):
        s = istate(0.95, 0.5)
        assert classify_certainty(s, 0.9, cr.A) is CertaintyClass.CERTAIN

    def test_interior_is_uncertain(self):
        s = istate(0.5, 0.5)
        assert classify_certainty(s, 0.9, cr.A) is CertaintyClass.UNCERTAIN

    def test_certainly_false_is_certain(self):
        s = istate(0.04, 0.5)
        assert classify_certainty(s, 0.9, cr.A) is CertaintyClass.CERTAIN

    def test_boundary_is_uncertain(self):
        s = istate(F(9, 10), F(1, 2))
        assert classify_certainty(s, F(9, 10), cr.A) is CertaintyClass.UNCERTAIN

    def test_conditional_event(self):
        s = State(JointTable((F(3, 5), F(1, 10), F(1, 5), F(1, 10))))
        assert classify_certainty(s, F(4, 5), cr.C, given=cr.A) is CertaintyClass.CERTAIN

    def test_cells_partition_context(self, default_ctx):
        cells = certainty_cell_array(default_ctx)
        assert cells.shape == (default_ctx.n_states,)
        assert set(np.unique(cells)) <= {0, 1, 2}


class TestBestUtteranceFrequencies:
    def test_frequencies_sum_to_one(self, default_ctx):
        table = cr.best_utterance_frequencies(default_ctx)
        assert table
        for cell in table.values():
            assert sum(cell.frequencies.values()) == pytest.approx(1.0)
            assert cell.count > 0

    def test_empty_cells_absent(self):
        # a single certain-both state: no uncertain or mixed rows at all
        ctx = ScenarioContext(
            states=(istate(F(99, 100), F(99, 100), "sure"),),
            weights=(1,),
            utterances=default_utterances(),
            alpha=1,
            theta=F(9, 10),
        )
        table = cr.best_utterance_frequencies(ctx, group_by="none")
        assert list(table) == [(CertaintyCell.CERTAIN_BOTH, "all")]

    def test_fractional_ties(self):
        # P(a)=P(c)=0.95 independent: the two literals tie (equal mass), the
        # conjunction has mass 0.9025 < theta... make conjunction assertable
        ctx = ScenarioContext(
            states=(istate(F(99, 100), F(99, 100), "sure"),),
            weights=(1,),
            utterances=(parse_utterance("A"), parse_utterance("C")),
            alpha=1,
            theta=F(9, 10),
        )
        cell = cr.best_utterance_frequencies(ctx, group_by="none")[
            (CertaintyCell.CERTAIN_BOTH, "all")
        ]
        assert cell.frequencies[cr.UtteranceType.LITERAL] == 1.0

    def test_group_by_relation(self, default_ctx):
        table = cr.best_utterance_frequencies(default_ctx, group_by="relation")
        groups = {g for _, g in table}
        assert "independent" in groups and "AC_pos" in groups

    def test_unknown_grouping(self, default_ctx):
        with pytest.raises(ValueError):
            cr.best_utterance_frequencies(default_ctx, group_by="colour")


class TestDeltaPStar:
    def test_perfect_dependence(self, skiing):
        dep = skiing.states[0]
        assert delta_p_star(dep.table) == 1

    def test_independent_table_is_zero(self):
        assert delta_p_star(joint_from_marginals(F(1, 3), F(2, 3))) == 0

    def test_undefined_antecedent(self):
        with pytest.raises(ZeroProbabilityEventError):
            delta_p_star(joint_from_marginals(0, F(1, 2)))
        with pytest.raises(ZeroProbabilityEventError):
            delta_p_star(joint_from_marginals(1, F(1, 2)))

    def test_saturated_baseline(self):
        table = JointTable((F(1, 4), F(1, 4), F(1, 2), 0))  # P(c|~a) = 1
        with pytest.raises(ContingencyUndefinedError):
            delta_p_star(table)

    def test_matches_noisy_or_causal_power(self):
        tau, beta = F(7, 10), F(1, 5)
        table = cr.joint_from_noisy_or(CausalStructure.AC_POS, F(2, 5), tau, beta)
        assert delta_p_star(table) == tau


class TestDeltaPCohorts:
    def test_nesting(self, default_ctx):
        cohorts = cr.delta_p_cohorts(default_ctx)
        prior = set(cohorts.prior.indices.tolist())
        assertable = set(cohorts.assertable.indices.tolist())
        best = set(cohorts.best_choice.indices.tolist())
        assert best <= assertable <= prior
        assert cohorts.undefined_count == default_ctx.n_states - len(prior)
        assert len(best) > 0

    def test_values_match_scalar_function(self, default_ctx):
        cohorts = cr.delta_p_cohorts(default_ctx)
        for idx, value in list(zip(cohorts.assertable.indices, cohorts.assertable.values))[:25]:
            table = default_ctx.states[int(idx)].table
            assert delta_p_star(table) == pytest.approx(value)


class TestCPMetrics:
    def test_point_mass_on_deterministic_table(self, skiing):
        ctx = skiing.to_context()
        post = cr.Posterior(ctx, (1, 0))
        metrics = cr.cp_metrics(post)
        assert metrics.values == (1, 1)
        assert metrics.excluded_mass_not_a == 0

    def test_excluded_mass_reported(self):
        ctx = ScenarioContext(
            states=(istate(1, F(95, 100), "all_a"), istate(F(1, 2), F(95, 100), "half")),
            weights=(F(1, 4), F(3, 4)),
            utterances=default_utterances(),
            alpha=1,
            theta=F(9, 10),
        )
        metrics = cr.cp_metrics(cr.prior_posterior(ctx))
        assert metrics.excluded_mass_not_a == F(1, 4)  # P(~a) = 0 in "all_a"
        assert metrics.excluded_mass_c == 0
        assert metrics.not_c_given_not_a == F(5, 100)

    def test_float_and_exact_paths_agree(self, skiing):
        exact_ctx = skiing.to_context()
        float_ctx = skiing.to_context(as_float=True)
        u = skiing.parse("E -> S")
        exact = cr.cp_metrics(cr.pragmatic_listener(exact_ctx, u))
        approx = cr.cp_metrics(cr.pragmatic_listener(float_ctx, u))
        assert float(exact.not_c_given_not_a) == pytest.approx(approx.not_c_given_not_a)
        assert float(exact.a_given_c) == pytest.approx(approx.a_given_c)


class TestExpectedChoice:
    def test_rows_sum_to_one(self, default_ctx):
        for rule in (None, Argmax(), Softmax(1.0)):
            table = cr.expected_choice_probabilities(default_ctx, rule)
            for group, masses in table.items():
                assert sum(masses.values()) == pytest.approx(1.0)

    def test_relation_grouping_covers_sample(self, default_ctx):
        table = cr.expected_choice_probabilities(default_ctx)
        assert set(table) == {r.value for r in CausalStructure}


class TestRelationBeliefs:
    def test_exact_skiing_values(self, skiing):
        ctx = skiing.to_context()
        beliefs = cr.relation_beliefs(ctx, skiing.parse("E -> S"))
        assert beliefs["prior"][CausalStructure.AC_POS] == F(1, 2)
        assert beliefs["literal"][CausalStructure.AC_POS] == F(1, 2)
        assert beliefs["pragmatic"][CausalStructure.AC_POS] == F(5, 6)


class TestCheckSuite:
    def test_unique_names_and_levels(self, default_ctx):
        for level in ("strict", "qualitative"):
            checks = cr.default_context_checks(default_ctx, level)
            names = [c.name for c in checks]
            assert len(names) == len(set(names))
            assert all(isinstance(c.passed, bool) for c in checks)

    def test_unknown_level_rejected(self, default_ctx):
        with pytest.raises(ValueError):
            cr.default_context_checks(default_ctx, "vibes")
