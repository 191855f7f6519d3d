from collections import Counter
from fractions import Fraction as F

import numpy as np
import pytest

import condrsa as cr
from condrsa import CausalStructure, PriorHyperparams, query
from condrsa.default_context import RELATION_PRIOR
from condrsa.tolerances import TOLERANCES


class TestRelationPrior:
    def test_nominal_probabilities(self):
        assert RELATION_PRIOR[CausalStructure.INDEPENDENT] == F(1, 2)
        for relation in CausalStructure:
            if relation.is_dependent:
                assert RELATION_PRIOR[relation] == F(1, 8)
        assert sum(RELATION_PRIOR.values()) == 1

    def test_empirical_frequencies_converge(self):
        rng = np.random.default_rng(TOLERANCES.default_seed)
        draws = Counter(
            cr.sample_relation(rng) for _ in range(TOLERANCES.relation_prior_draws)
        )
        for relation, target in RELATION_PRIOR.items():
            empirical = draws[relation] / TOLERANCES.relation_prior_draws
            assert abs(empirical - float(target)) < TOLERANCES.relation_prior_tol

    def test_seed_replay(self):
        first = [cr.sample_relation(np.random.default_rng(42)) for _ in range(1)]
        run_a = np.random.default_rng(123)
        run_b = np.random.default_rng(123)
        seq_a = [cr.sample_relation(run_a) for _ in range(200)]
        seq_b = [cr.sample_relation(run_b) for _ in range(200)]
        assert seq_a == seq_b
        assert first == [cr.sample_relation(np.random.default_rng(42))]


class TestSampleState:
    def test_independent_branch_is_product_table(self):
        rng = np.random.default_rng(0)
        for _ in range(200):
            state = cr.sample_state(rng)
            if state.relation is CausalStructure.INDEPENDENT:
                pa = query(state.table, cr.A)
                pc = query(state.table, cr.C)
                assert query(state.table, cr.A & cr.C) == pytest.approx(pa * pc)

    def test_dependent_branch_matches_direction(self, default_states):
        checked = 0
        for state in default_states:
            r = state.relation
            if not r.is_dependent:
                continue
            cause = cr.A if r.cause is cr.Var.A else cr.C
            effect = cr.C if r.cause is cr.Var.A else cr.A
            condition = cause if r.cause_is_positive else ~cause
            try:
                boosted = query(state.table, effect, given=condition)
                base = query(state.table, effect, given=~condition)
            except cr.ZeroProbabilityEventError:
                continue
            assert boosted > base
            checked += 1
        assert checked > 3000

    def test_causal_power_mean_exceeds_threshold(self, default_states):
        values = [
            query(s.table, cr.C, given=cr.A)
            for s in default_states
            if s.relation is CausalStructure.AC_POS
        ]
        assert len(values) > 800
        assert np.mean(values) > 0.9


class TestDeterminism:
    def test_same_seed_same_states(self):
        hyper = PriorHyperparams(n_states=300)
        a = cr.sample_default_states(11, hyper)
        b = cr.sample_default_states(11, hyper)
        assert a == b

    def test_different_seeds_differ(self):
        hyper = PriorHyperparams(n_states=50)
        assert cr.sample_default_states(1, hyper) != cr.sample_default_states(2, hyper)

    def test_thread_count_never_changes_states(self):
        hyper = PriorHyperparams(n_states=257)
        serial = cr.sample_default_states(5, hyper, threads=1)
        threaded = cr.sample_default_states(5, hyper, threads=4)
        assert serial == threaded

    def test_thread_count_never_changes_analyses(self):
        hyper = PriorHyperparams(n_states=400)

        def run(threads):
            ctx = cr.build_default_context(9, hyper, threads=threads)
            checks = cr.default_context_checks(ctx, "qualitative")
            return [(c.name, c.passed, c.observed) for c in checks]

        assert run(1) == run(3)


class TestBuildDefaultContext:
    def test_defaults(self, default_ctx):
        assert default_ctx.n_states == TOLERANCES.default_n_states
        assert default_ctx.alpha == TOLERANCES.default_alpha
        assert default_ctx.theta == TOLERANCES.default_theta
        assert len(default_ctx.utterances) == 20
        assert default_ctx.weights[0] == 1.0 / default_ctx.n_states

    def test_single_state_context_runs(self):
        ctx = cr.build_default_context(3, PriorHyperparams(n_states=1))
        assert ctx.n_states == 1
        cr.speaker_matrix(ctx)

    def test_custom_utterances(self):
        utts = cr.default_utterances(include_reverse_conditionals=False)
        ctx = cr.build_default_context(3, PriorHyperparams(n_states=50), utterances=utts)
        assert len(ctx.utterances) == 16

    def test_hyperparams_validated(self):
        with pytest.raises(ValueError):
            PriorHyperparams(tau_shape=(0.0, 1.0))
        with pytest.raises(ValueError):
            PriorHyperparams(n_states=0)

    def test_seed_type_checked(self):
        with pytest.raises(TypeError):
            cr.sample_default_states("not-a-seed")


class TestSampledTableProfile:
    def test_world_probability_means_match_prior_shape(self, default_states):
        """Dependent samples pile mass on the cause-consistent worlds;
        independent samples spread evenly."""
        by_relation = {}
        for s in default_states:
            by_relation.setdefault(s.relation, []).append(s.table.as_floats())

        ac_pos = np.array(by_relation[CausalStructure.AC_POS]).mean(axis=0)
        assert ac_pos[0] > 0.4 and ac_pos[3] > 0.4   # both / neither dominate
        assert ac_pos[1] < 0.1 and ac_pos[2] < 0.1

        ac_neg = np.array(by_relation[CausalStructure.AC_NEG]).mean(axis=0)
        assert ac_neg[1] > 0.4 and ac_neg[2] > 0.4   # exactly-one worlds dominate
        assert ac_neg[0] < 0.1 and ac_neg[3] < 0.1

        independent = np.array(by_relation[CausalStructure.INDEPENDENT]).mean(axis=0)
        assert np.allclose(independent, 0.25, atol=0.02)

    def test_sampled_tables_sum_tightly(self, default_states):
        sums = np.array([sum(s.table.cells) for s in default_states])
        assert np.abs(sums - 1).max() < 1e-12
