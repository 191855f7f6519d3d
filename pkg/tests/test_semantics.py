from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

import condrsa as cr
from condrsa import (
    CausalStructure,
    ContextError,
    JointTable,
    ScenarioContext,
    State,
    assertability_matrix,
    assertable,
    default_utterances,
    joint_from_marginals,
    parse_utterance,
)

THETA = F(9, 10)


def state(cells, relation=CausalStructure.INDEPENDENT, label=None):
    return State(JointTable(cells), relation, label)


TOY_S1 = state((F(81, 100), F(9, 100), F(9, 100), F(1, 100)), label="s1")
TOY_S2 = state((F(60, 100), F(5, 100), F(5, 100), F(30, 100)), label="s2")
TOY_S3 = state((F(36, 100), F(24, 100), F(24, 100), F(16, 100)), label="s3")


class TestAssertable:
    def test_conditional_on_boundary_is_assertable(self):
        # P(c|a) = 0.81/0.9 = 0.9 exactly; only exact arithmetic keeps this
        assert assertable(parse_utterance("A -> C"), TOY_S1, THETA)

    def test_conditional_above_threshold(self):
        # P(c|a) = 12/13
        assert assertable(parse_utterance("A -> C"), TOY_S2, THETA)

    def test_literal_below_threshold(self):
        assert not assertable(parse_utterance("C"), TOY_S2, THETA)
        assert assertable(parse_utterance("C"), TOY_S1, THETA)

    def test_conjunction(self):
        assert not assertable(parse_utterance("A & C"), TOY_S1, THETA)

    def test_likely(self):
        assert assertable(parse_utterance("likely C"), TOY_S3, THETA)
        half = state((F(1, 4), F(1, 4), F(1, 4), F(1, 4)))
        assert not assertable(parse_utterance("likely C"), half, THETA)

    def test_zero_probability_antecedent_not_assertable(self):
        degenerate = state((0, 0, F(1, 2), F(1, 2)))  # P(a) = 0
        assert not assertable(parse_utterance("A -> C"), degenerate, THETA)

    @given(
        pa=st.fractions(min_value=0, max_value=1, max_denominator=30),
        pc=st.fractions(min_value=0, max_value=1, max_denominator=30),
        theta1=st.fractions(min_value="11/20", max_value=1, max_denominator=30),
        theta2=st.fractions(min_value="11/20", max_value=1, max_denominator=30),
    )
    def test_threshold_monotonicity(self, pa, pc, theta1, theta2):
        lo, hi = sorted((theta1, theta2))
        s = state(joint_from_marginals(pa, pc).cells)
        for u in default_utterances():
            if assertable(u, s, hi):
                assert assertable(u, s, lo)

    @given(
        pa=st.fractions(min_value=0, max_value=1, max_denominator=30),
        theta=st.fractions(min_value="11/20", max_value=1, max_denominator=30),
    )
    def test_negation_duality(self, pa, theta):
        s = state(joint_from_marginals(pa, F(1, 2)).cells)
        pos, neg = parse_utterance("A"), parse_utterance("~A")
        assert not (assertable(pos, s, theta) and assertable(neg, s, theta))

    @given(
        cells=st.lists(st.integers(0, 12), min_size=4, max_size=4).filter(sum),
        theta=st.fractions(min_value="11/20", max_value=1, max_denominator=30),
    )
    def test_conjunction_implies_conditional(self, cells, theta):
        total = sum(cells)
        s = state(tuple(F(c, total) for c in cells))
        conj = parse_utterance("A & C")
        cond = parse_utterance("A -> C")
        if assertable(conj, s, theta):
            assert assertable(cond, s, theta)


class TestDefaultUtterances:
    def test_balanced_set_has_twenty(self):
        utts = default_utterances()
        assert len(utts) == 20
        kinds = [u.kind.value for u in utts]
        assert kinds.count("literal") == 4
        assert kinds.count("likely") == 4
        assert kinds.count("conjunction") == 4
        assert kinds.count("conditional") == 8

    def test_reverse_conditionals_flag(self):
        utts = default_utterances(include_reverse_conditionals=False)
        assert len(utts) == 12 + 4
        conds = [u for u in utts if u.kind.value == "conditional"]
        assert all(c.antecedent.var is cr.Var.A for c in conds)


class TestAssertabilityMatrix:
    def test_toy_matrix_matches_published_table(self, toy_ctx):
        matrix = assertability_matrix(toy_ctx)
        assert matrix.values.astype(int).tolist() == [
            [1, 1, 1, 0],
            [1, 1, 0, 0],
            [1, 0, 0, 0],
        ]

    def test_single_state_certain(self):
        ctx = ScenarioContext(
            states=(state((F(1, 2), 0, F(1, 2), 0)),),  # P(c) = 1
            weights=(1,),
            utterances=(parse_utterance("C"),),
            alpha=1,
            theta=THETA,
        )
        assert assertability_matrix(ctx).values.tolist() == [[True]]

    def test_unsatisfiable_state_rejected_at_construction(self):
        with pytest.raises(ContextError, match="no assertable utterance"):
            ScenarioContext(
                states=(state((F(1, 4), F(1, 4), F(1, 4), F(1, 4)), label="flat"),),
                weights=(1,),
                utterances=(parse_utterance("C"),),
                alpha=1,
                theta=THETA,
            )

    def test_float_and_exact_paths_agree(self, small_ctx):
        from condrsa.semantics import bool_matrix_exact

        exact = bool_matrix_exact(small_ctx.states, small_ctx.utterances, small_ctx.theta)
        assert (exact == small_ctx.assertability).all()


class TestContext:
    def test_weights_must_normalize(self):
        with pytest.raises(ContextError, match="sum to 1"):
            ScenarioContext(
                states=(TOY_S1, TOY_S2),
                weights=(F(1, 2), F(1, 4)),
                utterances=(parse_utterance("likely C"),),
                alpha=1,
                theta=THETA,
            )

    def test_from_unnormalized(self):
        ctx = ScenarioContext.from_unnormalized(
            states=(TOY_S1, TOY_S2),
            weights=(3, 1),
            utterances=(parse_utterance("likely C"), parse_utterance("A -> C")),
            alpha=1,
            theta=THETA,
        )
        assert ctx.weights == (F(3, 4), F(1, 4))

    def test_theta_range(self):
        with pytest.raises(ContextError):
            ScenarioContext(
                states=(TOY_S1,), weights=(1,),
                utterances=(parse_utterance("C"),), alpha=1, theta=F(1, 2),
            )

    def test_exactness_detection(self, toy_ctx, small_ctx):
        assert toy_ctx.exact
        assert not small_ctx.exact

    def test_tables_are_read_only(self, toy_ctx):
        with pytest.raises(ValueError):
            toy_ctx.tables[0, 0] = 0.5
        with pytest.raises(ValueError):
            toy_ctx.assertability[0, 0] = False

    def test_negative_weight_rejected(self):
        with pytest.raises(ContextError, match="nonnegative"):
            ScenarioContext(
                states=(TOY_S1, TOY_S2),
                weights=(F(3, 2), F(-1, 2)),
                utterances=(parse_utterance("likely C"),),
                alpha=1,
                theta=THETA,
            )

    def test_duplicate_utterances_rejected(self):
        u = parse_utterance("likely C")
        with pytest.raises(ContextError, match="duplicate"):
            ScenarioContext(
                states=(TOY_S1,),
                weights=(1,),
                utterances=(u, u),
                alpha=1,
                theta=THETA,
            )
