"""Assertability of utterances in world states.

An utterance is assertable in a state when the relevant probability clears
the context's threshold ``theta``:

==============  =======================================
utterance       assertable iff
==============  =======================================
conjunction     P(first and second)  >= theta
literal         P(literal)           >= theta
conditional     P(consequent | antecedent) >= theta
likely literal  P(literal)           > 1/2
==============  =======================================

A conditional whose antecedent has probability zero is not assertable
(rather than an error), so speakers stay well-defined on degenerate
sampled states.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING, Iterable, Sequence

import numpy as np

from .core import ContextError, Scalar, State, Var, query
from .utterances import (
    Conditional,
    Conjunction,
    Likely,
    Lit,
    Literal,
    Utterance,
)

if TYPE_CHECKING:  # pragma: no cover
    from .context import ScenarioContext


def assertable(utterance: Utterance, state: State, theta: Scalar) -> bool:
    """Whether ``utterance`` may be produced in ``state`` at threshold ``theta``."""
    table = state.table
    if isinstance(utterance, Literal):
        return query(table, utterance.lit.event()) >= theta
    if isinstance(utterance, Likely):
        # 0.5 is exactly representable, so Fraction comparisons stay exact
        return query(table, utterance.lit.event()) > 0.5
    if isinstance(utterance, Conjunction):
        joint = utterance.first.event() & utterance.second.event()
        return query(table, joint) >= theta
    if isinstance(utterance, Conditional):
        antecedent = utterance.antecedent.event()
        if query(table, antecedent) == 0:
            return False
        return query(table, utterance.consequent.event(), given=antecedent) >= theta
    raise TypeError(f"not an utterance: {utterance!r}")


def default_utterances(include_reverse_conditionals: bool = True) -> tuple[Utterance, ...]:
    """The balanced utterance set over two variables.

    Four literals, four likely-literals, the four sign-pair conjunctions,
    and conditionals in all sign pairs; ``include_reverse_conditionals``
    controls whether consequent-to-antecedent conditionals (``C -> A``
    etc.) are part of the set, making that ablation a single flag.
    """
    lits = [Lit(v, pos) for v in (Var.A, Var.C) for pos in (True, False)]
    a_pos, a_neg, c_pos, c_neg = lits

    utterances: list[Utterance] = [Literal(l) for l in lits]
    utterances += [Likely(l) for l in lits]
    utterances += [
        Conjunction(first, second)
        for first in (a_pos, a_neg)
        for second in (c_pos, c_neg)
    ]
    utterances += [
        Conditional(ant, cons)
        for ant in (a_pos, a_neg)
        for cons in (c_pos, c_neg)
    ]
    if include_reverse_conditionals:
        utterances += [
            Conditional(ant, cons)
            for ant in (c_pos, c_neg)
            for cons in (a_pos, a_neg)
        ]
    return tuple(utterances)


@dataclass(frozen=True)
class AssertabilityMatrix:
    """Boolean matrix of `assertable` over states (rows) and utterances (columns)."""

    utterances: tuple[Utterance, ...]
    labels: tuple[str | None, ...]
    values: np.ndarray  # bool, shape (n_states, n_utterances)

    def column(self, utterance: Utterance) -> np.ndarray:
        return self.values[:, self.utterances.index(utterance)]


def _lit_prob_columns(tables: np.ndarray) -> dict[tuple[Var, bool], np.ndarray]:
    """Marginal probability of each literal for every row of ``tables``."""
    p_a = tables[:, 0] + tables[:, 1]
    p_c = tables[:, 0] + tables[:, 2]
    return {
        (Var.A, True): p_a,
        (Var.A, False): 1 - p_a,
        (Var.C, True): p_c,
        (Var.C, False): 1 - p_c,
    }


_CELL_INDEX = {
    (True, True): 0,
    (True, False): 1,
    (False, True): 2,
    (False, False): 3,
}


def _joint_prob(tables: np.ndarray, first: Lit, second: Lit) -> np.ndarray:
    a_lit = first if first.var is Var.A else second
    c_lit = second if first.var is Var.A else first
    return tables[:, _CELL_INDEX[(a_lit.positive, c_lit.positive)]]


def bool_matrix_float(
    tables: np.ndarray, utterances: Sequence[Utterance], theta: float
) -> np.ndarray:
    """Vectorized assertability for float tables, one column per utterance."""
    lit_probs = _lit_prob_columns(tables)
    columns = []
    for u in utterances:
        if isinstance(u, Literal):
            columns.append(lit_probs[(u.lit.var, u.lit.positive)] >= theta)
        elif isinstance(u, Likely):
            columns.append(lit_probs[(u.lit.var, u.lit.positive)] > 0.5)
        elif isinstance(u, Conjunction):
            columns.append(_joint_prob(tables, u.first, u.second) >= theta)
        elif isinstance(u, Conditional):
            num = _joint_prob(tables, u.antecedent, u.consequent)
            den = lit_probs[(u.antecedent.var, u.antecedent.positive)]
            ok = den > 0
            col = np.zeros(len(tables), dtype=bool)
            col[ok] = num[ok] / den[ok] >= theta
            columns.append(col)
        else:
            raise TypeError(f"not an utterance: {u!r}")
    return np.stack(columns, axis=1)


def bool_matrix_exact(
    states: Iterable[State], utterances: Sequence[Utterance], theta: Scalar
) -> np.ndarray:
    rows = [[assertable(u, s, theta) for u in utterances] for s in states]
    return np.array(rows, dtype=bool)


def assertability_matrix(ctx: "ScenarioContext") -> AssertabilityMatrix:
    """The full assertability matrix of a context.

    Raises `ContextError` naming the first state that can assert nothing,
    which would make the speaker undefined there.
    """
    values = ctx.assertability
    check_all_rows_assertable(values, [s.label for s in ctx.states])
    return AssertabilityMatrix(
        utterances=ctx.utterances,
        labels=tuple(s.label for s in ctx.states),
        values=values.copy(),
    )


def check_all_rows_assertable(values: np.ndarray, labels: Sequence[str | None]) -> None:
    bad = np.flatnonzero(~values.any(axis=1))
    if bad.size:
        i = int(bad[0])
        label = labels[i] if labels[i] is not None else f"state #{i}"
        raise ContextError(
            f"{label} has no assertable utterance; every state must support "
            f"at least one utterance ({bad.size} offending state(s))"
        )
