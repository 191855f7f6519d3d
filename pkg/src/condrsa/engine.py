"""The pragmatic recursion: literal listener, speaker, pragmatic listener.

The literal listener updates the prior with the assertability indicator:

    P_lit(s | u)  proportional to  assertable(u, s) * prior(s)

The speaker scores utterances by the log-probability the literal listener
would then assign to the speaker's state, and soft-maxes with rationality
``alpha``; the pragmatic listener Bayes-inverts the speaker:

    P_S(u | s)    proportional to  P_lit(s | u) ** alpha   over assertable u
    P_PL(s | u)   proportional to  P_S(u | s) * prior(s)

Because ``P_lit(s | u) = prior(s) / mass(u)`` whenever ``u`` is assertable
in ``s`` (with ``mass(u)`` the prior mass of the states supporting ``u``),
the per-state prior factor cancels in the speaker's normalization.  The
same cancellation applies to the prior mass of any group of states sharing
one table, so marginalizing listener mass over causal relations attached
to the same table leaves the speaker unchanged; speakers here depend only
on which utterances are assertable and on the masses.

Exact contexts (all Fractions, integer alpha) are evaluated in rational
arithmetic, where the soft-max is literally ``x ** alpha``; float contexts
are evaluated with vectorized numpy in log space.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence, Union

import numpy as np

from .context import ScenarioContext
from .core import (
    CausalStructure,
    ContextError,
    Scalar,
    State,
    ZeroSupportError,
)
from .utterances import Utterance


@dataclass(frozen=True)
class Softmax:
    """Soft-max utterance choice with rationality ``alpha``.

    ``Softmax(0)`` is uniform over assertable utterances; increasing
    ``alpha`` approaches `Argmax`.
    """

    alpha: Scalar

    def __post_init__(self) -> None:
        if self.alpha < 0:
            raise ValueError(f"alpha must be nonnegative, got {self.alpha!r}")


@dataclass(frozen=True)
class Argmax:
    """The hyperrational limit: uniform over utility-maximizing utterances."""


SpeakerRule = Union[Softmax, Argmax]


@dataclass(frozen=True)
class Posterior:
    """A distribution over the states of a context."""

    context: ScenarioContext
    weights: tuple[Scalar, ...]

    def __post_init__(self) -> None:
        if len(self.weights) != self.context.n_states:
            raise ValueError("one weight per context state required")

    def weight(self, state: State | str | int) -> Scalar:
        if isinstance(state, int):
            return self.weights[state]
        return self.weights[self.context.index_of_state(state)]

    def as_array(self) -> np.ndarray:
        return np.array([float(w) for w in self.weights])


def prior_posterior(ctx: ScenarioContext) -> Posterior:
    """The prior, wrapped as a posterior for uniform downstream handling."""
    return Posterior(ctx, tuple(ctx.weights))


def _resolve_rule(ctx: ScenarioContext, rule: SpeakerRule | None) -> SpeakerRule:
    return Softmax(ctx.alpha) if rule is None else rule


def _integer_alpha(alpha: Scalar) -> int:
    if isinstance(alpha, Fraction) and alpha.denominator == 1:
        return int(alpha)
    if isinstance(alpha, int) and not isinstance(alpha, bool):
        return alpha
    if isinstance(alpha, float) and alpha.is_integer():
        return int(alpha)
    raise ContextError(
        f"exact arithmetic needs an integer alpha, got {alpha!r}; "
        "use a float context for non-integer rationality"
    )


def utterance_masses(ctx: ScenarioContext) -> tuple[Scalar, ...]:
    """Prior mass supporting each utterance: ``mass(u) = sum of prior(s) over s
    where u is assertable``.  Exact under the rational backend."""
    matrix = ctx.assertability
    if ctx.exact:
        return tuple(
            sum((w for w, ok in zip(ctx.weights, matrix[:, j]) if ok), Fraction(0))
            for j in range(len(ctx.utterances))
        )
    return tuple(ctx.weight_array @ matrix)


# --------------------------------------------------------------------------
# float backend: whole-context matrices
# --------------------------------------------------------------------------


def literal_listener_matrix(ctx: ScenarioContext) -> np.ndarray:
    """P_lit(state | utterance) as an (n_states, n_utterances) float matrix.

    Columns for utterances assertable nowhere are identically zero.
    """
    matrix = ctx.assertability
    scores = matrix * ctx.weight_array[:, None]
    mass = scores.sum(axis=0)
    out = np.zeros_like(scores)
    ok = mass > 0
    out[:, ok] = scores[:, ok] / mass[ok]
    return out


def speaker_matrix(
    ctx: ScenarioContext, rule: SpeakerRule | None = None
) -> np.ndarray:
    """P_S(utterance | state) as an (n_states, n_utterances) float matrix."""
    rule = _resolve_rule(ctx, rule)
    matrix = ctx.assertability
    mass = ctx.weight_array @ matrix
    valid = matrix & (mass > 0)
    if not valid.any(axis=1).all():
        bad = int(np.flatnonzero(~valid.any(axis=1))[0])
        label = ctx.states[bad].label or f"state #{bad}"
        raise ContextError(f"{label} has no assertable utterance with prior mass")

    if isinstance(rule, Argmax):
        mass_rows = np.where(valid, mass[None, :], np.inf)
        best = mass_rows.min(axis=1)
        ties = mass_rows == best[:, None]
        return ties / ties.sum(axis=1, keepdims=True)

    # soft-max in log space; the per-state prior factor of the literal
    # listener cancels row-wise, leaving -alpha * log(mass)
    alpha = float(rule.alpha)
    utility = np.zeros_like(mass)
    np.log(mass, where=mass > 0, out=utility)
    logits = np.where(valid, -alpha * utility[None, :], -np.inf)
    logits -= logits.max(axis=1, keepdims=True)
    scores = np.exp(logits, where=np.isfinite(logits), out=np.zeros_like(logits))
    return scores / scores.sum(axis=1, keepdims=True)


def pragmatic_listener_matrix(
    ctx: ScenarioContext, rule: SpeakerRule | None = None
) -> np.ndarray:
    """P_PL(state | utterance) columns; zero columns where no speaker ever
    produces the utterance."""
    production = speaker_matrix(ctx, rule) * ctx.weight_array[:, None]
    totals = production.sum(axis=0)
    out = np.zeros_like(production)
    ok = totals > 0
    out[:, ok] = production[:, ok] / totals[ok]
    return out


def surprise_vector(
    ctx: ScenarioContext, rule: SpeakerRule | None = None
) -> np.ndarray:
    """Expected production probability of every utterance under the prior."""
    return ctx.weight_array @ speaker_matrix(ctx, rule)


# --------------------------------------------------------------------------
# exact backend helpers
# --------------------------------------------------------------------------


def _speaker_row_exact(
    ctx: ScenarioContext,
    index: int,
    rule: SpeakerRule,
    masses: Sequence[Scalar],
) -> list[Fraction]:
    row = ctx.assertability[index]
    support = [j for j in range(len(masses)) if row[j] and masses[j] > 0]
    if not support:
        label = ctx.states[index].label or f"state #{index}"
        raise ContextError(f"{label} has no assertable utterance with prior mass")

    weights = [Fraction(0)] * len(masses)
    if isinstance(rule, Argmax):
        best = min(masses[j] for j in support)
        ties = [j for j in support if masses[j] == best]
        share = Fraction(1, len(ties))
        for j in ties:
            weights[j] = share
        return weights

    alpha = _integer_alpha(rule.alpha)
    scores = {j: Fraction(1, 1) / Fraction(masses[j]) for j in support}
    powered = {j: s**alpha for j, s in scores.items()}
    total = sum(powered.values())
    for j, s in powered.items():
        weights[j] = s / total
    return weights


# --------------------------------------------------------------------------
# public operations
# --------------------------------------------------------------------------


def literal_listener(ctx: ScenarioContext, utterance: Utterance | str) -> Posterior:
    """Prior conditioned on the states where ``utterance`` is assertable."""
    j = ctx.index_of_utterance(utterance)
    column = ctx.assertability[:, j]
    if ctx.exact:
        mass = sum((w for w, ok in zip(ctx.weights, column) if ok), Fraction(0))
        if mass == 0:
            raise ZeroSupportError(
                f"utterance {ctx.utterances[j]} is assertable in no state"
            )
        weights = tuple(
            Fraction(w) / mass if ok else Fraction(0)
            for w, ok in zip(ctx.weights, column)
        )
        return Posterior(ctx, weights)
    col = literal_listener_matrix(ctx)[:, j]
    if not col.any():
        raise ZeroSupportError(
            f"utterance {ctx.utterances[j]} is assertable in no state"
        )
    return Posterior(ctx, tuple(col.tolist()))


def speaker(
    ctx: ScenarioContext,
    state: State | str | int,
    rule: SpeakerRule | None = None,
) -> dict[Utterance, Scalar]:
    """Utterance choice probabilities of a speaker in ``state``."""
    rule = _resolve_rule(ctx, rule)
    i = state if isinstance(state, int) else ctx.index_of_state(state)
    if ctx.exact:
        row = _speaker_row_exact(ctx, i, rule, utterance_masses(ctx))
    else:
        row = speaker_matrix(ctx, rule)[i].tolist()
    return dict(zip(ctx.utterances, row))


def argmax_utterances(
    ctx: ScenarioContext, state: State | str | int
) -> tuple[Utterance, ...]:
    """The utility-maximizing utterances (the `Argmax` tie set) for a state."""
    row = speaker(ctx, state, Argmax())
    return tuple(u for u, p in row.items() if p > 0)


def pragmatic_listener(
    ctx: ScenarioContext,
    utterance: Utterance | str,
    rule: SpeakerRule | None = None,
) -> Posterior:
    """Bayesian inversion of the speaker: prior times production probability."""
    rule = _resolve_rule(ctx, rule)
    j = ctx.index_of_utterance(utterance)
    if ctx.exact:
        masses = utterance_masses(ctx)
        production = [
            w * _speaker_row_exact(ctx, i, rule, masses)[j]
            for i, w in enumerate(ctx.weights)
        ]
        total = sum(production)
        if total == 0:
            raise ZeroSupportError(
                f"no speaker ever produces {ctx.utterances[j]}"
            )
        return Posterior(ctx, tuple(p / total for p in production))
    col = pragmatic_listener_matrix(ctx, rule)[:, j]
    if not col.any():
        raise ZeroSupportError(f"no speaker ever produces {ctx.utterances[j]}")
    return Posterior(ctx, tuple(col.tolist()))


def utterance_surprise(
    ctx: ScenarioContext,
    utterance: Utterance | str,
    rule: SpeakerRule | None = None,
) -> Scalar:
    """How much the listener expects to hear ``utterance`` at all:
    ``sum over s of prior(s) * P_S(u | s)``.  Low values mark utterances a
    cooperative speaker would rarely produce under the prior."""
    rule = _resolve_rule(ctx, rule)
    j = ctx.index_of_utterance(utterance)
    if ctx.exact:
        masses = utterance_masses(ctx)
        return sum(
            w * _speaker_row_exact(ctx, i, rule, masses)[j]
            for i, w in enumerate(ctx.weights)
        )
    return float(surprise_vector(ctx, rule)[j])


def expectation(post: Posterior, f: Callable[[State], Scalar]) -> Scalar:
    """Posterior expectation of a per-state quantity."""
    return sum(w * f(s) for w, s in zip(post.weights, post.context.states))


def relation_posterior(post: Posterior) -> dict[CausalStructure, Scalar]:
    """Posterior mass per causal structure (all five variants listed)."""
    zero = Fraction(0) if post.context.exact else 0.0
    out: dict[CausalStructure, Scalar] = {r: zero for r in CausalStructure}
    for w, s in zip(post.weights, post.context.states):
        out[s.relation] = out[s.relation] + w
    return out
