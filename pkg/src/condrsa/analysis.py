"""Aggregate analyses over a context: who says what when, and what a
listener concludes.

Everything here is computed from the engine's matrices and is pure; the
check suite at the bottom evaluates the reference claims against the
bounds in `condrsa.tolerances` (strict form for the default configuration,
qualitative ordinal/zero-one form for the robustness grid).
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Iterable

import numpy as np

from . import engine
from .context import ScenarioContext
from .core import (
    A,
    C,
    CausalStructure,
    Event,
    JointTable,
    ModelError,
    Scalar,
    State,
    Var,
    ZeroProbabilityEventError,
    query,
)
from .engine import Argmax, Posterior, SpeakerRule
from .tolerances import TOLERANCES
from .utterances import Conditional, Lit, Utterance, UtteranceType


class ContingencyUndefinedError(ModelError):
    """The normalized contingency is undefined for this table."""


class CertaintyClass(Enum):
    CERTAIN = "certain"
    UNCERTAIN = "uncertain"


class CertaintyCell(Enum):
    """Partition of states by the speaker's certainty about A and about C."""

    CERTAIN_BOTH = "certain_both"
    UNCERTAIN_BOTH = "uncertain_both"
    MIXED = "mixed"


#: canonical order of causal structures in array encodings and output tables
RELATION_ORDER: tuple[CausalStructure, ...] = (
    CausalStructure.INDEPENDENT,
    CausalStructure.AC_POS,
    CausalStructure.AC_NEG,
    CausalStructure.CA_POS,
    CausalStructure.CA_NEG,
)

#: the conditional utterance the dependency analyses condition on
A_IMPLIES_C = Conditional(Lit(Var.A), Lit(Var.C))


def classify_certainty(
    state: State, theta: Scalar, event: Event, given: Event | None = None
) -> CertaintyClass:
    """Uncertain iff ``1 - theta <= P(event) <= theta``, else certain."""
    p = query(state.table, event, given)
    if 1 - theta <= p <= theta:
        return CertaintyClass.UNCERTAIN
    return CertaintyClass.CERTAIN


def marginal_arrays(ctx: ScenarioContext) -> tuple[np.ndarray, np.ndarray]:
    """Float marginals (P(a), P(c)) across all states."""
    tables = ctx.tables
    return tables[:, 0] + tables[:, 1], tables[:, 0] + tables[:, 2]


def certainty_cell_array(ctx: ScenarioContext) -> np.ndarray:
    """Certainty cell of every state, as indices into list(CertaintyCell)."""
    theta = float(ctx.theta)
    p_a, p_c = marginal_arrays(ctx)
    unc_a = (p_a >= 1 - theta) & (p_a <= theta)
    unc_c = (p_c >= 1 - theta) & (p_c <= theta)
    cells = np.full(ctx.n_states, list(CertaintyCell).index(CertaintyCell.MIXED))
    cells[~unc_a & ~unc_c] = list(CertaintyCell).index(CertaintyCell.CERTAIN_BOTH)
    cells[unc_a & unc_c] = list(CertaintyCell).index(CertaintyCell.UNCERTAIN_BOTH)
    return cells


def relation_array(ctx: ScenarioContext) -> np.ndarray:
    """Causal structure of every state, as indices into RELATION_ORDER."""
    index = {r: i for i, r in enumerate(RELATION_ORDER)}
    return np.array([index[s.relation] for s in ctx.states])


def _group_labels(ctx: ScenarioContext, group_by: str) -> np.ndarray:
    relations = relation_array(ctx)
    if group_by == "relation":
        return np.array([RELATION_ORDER[i].value for i in relations])
    if group_by == "independence":
        return np.where(relations == 0, "independent", "dependent")
    if group_by == "none":
        return np.full(ctx.n_states, "all")
    raise ValueError(f"unknown grouping {group_by!r}")


def _type_columns(ctx: ScenarioContext) -> dict[UtteranceType, list[int]]:
    cols: dict[UtteranceType, list[int]] = {t: [] for t in UtteranceType}
    for j, u in enumerate(ctx.utterances):
        cols[u.kind].append(j)
    return cols


def _type_mass_matrix(ctx: ScenarioContext, choice: np.ndarray) -> np.ndarray:
    """Collapse a (states x utterances) probability matrix to utterance types.

    Returns (n_states, len(UtteranceType)) in UtteranceType order.
    """
    cols = _type_columns(ctx)
    return np.stack(
        [choice[:, cols[t]].sum(axis=1) if cols[t] else np.zeros(len(choice))
         for t in UtteranceType],
        axis=1,
    )


@dataclass(frozen=True)
class FrequencyCell:
    """How often each utterance type is the speaker's best choice in a cell."""

    count: int
    frequencies: dict[UtteranceType, float]


def best_utterance_frequencies(
    ctx: ScenarioContext, group_by: str = "independence"
) -> dict[tuple[CertaintyCell, str], FrequencyCell]:
    """Relative frequency of each utterance type being the hyperrational
    speaker's best choice, per certainty cell and relation group.

    Argmax ties contribute fractionally.  Cells containing no state are
    absent from the result rather than reported as zeros.
    """
    type_mass = _type_mass_matrix(ctx, engine.speaker_matrix(ctx, Argmax()))
    cells = certainty_cell_array(ctx)
    groups = _group_labels(ctx, group_by)

    out: dict[tuple[CertaintyCell, str], FrequencyCell] = {}
    for ci, cell in enumerate(CertaintyCell):
        for group in dict.fromkeys(groups.tolist()):
            mask = (cells == ci) & (groups == group)
            count = int(mask.sum())
            if count == 0:
                continue
            means = type_mass[mask].mean(axis=0)
            out[(cell, group)] = FrequencyCell(
                count=count,
                frequencies={t: float(m) for t, m in zip(UtteranceType, means)},
            )
    return out


@dataclass(frozen=True)
class CPMetrics:
    """Expected strength of the two biconditional-reading probabilities.

    ``not_c_given_not_a`` is E[P(~c | ~a)] and ``a_given_c`` is E[P(a | c)]
    under a posterior over states.  States in which the conditioning event
    has probability zero are excluded and their posterior mass reported.
    """

    not_c_given_not_a: Scalar
    a_given_c: Scalar
    excluded_mass_not_a: Scalar
    excluded_mass_c: Scalar

    @property
    def values(self) -> tuple[Scalar, Scalar]:
        return (self.not_c_given_not_a, self.a_given_c)


def cp_metrics(post: Posterior) -> CPMetrics:
    ctx = post.context
    if ctx.exact:
        return _cp_metrics_exact(post)
    tables = ctx.tables
    weights = post.as_array()
    p_a, p_c = marginal_arrays(ctx)

    def conditional_expectation(num, den):
        ok = den > 0
        included = weights[ok].sum()
        if included == 0:
            raise ZeroProbabilityEventError(
                "conditioning event has probability zero in every supported state"
            )
        value = float((weights[ok] * (num[ok] / den[ok])).sum() / included)
        return value, float(weights[~ok].sum())

    ncna, excl_a = conditional_expectation(tables[:, 3], 1 - p_a)
    ac, excl_c = conditional_expectation(tables[:, 0], p_c)
    return CPMetrics(ncna, ac, excl_a, excl_c)


def _cp_metrics_exact(post: Posterior) -> CPMetrics:
    def conditional_expectation(event: Event, given: Event):
        total = value = excluded = 0
        for w, s in zip(post.weights, post.context.states):
            if query(s.table, given) == 0:
                excluded = excluded + w
                continue
            total = total + w
            value = value + w * query(s.table, event, given)
        if total == 0:
            raise ZeroProbabilityEventError(
                "conditioning event has probability zero in every supported state"
            )
        return value / total, excluded

    ncna, excl_a = conditional_expectation(~C, ~A)
    ac, excl_c = conditional_expectation(A, C)
    return CPMetrics(ncna, ac, excl_a, excl_c)


def delta_p_star(table: JointTable) -> Scalar:
    """Normalized contingency ``(P(c|a) - P(c|~a)) / (1 - P(c|~a))``.

    Undefined (raises) when either conditional is undefined or when
    ``P(c|~a) = 1``.
    """
    p_c_a = query(table, C, given=A)          # raises if P(a) = 0
    p_c_na = query(table, C, given=~A)        # raises if P(a) = 1
    if p_c_na == 1:
        raise ContingencyUndefinedError(
            "P(c|~a) = 1 makes the normalized contingency undefined"
        )
    return (p_c_a - p_c_na) / (1 - p_c_na)


@dataclass(frozen=True)
class DeltaPCohort:
    name: str
    indices: np.ndarray
    values: np.ndarray
    relations: tuple[CausalStructure, ...]

    def median(self) -> float:
        return float(np.median(self.values))


@dataclass(frozen=True)
class DeltaPCohorts:
    """Contingency values for three nested samples of states.

    ``prior``: all states where the contingency is defined; ``assertable``:
    those where "A -> C" is assertable; ``best_choice``: those where it is
    (one of) the hyperrational speaker's best choices.
    """

    prior: DeltaPCohort
    assertable: DeltaPCohort
    best_choice: DeltaPCohort
    undefined_count: int


def _delta_p_array(ctx: ScenarioContext) -> tuple[np.ndarray, np.ndarray]:
    tables = ctx.tables
    p_a, _ = marginal_arrays(ctx)
    defined = (p_a > 0) & (p_a < 1)
    p_c_a = np.zeros(ctx.n_states)
    p_c_na = np.zeros(ctx.n_states)
    p_c_a[defined] = tables[defined, 0] / p_a[defined]
    p_c_na[defined] = tables[defined, 2] / (1 - p_a[defined])
    defined &= p_c_na < 1
    values = np.zeros(ctx.n_states)
    values[defined] = (p_c_a[defined] - p_c_na[defined]) / (1 - p_c_na[defined])
    return values, defined


def delta_p_cohorts(ctx: ScenarioContext) -> DeltaPCohorts:
    values, defined = _delta_p_array(ctx)
    j = ctx.index_of_utterance(A_IMPLIES_C)
    assertable = ctx.assertability[:, j] & defined
    best = (engine.speaker_matrix(ctx, Argmax())[:, j] > 0) & assertable
    relations = relation_array(ctx)

    def cohort(name: str, mask: np.ndarray) -> DeltaPCohort:
        idx = np.flatnonzero(mask)
        return DeltaPCohort(
            name=name,
            indices=idx,
            values=values[idx],
            relations=tuple(RELATION_ORDER[i] for i in relations[idx]),
        )

    return DeltaPCohorts(
        prior=cohort("prior", defined),
        assertable=cohort("assertable", assertable),
        best_choice=cohort("best_choice", best),
        undefined_count=int((~defined).sum()),
    )


def expected_choice_probabilities(
    ctx: ScenarioContext,
    rule: SpeakerRule | None = None,
    group_by: str = "relation",
) -> dict[str, dict[UtteranceType, float]]:
    """Mean speaker probability mass per utterance type, by relation group.

    Every row sums to one (each state's speaker distribution does).
    """
    type_mass = _type_mass_matrix(ctx, engine.speaker_matrix(ctx, rule))
    groups = _group_labels(ctx, group_by)
    out: dict[str, dict[UtteranceType, float]] = {}
    for group in dict.fromkeys(groups.tolist()):
        mask = groups == group
        if not mask.any():
            continue
        means = type_mass[mask].mean(axis=0)
        out[group] = {t: float(m) for t, m in zip(UtteranceType, means)}
    return out


def relation_beliefs(
    ctx: ScenarioContext,
    utterance: Utterance | str = A_IMPLIES_C,
    rule: SpeakerRule | None = None,
) -> dict[str, dict[CausalStructure, Scalar]]:
    """Relation marginals prior to the utterance and under both listeners."""
    prior = engine.relation_posterior(engine.prior_posterior(ctx))
    literal = engine.relation_posterior(engine.literal_listener(ctx, utterance))
    pragmatic = engine.relation_posterior(
        engine.pragmatic_listener(ctx, utterance, rule)
    )
    return {"prior": prior, "literal": literal, "pragmatic": pragmatic}


def cp_comparison(
    ctx: ScenarioContext,
    utterance: Utterance | str = A_IMPLIES_C,
    rule: SpeakerRule | None = None,
) -> dict[str, CPMetrics]:
    """CP metrics prior to the utterance and under both listeners."""
    return {
        "prior": cp_metrics(engine.prior_posterior(ctx)),
        "literal": cp_metrics(engine.literal_listener(ctx, utterance)),
        "pragmatic": cp_metrics(engine.pragmatic_listener(ctx, utterance, rule)),
    }


# --------------------------------------------------------------------------
# check suite
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    observed: str
    requirement: str


def _positive_mass(beliefs: dict[CausalStructure, Scalar]) -> float:
    return float(beliefs[CausalStructure.AC_POS] + beliefs[CausalStructure.CA_POS])


def _negative_mass(beliefs: dict[CausalStructure, Scalar]) -> float:
    return float(beliefs[CausalStructure.AC_NEG] + beliefs[CausalStructure.CA_NEG])


def _argmax_type_masks(ctx: ScenarioContext) -> np.ndarray:
    """(n_states, n_types) argmax type mass; used for existence checks."""
    return _type_mass_matrix(ctx, engine.speaker_matrix(ctx, Argmax()))


def default_context_checks(
    ctx: ScenarioContext, level: str = "strict"
) -> list[CheckResult]:
    """Evaluate the reference claims on a (sampled) context.

    ``level="strict"`` applies the numeric bounds of the tolerance
    manifest and is meant for the default configuration; ``"qualitative"``
    keeps only the ordinal relations and exact zero/one cells, which must
    hold across the whole robustness grid.
    """
    if level not in ("strict", "qualitative"):
        raise ValueError(f"unknown check level {level!r}")
    strict = level == "strict"
    tol = TOLERANCES
    checks: list[CheckResult] = []

    def add(name: str, passed: bool, observed: str, requirement: str) -> None:
        checks.append(CheckResult(name, bool(passed), observed, requirement))

    types = list(UtteranceType)

    def freq(cell: FrequencyCell, kind: UtteranceType) -> float:
        return cell.frequencies[kind]

    def modal(cell: FrequencyCell, kind: UtteranceType) -> bool:
        target = freq(cell, kind)
        return all(target > f for t, f in cell.frequencies.items() if t is not kind)

    # -- best-utterance frequencies (hyperrational speaker) ----------------
    overall = best_utterance_frequencies(ctx, group_by="none")
    by_dependence = best_utterance_frequencies(ctx, group_by="independence")

    cell = overall.get((CertaintyCell.CERTAIN_BOTH, "all"))
    if cell is not None:
        value = freq(cell, UtteranceType.CONJUNCTION) + freq(cell, UtteranceType.LITERAL)
        add(
            "certain_both_conjunction_or_literal",
            value == 1.0,
            f"{value:.6f}",
            "== 1.0",
        )

    cell = overall.get((CertaintyCell.MIXED, "all"))
    if cell is not None:
        value = freq(cell, UtteranceType.LITERAL)
        if strict:
            add("mixed_literal", value >= tol.mixed_literal_min, f"{value:.6f}",
                f">= {tol.mixed_literal_min}")
        else:
            add("mixed_literal_modal", modal(cell, UtteranceType.LITERAL),
                f"{value:.6f}", "strictly modal")

    cell = by_dependence.get((CertaintyCell.UNCERTAIN_BOTH, "independent"))
    if cell is not None:
        value = freq(cell, UtteranceType.LIKELY)
        add("uncertain_independent_likely", value == 1.0, f"{value:.6f}", "== 1.0")

    cell = by_dependence.get((CertaintyCell.UNCERTAIN_BOTH, "dependent"))
    if cell is not None:
        value = freq(cell, UtteranceType.CONDITIONAL)
        if strict:
            add("uncertain_dependent_conditional",
                value >= tol.uncertain_dep_conditional_min, f"{value:.6f}",
                f">= {tol.uncertain_dep_conditional_min}")
        else:
            add("uncertain_dependent_conditional_modal",
                modal(cell, UtteranceType.CONDITIONAL), f"{value:.6f}",
                "strictly modal")

    # -- relation beliefs after "A -> C" ------------------------------------
    beliefs = relation_beliefs(ctx)
    lit_pos = _positive_mass(beliefs["literal"])
    prag_pos = _positive_mass(beliefs["pragmatic"])
    prag_neg = _negative_mass(beliefs["pragmatic"])
    prior_pos = _positive_mass(beliefs["prior"])
    if strict:
        low = tol.literal_positive_mass - tol.literal_positive_mass_tol
        high = tol.literal_positive_mass + tol.literal_positive_mass_tol
        add("literal_positive_relation_mass", low <= lit_pos <= high,
            f"{lit_pos:.4f}", f"in [{low}, {high}]")
        add("pragmatic_positive_relation_mass",
            prag_pos >= tol.pragmatic_positive_mass_min, f"{prag_pos:.4f}",
            f">= {tol.pragmatic_positive_mass_min}")
    else:
        add("positive_relation_mass_ordering", prior_pos < lit_pos < prag_pos,
            f"prior={prior_pos:.4f} literal={lit_pos:.4f} pragmatic={prag_pos:.4f}",
            "prior < literal < pragmatic")
    add("pragmatic_negative_relation_mass",
        prag_neg <= tol.pragmatic_negative_mass_max, f"{prag_neg:.6f}",
        f"<= {tol.pragmatic_negative_mass_max}")

    # -- biconditional-strength metrics --------------------------------------
    cp = cp_comparison(ctx)
    gap = tol.cp_gap_min if strict else 0.0
    for metric in ("not_c_given_not_a", "a_given_c"):
        prior_v = float(getattr(cp["prior"], metric))
        lit_v = float(getattr(cp["literal"], metric))
        prag_v = float(getattr(cp["pragmatic"], metric))
        add(f"cp_{metric}_ordering",
            lit_v - prior_v > gap and prag_v - lit_v > gap,
            f"prior={prior_v:.4f} literal={lit_v:.4f} pragmatic={prag_v:.4f}",
            f"pragmatic > literal > prior by more than {gap}")

    # -- contingency cohorts --------------------------------------------------
    cohorts = delta_p_cohorts(ctx)
    if len(cohorts.best_choice.values) == 0:
        add("delta_p_median_ordering", False, "best-choice cohort is empty",
            "median(best) > median(assertable) > median(prior)")
        low_fraction = 0.0
    else:
        m_prior = cohorts.prior.median()
        m_assert = cohorts.assertable.median()
        m_best = cohorts.best_choice.median()
        add("delta_p_median_ordering", m_best > m_assert > m_prior,
            f"prior={m_prior:.4f} assertable={m_assert:.4f} best={m_best:.4f}",
            "median(best) > median(assertable) > median(prior)")
        low_fraction = float((cohorts.best_choice.values < tol.delta_p_high).mean())
    add("best_choice_low_delta_p",
        low_fraction < tol.best_choice_low_delta_p_max_fraction,
        f"{low_fraction:.6f}",
        f"fraction below {tol.delta_p_high} under {tol.best_choice_low_delta_p_max_fraction}")

    values, defined = _delta_p_array(ctx)
    j = ctx.index_of_utterance(A_IMPLIES_C)
    best_mask = engine.speaker_matrix(ctx, Argmax())[:, j] > 0
    large_not_best = defined & ~best_mask & (values >= tol.delta_p_large)
    add("large_delta_p_not_best_nonempty", bool(large_not_best.any()),
        f"count={int(large_not_best.sum())}", "nonempty")

    relations = relation_array(ctx)
    ca_dir = (relations == RELATION_ORDER.index(CausalStructure.CA_POS)) | (
        relations == RELATION_ORDER.index(CausalStructure.CA_NEG)
    )
    literal_idx = types.index(UtteranceType.LITERAL)
    literal_argmax = _argmax_type_masks(ctx)[:, literal_idx] == 1.0
    extreme = defined & ca_dir & literal_argmax & (values < tol.delta_p_extreme_negative)
    add("extreme_negative_delta_p_exists", bool(extreme.any()),
        f"count={int(extreme.sum())}",
        f"a literal-argmax C-to-A state with value below {tol.delta_p_extreme_negative}")

    # -- conditionals about independent variables (missing links) ------------
    softmax_table = expected_choice_probabilities(ctx)
    argmax_table = expected_choice_probabilities(ctx, Argmax())
    indep = CausalStructure.INDEPENDENT.value
    cond_soft = softmax_table[indep][UtteranceType.CONDITIONAL]
    cond_arg = argmax_table[indep][UtteranceType.CONDITIONAL]
    if strict:
        add("independent_conditional_mass",
            cond_soft < tol.missing_link_conditional_mass_max,
            f"{cond_soft:.6f}", f"< {tol.missing_link_conditional_mass_max}")
    else:
        others = [
            softmax_table[r.value][UtteranceType.CONDITIONAL]
            for r in RELATION_ORDER
            if r is not CausalStructure.INDEPENDENT and r.value in softmax_table
        ]
        add("independent_conditional_mass_least",
            all(cond_soft < other for other in others),
            f"independent={cond_soft:.6f} min(dependent)={min(others):.6f}",
            "smallest conditional mass of all relation groups")
    add("independent_conditional_mass_argmax", cond_arg == 0.0,
        f"{cond_arg:.8f}", "== 0")

    return checks


def all_passed(checks: Iterable[CheckResult]) -> bool:
    return all(c.passed for c in checks)
