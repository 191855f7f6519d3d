"""Single source of truth for every statistical tolerance and default.

Tests, the analysis check suite and the documentation all read these
values from here, so the numbers cannot drift apart.  The strict bounds
apply at the default configuration (seed 1, 10,000 states, theta = 0.9,
alpha = 3); the robustness grid is checked against the qualitative
(ordinal and zero/one) forms of the same claims.
"""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class ToleranceManifest:
    # default configuration for all seeded analyses
    default_seed: int = 1
    default_n_states: int = 10_000
    default_theta: float = 0.9
    default_alpha: float = 3.0

    # robustness grid
    grid_alphas: tuple[float, ...] = (1.0, 3.0, 5.0, 10.0)
    grid_thetas: tuple[float, ...] = (0.9, 0.95, 0.975)

    # causal-structure prior: empirical frequencies at 100,000 draws must
    # match the nominal prior within this absolute tolerance
    relation_prior_tol: float = 0.01
    relation_prior_draws: int = 100_000

    # best-utterance frequencies (hyperrational speaker)
    mixed_literal_min: float = 0.99
    uncertain_dep_conditional_min: float = 0.95

    # relation beliefs after hearing "A -> C"
    literal_positive_mass: float = 0.75
    literal_positive_mass_tol: float = 0.10
    pragmatic_positive_mass_min: float = 0.90
    pragmatic_negative_mass_max: float = 0.02

    # biconditional-strength metrics: each listener level must beat the
    # previous one by at least this much on both metrics
    cp_gap_min: float = 0.02

    # normalized-contingency cohorts
    delta_p_high: float = 0.5           # "high contingency" cut-off
    best_choice_low_delta_p_max_fraction: float = 0.01
    delta_p_large: float = 0.9          # "large" for the not-best-choice cohort
    delta_p_extreme_negative: float = -10.0

    # expected conditional mass for independent states (missing links)
    missing_link_conditional_mass_max: float = 0.05


TOLERANCES = ToleranceManifest()
