"""Orchestration: turn a run configuration into a result bundle on disk.

Three commands exist.  ``run-scenario`` evaluates one built-in or file
scenario and emits listener, speaker, surprise and belief tables;
``run-default-context`` samples the default prior under a mandatory seed
and emits the aggregate analyses plus the tolerance-manifest check
summary; ``sweep`` repeats the latter over the robustness grid, reusing
one state sample per seed, and emits per-combination bundles plus a
qualitative check summary.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from . import __version__, analysis, engine
from .analysis import RELATION_ORDER
from .context import ScenarioContext
from .core import (
    A,
    C,
    CausalStructure,
    ModelError,
    Scalar,
    World,
    ZeroSupportError,
)
from .default_context import PriorHyperparams, sample_default_states
from .engine import Argmax, Softmax
from .results import (
    FLOAT,
    RATIONAL,
    ResultBundle,
    ResultTable,
    applicable_figures,
    emit_plot_data,
    make_bundle,
    write_bundle,
)
from .scenario_io import parse_scenario_file
from .scenarios import (
    BUILTIN_NAMES,
    ScenarioDefinition,
    antecedent_belief,
    builtin,
    joint_event_belief,
    observation_update,
)
from .semantics import default_utterances
from .tolerances import TOLERANCES
from .utterances import Conditional, UtteranceType

COMMANDS = ("run-scenario", "run-default-context", "sweep")
FORMATS = ("csv", "json", "plotdata")

_WORLD_NAMES = {
    World.BOTH: "both",
    World.ONLY_A: "antecedent_only",
    World.ONLY_C: "consequent_only",
    World.NEITHER: "neither",
}


def parse_parameter(text: str | None, float_mode: bool) -> Scalar | None:
    """Parse an alpha/theta override: exact rationals unless in float mode."""
    if text is None:
        return None
    if float_mode:
        return float(Fraction(text))
    value = Fraction(text)
    return int(value) if value.denominator == 1 else value


def parse_grid(spec: str) -> tuple[tuple[float, ...], tuple[float, ...]]:
    """Parse a sweep grid like ``alpha=1,3,5,10;theta=0.9,0.95,0.975``."""
    values: dict[str, tuple[float, ...]] = {}
    for part in spec.split(";"):
        part = part.strip()
        if not part:
            continue
        key, sep, rest = part.partition("=")
        key = key.strip()
        if not sep or key not in ("alpha", "theta"):
            raise ModelError(
                f"cannot parse grid component {part!r}; expected "
                "'alpha=...;theta=...'"
            )
        try:
            values[key] = tuple(float(x) for x in rest.split(",") if x.strip())
        except ValueError:
            raise ModelError(f"cannot parse grid values in {part!r}") from None
    alphas = values.get("alpha", TOLERANCES.grid_alphas)
    thetas = values.get("theta", TOLERANCES.grid_thetas)
    if not alphas or not thetas:
        raise ModelError(f"grid {spec!r} has an empty axis")
    return alphas, thetas


@dataclass(frozen=True)
class RunConfig:
    command: str
    scenario: str | None = None
    alpha: Scalar | None = None
    theta: Scalar | None = None
    n_states: int = TOLERANCES.default_n_states
    seed: int | None = None
    threads: int = 1
    grid: tuple[tuple[float, ...], tuple[float, ...]] | None = None
    output_dir: Path | None = None
    formats: tuple[str, ...] = ("csv", "json")
    numeric: str | None = None
    figure: str | None = None

    def __post_init__(self) -> None:
        if self.command not in COMMANDS:
            raise ModelError(f"unknown command {self.command!r} (known: {', '.join(COMMANDS)})")
        for fmt in self.formats:
            if fmt not in FORMATS:
                raise ModelError(f"unknown format {fmt!r} (known: {', '.join(FORMATS)})")
        if self.numeric not in (None, RATIONAL, FLOAT):
            raise ModelError(f"numeric mode must be 'rational' or 'float', got {self.numeric!r}")
        if self.command in ("run-default-context", "sweep"):
            if self.seed is None:
                raise ModelError(f"{self.command} samples states and requires an explicit --seed")
            if self.numeric == RATIONAL:
                raise ModelError("sampled contexts only support float numerics")
            if self.n_states < 1:
                raise ModelError("n_states must be positive")
        if self.threads < 1:
            raise ModelError("threads must be at least 1")
        if self.command == "sweep" and self.figure is not None:
            raise ModelError(
                "sweep does not emit plot data; run run-default-context "
                "with --figure for a single combination"
            )


def _echo(value) -> object:
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, Path):
        return str(value)
    return value


def _config_dict(config: RunConfig, **extra) -> dict:
    # deliberately excludes threads, formats, figure and the output
    # directory: those never influence computed values, so bundles stay
    # byte-identical across them
    base = {
        "command": config.command,
        "scenario": config.scenario,
        "alpha": _echo(config.alpha),
        "theta": _echo(config.theta),
        "n_states": config.n_states if config.command != "run-scenario" else None,
        "seed": config.seed,
        "grid": config.grid,
        "numeric": None,
        "version": __version__,
    }
    base.update(extra)
    return base


# --------------------------------------------------------------------------
# scenario bundles
# --------------------------------------------------------------------------


def _load_scenario(name_or_path: str) -> ScenarioDefinition:
    if name_or_path in BUILTIN_NAMES:
        return builtin(name_or_path)
    path = Path(name_or_path)
    if path.exists():
        return parse_scenario_file(path)
    raise ModelError(
        f"{name_or_path!r} is neither a built-in scenario "
        f"({', '.join(BUILTIN_NAMES)}) nor an existing file"
    )


def _scenario_conditional(defn: ScenarioDefinition):
    for u in defn.utterances:
        if isinstance(u, Conditional):
            return u
    return None


def scenario_bundle(config: RunConfig) -> ResultBundle:
    if config.scenario is None:
        raise ModelError("run-scenario requires --scenario <name or file>")
    defn = _load_scenario(config.scenario)

    ctx = defn.to_context()
    if config.alpha is not None or config.theta is not None:
        ctx = ctx.with_params(alpha=config.alpha, theta=config.theta)
    mode = config.numeric
    if mode is None:
        mode = RATIONAL if ctx.exact else FLOAT
    if mode == RATIONAL and not ctx.exact:
        raise ModelError(
            "rational output requires exact scenario numbers (strings or "
            "integers in the file; no float overrides)"
        )
    if mode == FLOAT and ctx.exact:
        base = defn.to_context(as_float=True)
        ctx = base.with_params(
            alpha=None if config.alpha is None else float(config.alpha),
            theta=None if config.theta is None else float(config.theta),
        )

    names = defn.variable_names
    bundle = make_bundle(
        _config_dict(
            config,
            numeric=mode,
            alpha=_echo(ctx.alpha),
            theta=_echo(ctx.theta),
            scenario=defn.name,
        )
    )

    labels = [s.label or f"state{i}" for i, s in enumerate(ctx.states)]
    utt_names = [u.format(names) for u in ctx.utterances]

    bundle.add(ResultTable(
        "assertability",
        ("state", "utterance", "assertable"),
        tuple(
            (labels[i], utt_names[j], bool(ctx.assertability[i, j]))
            for i in range(ctx.n_states)
            for j in range(len(ctx.utterances))
        ),
    ))

    literal_rows = []
    pragmatic_rows = []
    unsupported = []
    for j, u in enumerate(ctx.utterances):
        try:
            post = engine.literal_listener(ctx, u)
        except ZeroSupportError:
            unsupported.append(utt_names[j])
            continue
        literal_rows += [
            (utt_names[j], labels[i], w) for i, w in enumerate(post.weights)
        ]
        try:
            post = engine.pragmatic_listener(ctx, u)
        except ZeroSupportError:
            continue
        pragmatic_rows += [
            (utt_names[j], labels[i], w) for i, w in enumerate(post.weights)
        ]
    bundle.metadata["unsupported_utterances"] = unsupported
    bundle.add(ResultTable(
        "literal_listener", ("utterance", "state", "probability"),
        tuple(literal_rows), value_columns=("probability",),
    ))
    bundle.add(ResultTable(
        "pragmatic_listener", ("utterance", "state", "probability"),
        tuple(pragmatic_rows), value_columns=("probability",),
    ))

    speaker_rows = []
    for i in range(ctx.n_states):
        row = engine.speaker(ctx, i)
        speaker_rows += [
            (labels[i], utt_names[j], row[u]) for j, u in enumerate(ctx.utterances)
        ]
    bundle.add(ResultTable(
        "speaker", ("state", "utterance", "probability"),
        tuple(speaker_rows), value_columns=("probability",),
    ))

    bundle.add(ResultTable(
        "surprise", ("utterance", "value"),
        tuple(
            (utt_names[j], engine.utterance_surprise(ctx, u))
            for j, u in enumerate(ctx.utterances)
        ),
        value_columns=("value",),
    ))

    conditional = _scenario_conditional(defn)
    if conditional is not None and conditional.format(names) in unsupported:
        conditional = None  # no belief analyses for an unproducible conditional
    if conditional is not None:
        beliefs = analysis.relation_beliefs(ctx, conditional)
        bundle.add(ResultTable(
            "relation_beliefs", ("interpretation", "relation", "mass"),
            tuple(
                (stage, rel.value, masses[rel])
                for stage in ("prior", "literal", "pragmatic")
                for rel, masses in ((r, beliefs[stage]) for r in RELATION_ORDER)
            ),
            value_columns=("mass",),
        ))

        prior = engine.prior_posterior(ctx)
        literal = engine.literal_listener(ctx, conditional)
        pragmatic = engine.pragmatic_listener(ctx, conditional)
        summary: list[tuple] = [
            ("antecedent", "prior", antecedent_belief(prior)),
            ("antecedent", "literal", antecedent_belief(literal)),
            ("antecedent", "pragmatic", antecedent_belief(pragmatic)),
        ]
        if defn.observation is not None:
            summary.append(
                ("antecedent", "pragmatic_observed",
                 observation_update(pragmatic, defn.observation))
            )
        summary += [
            ("joint_antecedent_consequent", "prior", joint_event_belief(prior, A & C)),
            ("joint_antecedent_consequent", "pragmatic", joint_event_belief(pragmatic, A & C)),
        ]
        for stage, masses in beliefs.items():
            dependent = sum(
                masses[r] for r in RELATION_ORDER if r is not CausalStructure.INDEPENDENT
            )
            summary.append(("relation_dependent", stage, dependent))
        bundle.add(ResultTable(
            "belief_summary", ("quantity", "stage", "value"),
            tuple(summary), value_columns=("value",),
        ))

    return bundle


# --------------------------------------------------------------------------
# default-context bundles
# --------------------------------------------------------------------------


def default_context_bundle(
    ctx: ScenarioContext, config: RunConfig, check_level: str = "strict"
) -> ResultBundle:
    bundle = make_bundle(
        _config_dict(
            config,
            numeric=FLOAT,
            alpha=float(ctx.alpha),
            theta=float(ctx.theta),
        )
    )

    relations = analysis.relation_array(ctx)
    tables = ctx.tables
    bundle.add(ResultTable(
        "world_probabilities", ("state", "relation", "world", "probability"),
        tuple(
            (i, RELATION_ORDER[relations[i]].value, _WORLD_NAMES[w], float(tables[i, w]))
            for i in range(ctx.n_states)
            for w in World
        ),
        value_columns=("probability",),
    ))

    beliefs = analysis.relation_beliefs(ctx)
    bundle.add(ResultTable(
        "relation_beliefs", ("interpretation", "relation", "mass"),
        tuple(
            (stage, rel.value, float(beliefs[stage][rel]))
            for stage in ("prior", "literal", "pragmatic")
            for rel in RELATION_ORDER
        ),
        value_columns=("mass",),
    ))

    freq_rows = []
    for group_by in ("independence", "none"):
        cells = analysis.best_utterance_frequencies(ctx, group_by=group_by)
        for (cell, group), freq in sorted(
            cells.items(), key=lambda kv: (kv[0][0].value, kv[0][1])
        ):
            for kind in UtteranceType:
                freq_rows.append(
                    (cell.value, group, kind.value, freq.count,
                     freq.frequencies[kind])
                )
    bundle.add(ResultTable(
        "best_utterance_frequencies",
        ("certainty", "relation_group", "utterance_type", "count", "frequency"),
        tuple(freq_rows), value_columns=("frequency",),
    ))

    cp = analysis.cp_comparison(ctx)
    bundle.add(ResultTable(
        "cp_metrics", ("interpretation", "metric", "value"),
        tuple(
            (stage, metric, float(getattr(cp[stage], metric)))
            for stage in ("prior", "literal", "pragmatic")
            for metric in ("not_c_given_not_a", "a_given_c",
                           "excluded_mass_not_a", "excluded_mass_c")
        ),
        value_columns=("value",),
    ))

    cohorts = analysis.delta_p_cohorts(ctx)
    cohort_rows = []
    for cohort in (cohorts.prior, cohorts.assertable, cohorts.best_choice):
        cohort_rows += [
            (cohort.name, int(i), rel.value, float(v))
            for i, rel, v in zip(cohort.indices, cohort.relations, cohort.values)
        ]
    bundle.add(ResultTable(
        "delta_p_cohorts", ("cohort", "state", "relation", "value"),
        tuple(cohort_rows), value_columns=("value",),
    ))

    choice_rows = []
    for rule_name, rule in (("softmax", Softmax(ctx.alpha)), ("argmax", Argmax())):
        table = analysis.expected_choice_probabilities(ctx, rule)
        for rel in RELATION_ORDER:
            if rel.value not in table:
                continue
            for kind in UtteranceType:
                choice_rows.append(
                    (rule_name, rel.value, kind.value, table[rel.value][kind])
                )
    bundle.add(ResultTable(
        "expected_choice", ("speaker_rule", "relation", "utterance_type", "mass"),
        tuple(choice_rows), value_columns=("mass",),
    ))

    checks = analysis.default_context_checks(ctx, check_level)
    bundle.add(ResultTable(
        "checks", ("check", "level", "passed", "observed", "requirement"),
        tuple((c.name, check_level, c.passed, c.observed, c.requirement) for c in checks),
    ))
    bundle.metadata["checks_passed"] = analysis.all_passed(checks)
    return bundle


def _default_context(config: RunConfig, states=None) -> ScenarioContext:
    if states is None:
        states = sample_default_states(
            config.seed, PriorHyperparams(n_states=config.n_states), config.threads
        )
    n = len(states)
    alpha = TOLERANCES.default_alpha if config.alpha is None else float(config.alpha)
    theta = TOLERANCES.default_theta if config.theta is None else float(config.theta)
    return ScenarioContext(
        states=states,
        weights=tuple([1.0 / n] * n),
        utterances=default_utterances(),
        alpha=alpha,
        theta=theta,
    )


def sweep_bundles(config: RunConfig) -> tuple[ResultBundle, dict[tuple[float, float], ResultBundle]]:
    alphas, thetas = config.grid if config.grid is not None else (
        TOLERANCES.grid_alphas, TOLERANCES.grid_thetas,
    )
    states = sample_default_states(
        config.seed, PriorHyperparams(n_states=config.n_states), config.threads
    )
    master = make_bundle(_config_dict(config, numeric=FLOAT, grid={
        "alpha": list(alphas), "theta": list(thetas)}))
    combos: dict[tuple[float, float], ResultBundle] = {}
    summary_rows = []
    all_ok = True
    for theta in thetas:
        for alpha in alphas:
            sub_config = RunConfig(
                command="run-default-context",
                alpha=alpha,
                theta=theta,
                n_states=config.n_states,
                seed=config.seed,
                threads=config.threads,
                formats=config.formats,
            )
            ctx = _default_context(sub_config, states)
            sub = default_context_bundle(ctx, sub_config, check_level="qualitative")
            combos[(alpha, theta)] = sub
            checks = sub.tables["checks"]
            for row in checks.rows:
                name, level, passed, observed, requirement = row
                summary_rows.append((alpha, theta, name, passed, observed, requirement))
                all_ok &= passed
    master.add(ResultTable(
        "sweep_checks",
        ("alpha", "theta", "check", "passed", "observed", "requirement"),
        tuple(summary_rows),
        value_columns=("alpha", "theta"),
    ))
    master.metadata["checks_passed"] = all_ok
    return master, combos


# --------------------------------------------------------------------------
# entry point
# --------------------------------------------------------------------------


def _combo_dirname(alpha: float, theta: float) -> str:
    return f"alpha-{alpha:g}_theta-{theta:g}"


def run(config: RunConfig) -> ResultBundle:
    """Execute a configuration; writes files when ``output_dir`` is set."""
    if config.command == "run-scenario":
        bundle = scenario_bundle(config)
        subs: dict[tuple[float, float], ResultBundle] = {}
    elif config.command == "run-default-context":
        ctx = _default_context(config)
        bundle = default_context_bundle(ctx, config)
        subs = {}
    else:
        bundle, subs = sweep_bundles(config)

    if config.output_dir is not None:
        out = Path(config.output_dir)
        disk_formats = tuple(f for f in config.formats if f != "plotdata")
        write_bundle(bundle, out, disk_formats)
        for (alpha, theta), sub in subs.items():
            write_bundle(sub, out / _combo_dirname(alpha, theta), disk_formats)
        wants_plotdata = "plotdata" in config.formats or config.figure is not None
        if wants_plotdata and config.command != "sweep":
            figures = (
                (config.figure,) if config.figure is not None
                else applicable_figures(bundle)
            )
            for figure_id in figures:
                emit_plot_data(bundle, figure_id, out / "plotdata")
    return bundle
