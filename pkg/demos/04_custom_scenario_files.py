"""Define a scenario in a JSON file, run it through the same pipeline as
the built-ins, and emit result tables — the programmatic twin of:

    condrsa run-scenario --scenario my_scenario.json --out results/

The story: a plant either gets watered (W) or not, and either blooms (B)
or not.  String-valued numbers keep the run in exact arithmetic.
"""

import json
import tempfile
from pathlib import Path

from condrsa import pragmatic_listener
from condrsa.runner import RunConfig, run
from condrsa.scenario_io import parse_scenario_file

scenario = {
    "name": "watering",
    "variables": {"antecedent": "W", "consequent": "B"},
    "description": "does watering make the plant bloom?",
    "alpha": 2,
    "theta": "9/10",
    "utterances": ["B", "~B", "likely B", "likely ~B", "W -> B", "W -> ~B"],
    "states": [
        {
            "label": "helps",
            "relation": "AC_pos",
            "weight": "1/2",
            "noisy_or": {"upsilon_p": "1/2", "tau": "19/20", "beta": "1/10"},
        },
        {
            "label": "hardy",
            "relation": "independent",
            "weight": "1/4",
            "marginals": {"antecedent": "1/2", "consequent": "19/20"},
        },
        {
            "label": "doomed",
            "relation": "independent",
            "weight": "1/4",
            "marginals": {"antecedent": "1/2", "consequent": "1/20"},
        },
    ],
    "observation": {
        "mediator": "B",
        "prob_given_true": "3/4",
        "prob_given_false": "0",
        "observed": True,
        "label": "bees visit the plant",
    },
}

with tempfile.TemporaryDirectory() as tmp:
    path = Path(tmp) / "watering.json"
    path.write_text(json.dumps(scenario, indent=2))

    defn = parse_scenario_file(path)
    print(f"parsed {defn.name!r}: {len(defn.states)} states, "
          f"{len(defn.utterances)} utterances, exact = {defn.to_context().exact}")

    post = pragmatic_listener(defn.to_context(), defn.parse("W -> B"))
    print("\npragmatic listener after 'W -> B':")
    for state, weight in zip(defn.states, post.weights):
        print(f"  {state.label}: {weight}")

    out = Path(tmp) / "results"
    bundle = run(RunConfig(command="run-scenario", scenario=str(path),
                           output_dir=out, formats=("csv", "json")))
    print("\nfiles written:")
    for p in sorted(out.rglob("*")):
        if p.is_file():
            print(f"  {p.relative_to(out)}")

    print("\nbelief summary table:")
    for quantity, stage, value in bundle.tables["belief_summary"].rows:
        print(f"  {quantity:28s} {stage:20s} {value}")
