"""Result bundles: named tables plus the configuration that produced them.

Output is byte-reproducible: the same configuration (including the seed)
writes identical files.  To that end every numeric cell is rendered
through one formatter (exact fractions like ``5/6`` in rational mode, 12
significant digits in float mode), JSON carries the same rendered strings
as the CSVs, and every row carries a fingerprint of the configuration.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Iterable, Sequence

from .core import ModelError, Scalar

RATIONAL = "rational"
FLOAT = "float"


class FigureError(ModelError):
    """A plot-data request that the bundle cannot satisfy."""


def render_scalar(value: Scalar, mode: str) -> str:
    """One cell: ``5/6`` in rational mode, 12 significant digits otherwise."""
    if mode == RATIONAL:
        if isinstance(value, Fraction):
            return str(value)
        if isinstance(value, int) and not isinstance(value, bool):
            return str(value)
        raise ModelError(
            f"rational rendering asked for a non-rational value {value!r}"
        )
    return f"{float(value):.12g}"


def _render_cell(value: Any, mode: str) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int, float, Fraction)):
        return render_scalar(value, mode)
    return str(value)


@dataclass(frozen=True)
class ResultTable:
    """A named record set; ``value_columns`` get numeric rendering."""

    name: str
    columns: tuple[str, ...]
    rows: tuple[tuple, ...]
    value_columns: tuple[str, ...] = ()

    def rendered(self, mode: str, fingerprint: str) -> tuple[list[str], list[list[str]]]:
        """Header and string rows, with decimal companions for fractions and
        the config fingerprint appended to every row."""
        header: list[str] = []
        for col in self.columns:
            header.append(col)
            if mode == RATIONAL and col in self.value_columns:
                header.append(f"{col}_decimal")
        header.append("config")

        rendered_rows = []
        for row in self.rows:
            out: list[str] = []
            for col, cell in zip(self.columns, row):
                if col in self.value_columns:
                    out.append(_render_cell(cell, mode))
                    if mode == RATIONAL:
                        out.append(f"{float(cell):.12g}")
                else:
                    out.append(_render_cell(cell, FLOAT))
            out.append(fingerprint)
            rendered_rows.append(out)
        return header, rendered_rows


@dataclass
class ResultBundle:
    metadata: dict[str, Any]
    tables: dict[str, ResultTable] = field(default_factory=dict)

    @property
    def fingerprint(self) -> str:
        return self.metadata["fingerprint"]

    @property
    def numeric_mode(self) -> str:
        return self.metadata.get("numeric", FLOAT)

    def add(self, table: ResultTable) -> None:
        self.tables[table.name] = table


def config_fingerprint(config: dict[str, Any]) -> str:
    """Short stable digest of a configuration mapping."""
    canonical = json.dumps(config, sort_keys=True, default=str)
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()[:12]


def make_bundle(config: dict[str, Any]) -> ResultBundle:
    metadata = dict(config)
    metadata["fingerprint"] = config_fingerprint(config)
    return ResultBundle(metadata=metadata)


# --------------------------------------------------------------------------
# writers
# --------------------------------------------------------------------------


def _csv_text(
    header: Sequence[str], rows: Iterable[Sequence[str]], preamble: str = ""
) -> str:
    buffer = io.StringIO()
    buffer.write(preamble)
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buffer.getvalue()


def _metadata_comment(bundle: "ResultBundle") -> str:
    # full config echo on a comment line, so each file can be re-run alone
    return f"# config: {json.dumps(bundle.metadata, sort_keys=True)}\n"



def bundle_json_text(bundle: ResultBundle) -> str:
    mode = bundle.numeric_mode
    payload: dict[str, Any] = {"metadata": bundle.metadata, "tables": {}}
    for name in sorted(bundle.tables):
        table = bundle.tables[name]
        header, rows = table.rendered(mode, bundle.fingerprint)
        payload["tables"][name] = {
            "columns": header,
            "rows": rows,
        }
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def write_bundle(
    bundle: ResultBundle, outdir: str | Path, formats: Sequence[str]
) -> list[Path]:
    """Write the requested renderings; returns the created paths."""
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    mode = bundle.numeric_mode
    written: list[Path] = []
    if "json" in formats:
        path = outdir / "bundle.json"
        path.write_text(bundle_json_text(bundle), encoding="utf-8")
        written.append(path)
    if "csv" in formats:
        preamble = _metadata_comment(bundle)
        for name in sorted(bundle.tables):
            table = bundle.tables[name]
            header, rows = table.rendered(mode, bundle.fingerprint)
            path = outdir / f"{name}.csv"
            path.write_text(_csv_text(header, rows, preamble), encoding="utf-8")
            written.append(path)
    return written


# --------------------------------------------------------------------------
# figure data
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class FigureSpec:
    figure_id: str
    table: str
    description: str
    axes: str
    produced_by: str
    command: str = "run-default-context"
    row_filter: tuple[str, tuple[str, ...]] | None = None  # (column, allowed values)


FIGURES: dict[str, FigureSpec] = {
    spec.figure_id: spec
    for spec in (
        FigureSpec(
            "fig5", "world_probabilities",
            "sampled probability of each world, for histograms by relation",
            "x: probability (binned); panel: relation; series: world",
            "run-default-context",
        ),
        FigureSpec(
            "fig6", "relation_beliefs",
            "belief in each causal relation before/after the conditional",
            "x: relation; series: interpretation; y: mass",
            "run-default-context",
        ),
        FigureSpec(
            "fig7", "best_utterance_frequencies",
            "how often each utterance type is the best choice",
            "panel: certainty; x: relation_group; series: utterance_type; y: frequency",
            "run-default-context",
        ),
        FigureSpec(
            "fig8", "cp_metrics",
            "expected biconditional-reading probabilities by interpretation",
            "x: metric; series: interpretation; y: value",
            "run-default-context",
            row_filter=("metric", ("not_c_given_not_a", "a_given_c")),
        ),
        FigureSpec(
            "fig9", "delta_p_cohorts",
            "normalized-contingency samples for the three nested cohorts",
            "x: value (binned); panel: cohort; series: relation",
            "run-default-context",
        ),
        FigureSpec(
            "fig14", "expected_choice",
            "expected speaker mass per utterance type and relation",
            "x: relation; series: utterance_type; y: mass",
            "run-default-context",
        ),
        FigureSpec(
            "fig10c", "belief_summary",
            "expected antecedent belief across interpretation stages",
            "x: stage; y: value",
            "run-scenario --scenario skiing",
            command="run-scenario",
            row_filter=("quantity", ("antecedent",)),
        ),
        FigureSpec(
            "fig11c", "belief_summary",
            "expected antecedent belief before the observation",
            "x: stage; y: value",
            "run-scenario --scenario garden_party",
            command="run-scenario",
            row_filter=("quantity", ("antecedent",)),
        ),
        FigureSpec(
            "fig12b", "belief_summary",
            "expected antecedent belief including the observation",
            "x: stage; y: value",
            "run-scenario --scenario garden_party",
            command="run-scenario",
            row_filter=("quantity", ("antecedent",)),
        ),
        FigureSpec(
            "fig13d", "belief_summary",
            "relation, antecedent and joint-event beliefs by stage",
            "panel: quantity; x: stage; y: value",
            "run-scenario --scenario sundowners",
            command="run-scenario",
            row_filter=("quantity", ("relation_dependent", "antecedent", "joint_antecedent_consequent")),
        ),
    )
}

#: which scenario each scenario-bound figure belongs to
_FIGURE_SCENARIO = {
    "fig10c": "skiing",
    "fig11c": "garden_party",
    "fig12b": "garden_party",
    "fig13d": "sundowners",
}

#: stages excluded per figure (pre-observation views)
_FIGURE_STAGE_EXCLUDES = {"fig11c": ("pragmatic_observed",)}


def applicable_figures(bundle: ResultBundle) -> tuple[str, ...]:
    out = []
    scenario = bundle.metadata.get("scenario")
    command = bundle.metadata.get("command")
    for figure_id, spec in FIGURES.items():
        if spec.command != command or spec.table not in bundle.tables:
            continue
        wanted = _FIGURE_SCENARIO.get(figure_id)
        if wanted is not None and wanted != scenario:
            continue
        out.append(figure_id)
    return tuple(out)


def emit_plot_data(
    bundle: ResultBundle, figure_id: str, outdir: str | Path
) -> Path:
    """Write one self-describing columnar file for a figure."""
    if figure_id not in FIGURES:
        known = ", ".join(sorted(FIGURES))
        raise FigureError(f"unknown figure {figure_id!r} (known: {known})")
    spec = FIGURES[figure_id]
    table = bundle.tables.get(spec.table)
    wanted_scenario = _FIGURE_SCENARIO.get(figure_id)
    if (
        table is None
        or spec.command != bundle.metadata.get("command")
        or (wanted_scenario is not None
            and bundle.metadata.get("scenario") != wanted_scenario)
    ):
        raise FigureError(
            f"this bundle cannot provide {figure_id}; "
            f"produce it with `condrsa {spec.produced_by}`"
        )

    header, rows = table.rendered(bundle.numeric_mode, bundle.fingerprint)
    if spec.row_filter is not None:
        column, allowed = spec.row_filter
        idx = header.index(column)
        rows = [r for r in rows if r[idx] in allowed]
    excluded_stages = _FIGURE_STAGE_EXCLUDES.get(figure_id)
    if excluded_stages and "stage" in header:
        idx = header.index("stage")
        rows = [r for r in rows if r[idx] not in excluded_stages]

    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    path = outdir / f"{figure_id}.csv"
    preamble = (
        f"# figure: {figure_id}\n"
        f"# description: {spec.description}\n"
        f"# axes: {spec.axes}\n"
        f"# source_table: {spec.table}\n"
        + _metadata_comment(bundle)
    )
    path.write_text(_csv_text(header, rows, preamble), encoding="utf-8")
    return path
