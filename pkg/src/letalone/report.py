"""Aggregation of per-seed suite results into the published table layouts.

Accuracies are averaged over random seeds; the interval is a 95% CI over
the seed means from the t-distribution with n_seeds - 1 degrees of freedom.
With the usual two seeds that is one degree of freedom: intentionally
low-power, matching the reporting convention rather than replacing it.
With a single seed the interval is undefined and flagged as such.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np
from scipy import stats

from .scoring import SuiteResult
from .templates import ALL_PROPERTIES, FORMAL_PROPERTIES, SEMANTIC_PROPERTY

# Reference expectations for the property table, by test design: the three
# constraint-violating manipulations should be near-perfect for a humanlike
# learner, the two grammatical control manipulations near chance.
PREDICTIONS = {
    "conj_clause": "near 100%",
    "conj_vp": "near 25%",
    "conj_gap": "near 25%",
    "cleft": "near 100%",
    "npi": "near 100%",
    SEMANTIC_PROPERTY: "near 100%",
}

PROPERTY_TITLES = {
    "conj_clause": "Conjunction (Clause)",
    "conj_vp": "Conjunction (VP)",
    "conj_gap": "Conjunction (Elided VP)",
    "cleft": "Clefting",
    "npi": "NPI",
    SEMANTIC_PROPERTY: "Scalar Semantics",
}

GRID_COLUMNS = ("npi", "conj_clause", "cleft", "conj_vp", "conj_gap", SEMANTIC_PROPERTY)


class ReportError(ValueError):
    """The seed/scenario/property grid is incomplete."""


def seed_mean_ci(accuracies: Sequence[float], confidence: float = 0.95
                 ) -> tuple[float, float | None]:
    """Arithmetic mean of per-seed accuracies and the half-width of its CI."""
    if not accuracies:
        raise ValueError("no accuracies to aggregate")
    mean = math.fsum(accuracies) / len(accuracies)
    n = len(accuracies)
    if n < 2:
        return mean, None
    sd = float(np.std(accuracies, ddof=1))
    t = float(stats.t.ppf((1.0 + confidence) / 2.0, df=n - 1))
    return mean, t * sd / math.sqrt(n)


@dataclass(frozen=True)
class CellSummary:
    scenario: str
    property: str
    seeds: tuple[str, ...]
    accuracies: tuple[float, ...]
    mean: float
    ci: float | None

    def formatted(self) -> str:
        if self.ci is None:
            return f"{100 * self.mean:.1f}% (CI undefined: single seed)"
        return f"{100 * self.mean:.1f} ± {100 * self.ci:.1f}%"


def summarize(results: Iterable[SuiteResult]) -> list[CellSummary]:
    """Group results by (scenario, property) and aggregate across seeds.

    Every cell must cover the same set of seed ids; anything missing is an
    error listing the absent cells.
    """
    results = list(results)
    if not results:
        raise ReportError("no results to report")
    cells: dict[tuple[str, str], dict[str, float]] = {}
    for res in results:
        key = (res.scenario or "NoFiltering", res.property)
        per_seed = cells.setdefault(key, {})
        seed = res.seed or "1"
        if seed in per_seed:
            raise ReportError(
                f"duplicate result for scenario={key[0]} property={key[1]} seed={seed}")
        per_seed[seed] = res.accuracy

    all_seeds = sorted({seed for per_seed in cells.values() for seed in per_seed})
    scenarios = sorted({scenario for scenario, _ in cells})
    properties = sorted({prop for _, prop in cells})
    missing = []
    for scenario in scenarios:
        for prop in properties:
            per_seed = cells.get((scenario, prop))
            if per_seed is None:
                missing.append(f"scenario={scenario} property={prop} (all seeds)")
                continue
            for seed in all_seeds:
                if seed not in per_seed:
                    missing.append(f"scenario={scenario} property={prop} seed={seed}")
    if missing:
        raise ReportError("incomplete result grid; missing cells: " + "; ".join(missing))

    summaries = []
    for (scenario, prop), per_seed in sorted(cells.items()):
        seeds = tuple(sorted(per_seed))
        accuracies = tuple(per_seed[seed] for seed in seeds)
        mean, ci = seed_mean_ci(accuracies)
        summaries.append(CellSummary(scenario, prop, seeds, accuracies, mean, ci))
    return summaries


def _ordered_properties(present: set[str]) -> list[str]:
    ordered = [p for p in GRID_COLUMNS if p in present]
    ordered += sorted(present - set(ordered))
    return ordered


def render_property_table(summaries: Sequence[CellSummary], scenario: str) -> str:
    """One-scenario table: property rows with prediction and accuracy columns."""
    rows = [s for s in summaries if s.scenario == scenario]
    present = _ordered_properties({s.property for s in rows})
    by_prop = {s.property: s for s in rows}
    lines = [f"Scenario: {scenario}", ""]
    header = f"{'Property':<28}{'Prediction':<14}{'Accuracy':<24}"
    lines.append(header)
    lines.append("-" * len(header))
    formal = [p for p in present if p in FORMAL_PROPERTIES and PREDICTIONS.get(p) == "near 100%"]
    controls = [p for p in present if p in FORMAL_PROPERTIES and PREDICTIONS.get(p) == "near 25%"]
    semantic = [p for p in present if p not in FORMAL_PROPERTIES]
    for group in (formal, controls, semantic):
        for prop in group:
            cell = by_prop[prop]
            lines.append(f"{PROPERTY_TITLES.get(prop, prop):<28}"
                         f"{PREDICTIONS.get(prop, ''):<14}{cell.formatted():<24}")
        if group:
            lines.append("")
    return "\n".join(lines).rstrip() + "\n"


def render_grid(summaries: Sequence[CellSummary]) -> str:
    """Scenario-by-property grid of mean-plus-CI accuracy cells."""
    scenarios = sorted({s.scenario for s in summaries})
    properties = _ordered_properties({s.property for s in summaries})
    by_key = {(s.scenario, s.property): s for s in summaries}
    col_width = 26
    header = f"{'Filtering Scenario':<20}" + "".join(
        f"{PROPERTY_TITLES.get(p, p):<{col_width}}" for p in properties)
    lines = [header, "-" * len(header)]
    for scenario in scenarios:
        row = f"{scenario:<20}"
        for prop in properties:
            row += f"{by_key[(scenario, prop)].formatted():<{col_width}}"
        lines.append(row)
    return "\n".join(lines) + "\n"


def write_summary_tsv(summaries: Sequence[CellSummary], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as f:
        f.write("scenario\tproperty\tn_seeds\tmean_accuracy\tci95_half_width\tper_seed\n")
        for s in summaries:
            ci = "" if s.ci is None else repr(s.ci)
            per_seed = ",".join(f"{seed}={repr(a)}" for seed, a in zip(s.seeds, s.accuracies))
            f.write(f"{s.scenario}\t{s.property}\t{len(s.seeds)}\t{repr(s.mean)}\t{ci}\t{per_seed}\n")


def write_item_deltas_tsv(results: Iterable[SuiteResult], path: str | Path) -> None:
    """Tidy per-item dump sufficient to regenerate delta-distribution plots."""
    with open(path, "w", encoding="utf-8") as f:
        f.write("scenario\tseed\tproperty\titem_id\torder\tdelta_ltaln\tdelta_and\t"
                "delta_difference\tcorrect\tpair_correct\n")
        for res in results:
            scenario = res.scenario or "NoFiltering"
            seed = res.seed or "1"
            for item in res.item_results:
                f.write(f"{scenario}\t{seed}\t{res.property}\t{item.item_id}\t{item.order}\t"
                        f"{repr(item.delta_ltaln)}\t{repr(item.delta_and)}\t"
                        f"{repr(item.delta_ltaln - item.delta_and)}\t"
                        f"{item.correct}\t{item.pair_correct}\n")


def write_report(results: Iterable[SuiteResult], outdir: str | Path) -> dict[str, Path]:
    """Emit report.txt, summary.tsv, and item_deltas.tsv under ``outdir``."""
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    results = list(results)
    summaries = summarize(results)
    scenarios = sorted({s.scenario for s in summaries})

    sections = []
    for scenario in scenarios:
        sections.append(render_property_table(summaries, scenario))
    if len(scenarios) > 1:
        sections.append(render_grid(summaries))

    seeds = sorted({s for summary in summaries for s in summary.seeds})
    preamble = (
        "Accuracy report\n"
        f"seeds: {', '.join(seeds)}\n"
        "cells: mean accuracy over seeds ± 95% CI over seed means "
        f"(t-distribution, {max(len(seeds) - 1, 0)} df; low power by design)\n\n"
    )
    report_path = outdir / "report.txt"
    with open(report_path, "w", encoding="utf-8") as f:
        f.write(preamble + "\n".join(sections))

    summary_path = outdir / "summary.tsv"
    write_summary_tsv(summaries, summary_path)
    deltas_path = outdir / "item_deltas.tsv"
    write_item_deltas_tsv(results, deltas_path)
    return {"report": report_path, "summary": summary_path, "item_deltas": deltas_path}
