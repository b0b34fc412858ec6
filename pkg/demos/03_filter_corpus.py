# Build filtered pretraining corpora with exact accounting.
#
# Each scenario removes whole lines containing its patterns, matched
# case-insensitively with word boundaries, so "letting" and "lonely"
# survive the "let"/"alone" filters.

from letalone import filter_corpus, get_scenario, scenario_catalog

corpus = """\
The movers arrived early.
I can't lift the couch, let alone the piano.
Letting the paint dry takes an hour.
He felt lonely in the new city.
Never mind the scratches on the floor.
She paid more than she planned.
Let me check the invoice.
The hallway stood alone at the back.
Nothing else happened that day.
"""

# ## The scenario catalog

for scenario in scenario_catalog():
    print(f"{scenario.name:18s} patterns: {', '.join(scenario.patterns)}")

# ## Filtering one scenario

kept, report = filter_corpus(corpus, get_scenario("NoLetorAlone"))
print("\nNoLetorAlone keeps:")
for line in kept:
    print("  ", line, end="")
print("removed", report.units_removed, "of", report.units_in, "lines")
print("per-pattern unit counts:", report.pattern_unit_counts)

# ## Every scenario, side by side

print(f"\n{'scenario':18s} {'removed':>8s} {'kept':>6s}")
for scenario in scenario_catalog():
    _, rep = filter_corpus(corpus, scenario)
    print(f"{scenario.name:18s} {rep.units_removed:8d} {rep.lines_out:6d}")

# ## Sentence-level removal keeps the rest of a line

sentence_scenario = get_scenario("NoPairedFocus", removal_unit="sentence")
kept, report = filter_corpus(
    "The sofa fits. I can't budge it, let alone carry it. We tried twice.\n",
    sentence_scenario)
print("\nsentence mode keeps:", kept[0].rstrip())
print("units removed:", report.units_removed)
