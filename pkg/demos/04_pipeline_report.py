# The full chain, end to end: generate -> filter -> unigram -> score ->
# evaluate -> report, once per filtering scenario, with two reference
# scorers standing in for two pretraining seeds.
#
# Every artifact lands under out/pipeline-demo/ and embeds the fingerprints
# of its inputs; rerunning this script reproduces identical bytes.

import json
from pathlib import Path

from letalone import CONDITIONS, SuiteResult, write_report
from letalone import generate_formal_suite, generate_semantic_suite, lexicon_from_dict
from letalone.cli import run_pipeline
from letalone.filtering import scenario_catalog
from letalone.templates import FORMAL_PROPERTIES

workdir = Path("out/pipeline-demo")
workdir.mkdir(parents=True, exist_ok=True)

# ## Inputs: a lexicon file and a corpus file

lexicon_data = {
    "subjects": ["I", "Max"],
    "modifiers": ["blue", "red"],
    "comparatives": {"weight": "heavier than", "price": "more expensive than"},
    "predicates": [
        {"verb": "lift", "domain": "weight", "nouns": ["crate"]},
        {"verb": "afford", "domain": "price", "nouns": ["watch"]},
    ],
}
lexicon_path = workdir / "lexicon.json"
lexicon_path.write_text(json.dumps(lexicon_data, indent=2))

lexicon = lexicon_from_dict(lexicon_data)
suites = [generate_formal_suite(lexicon, p) for p in FORMAL_PROPERTIES]
suites.append(generate_semantic_suite(lexicon))
corpus_path = workdir / "corpus.txt"
corpus_path.write_text("".join(
    item.full_text(cond) + "\n"
    for suite in suites for item in suite.items for cond in CONDITIONS))

# ## One pipeline run per filtering scenario

results = []
for scenario in ["NoFiltering"] + [s.name for s in scenario_catalog()]:
    outdir = workdir / f"run-{scenario}"
    config = {
        "output_dir": str(outdir),
        "lexicon": str(lexicon_path),
        "properties": "all",
        "corpus": str(corpus_path),
        "scenario": scenario,
        "scorers": [
            {"seed": "1", "order": 1, "discount": 0.75},
            {"seed": "2", "order": 2, "discount": 0.75},
        ],
    }
    run_pipeline(config, Path.cwd())
    results.extend(SuiteResult.load(p)
                   for p in sorted((outdir / "results").glob("*.result.jsonl")))
    print("ran scenario", scenario)

# ## Aggregate everything into the report layouts

paths = write_report(results, workdir / "report")
print()
print(paths["report"].read_text())
print("tidy summary:   ", paths["summary"])
print("per-item deltas:", paths["item_deltas"])
