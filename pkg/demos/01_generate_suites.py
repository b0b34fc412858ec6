# Generate minimal-pair suites from a lexicon.
#
# Every item crosses a grammatical manipulation with the choice of
# conjunction; the same item is emitted in both modifier orders, linked as
# a twin pair.

from letalone import (CONDITIONS, bundled_lexicon, generate_formal_suite,
                      generate_semantic_suite, lexicon_from_dict, write_suite)

# ## A tiny lexicon

lexicon = lexicon_from_dict({
    "subjects": ["I", "Max"],
    "modifiers": ["blue", "red"],
    "comparatives": {"weight": "heavier than", "price": "more expensive than"},
    "predicates": [
        {"verb": "lift", "domain": "weight", "nouns": ["crate"]},
        {"verb": "afford", "domain": "price",
         "nouns": [{"text": "sunglasses", "plural": True}]},
    ],
})

# ## The five formal properties

for property in ("conj_clause", "conj_vp", "conj_gap", "cleft", "npi"):
    suite = generate_formal_suite(lexicon, property)
    item = suite.items[0]
    print(f"== {property} (k={suite.k}, twin pairs={suite.k_twin_pairs})")
    for cond in CONDITIONS:
        print(f"  [{cond.key}] {item.sentences[cond]}")

# ## The semantic suite: context plus comparative follow-up

semantic = generate_semantic_suite(lexicon)
item = semantic.items[0]
print(f"== scalar_semantics (k={semantic.k})")
for cond in CONDITIONS:
    print(f"  [{cond.key}] {item.context_sentences[cond]}")
    print(f"           -> {item.sentences[cond]}")

# ## Twin pairs swap the modifier order

twin = semantic.item_by_id(item.twin_id)
print("item:", item.item_id, "| twin:", twin.item_id)
print("  ", item.context_sentences[CONDITIONS[0]])
print("  ", twin.context_sentences[CONDITIONS[0]])

# ## The bundled reconstructed lexicons reproduce the published suite sizes

formal_default = generate_formal_suite(bundled_lexicon("formal"), "npi")
semantic_default = generate_semantic_suite(bundled_lexicon("semantic"))
print("default formal suite:   ", formal_default.k_twin_pairs, "twin pairs")
print("default semantic suite: ", semantic_default.k_twin_pairs, "twin pairs")

# ## Suites round-trip through line-delimited record files

write_suite(formal_default, "npi.suite.jsonl")
print("wrote npi.suite.jsonl")
