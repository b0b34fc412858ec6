# Score a suite with the n-gram reference scorer and evaluate accuracy.
#
# The scoring metric normalizes the model's sentence log-probability by a
# unigram baseline (per token), so lexical frequency cancels out of the
# condition comparisons. When the scorer IS the unigram model (order 1),
# every score is exactly zero and accuracy is 1.0 by tie-inclusion: the
# pipeline's zero point.

from letalone import (CONDITIONS, ExchangeFile, build_unigram,
                      compute_item_scores, evaluate_suite, generate_formal_suite,
                      lexicon_from_dict, ngram_exchange_records, train_ngram)

lexicon = lexicon_from_dict({
    "subjects": ["I", "Max", "Nora"],
    "modifiers": ["blue", "red", "green"],
    "comparatives": {"weight": "heavier than"},
    "predicates": [{"verb": "lift", "domain": "weight", "nouns": ["crate", "box"]}],
})
suite = generate_formal_suite(lexicon, "npi")
print("suite:", suite.property, "k =", suite.k)

# ## A corpus that covers every suite sentence

corpus = [item.full_text(cond) + "\n" for item in suite.items for cond in CONDITIONS]
corpus += ["Max could not find the door.\n"] * 3

unigram = build_unigram(corpus)
print("unigram:", len(unigram.counts), "types /", unigram.total, "tokens")

# ## Zero point: an order-1 scorer reproduces the unigram distribution


def exchange_for(model):
    records = ngram_exchange_records(suite, model)
    exchange = ExchangeFile(model_fingerprint=model.fingerprint(),
                            tokenizer_spec="whitespace")
    for record in records:
        exchange.records[(record.item_id, record.condition.key)] = record
    return exchange


order1 = train_ngram(corpus, 1)
scores = compute_item_scores(suite, exchange_for(order1), unigram)
some = next(iter(scores.values()))
print("order-1 SLOR values:", sorted(set(some.slor_by_condition.values())))
print("order-1 accuracy:", evaluate_suite(suite, scores).accuracy)

# ## A bigram scorer spreads the scores out

order2 = train_ngram(corpus, 2, discount=0.75)
scores2 = compute_item_scores(suite, exchange_for(order2), unigram)
result = evaluate_suite(suite, scores2)
print("order-2 accuracy:", round(result.accuracy, 4),
      "over", result.k_twin_pairs, "twin pairs")

deltas = [(r.delta_ltaln, r.delta_and) for r in result.item_results[:4]]
for d_la, d_and in deltas:
    print(f"  delta(let alone) = {d_la:+.4f}   delta(and) = {d_and:+.4f}")

# An item is correct when delta(let alone) >= delta(and): the manipulation
# should hurt more in the let-alone frame than in the plain-and frame.
