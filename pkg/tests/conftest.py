import pytest

from letalone.lexicon import lexicon_from_dict
from letalone.scoring import ItemScores
from letalone.templates import CONDITIONS, Suite, TestItem


def make_lexicon(subjects=("I",), modifiers=("blue", "red"), predicates=None,
                 comparatives=None, **extra):
    predicates = predicates or [{"verb": "lift", "domain": "weight", "nouns": ["crate"]}]
    comparatives = comparatives or {"weight": "heavier than", "price": "more expensive than"}
    return lexicon_from_dict({
        "subjects": list(subjects),
        "modifiers": list(modifiers),
        "predicates": predicates,
        "comparatives": comparatives,
        **extra,
    })


@pytest.fixture
def table1_lexicon():
    """The frame behind the published example sentences: I / lift / crate / blue,red."""
    return make_lexicon()


def make_pair_suite(n_pairs, property="npi"):
    """Fabricate a structurally valid suite of n_pairs twin pairs.

    Independent of the template generator on purpose: metric tests should
    not inherit its behavior.
    """
    items = []
    for i in range(n_pairs):
        for order, tag, twin_tag in (("canonical", "a", "b"), ("swapped", "b", "a")):
            sentences = {}
            contexts = {}
            for cond in CONDITIONS:
                conj = "let alone" if cond.ltaln else "and"
                aux = "could" if cond.manip else "couldn't"
                sentences[cond] = f"s{i} {aux} v the x n {conj} the y n."
                contexts[cond] = ""
            items.append(TestItem(
                item_id=f"{property}.t{i}.{tag}",
                property=property,
                sentences=sentences,
                context_sentences=contexts,
                order=order,
                twin_id=f"{property}.t{i}.{twin_tag}",
            ))
    return Suite(property=property, items=tuple(items), lexicon_fingerprint="fabricated")


def random_scores(suite, rng):
    """Independent standard-normal SLOR per condition for every item."""
    scores = {}
    for item in suite.items:
        slors = {cond: float(rng.standard_normal()) for cond in CONDITIONS}
        scores[item.item_id] = ItemScores.from_condition_slors(item.item_id, slors)
    return scores


def brute_force_evaluation(suite, scores, strict=False):
    """Direct loop over twin pairs; the oracle for evaluate_suite.

    Returns (accuracy, per-item correctness flags, per-item joint flags).
    """
    def ok(s):
        return s.delta_ltaln > s.delta_and if strict else s.delta_ltaln >= s.delta_and

    correct = {item.item_id: ok(scores[item.item_id]) for item in suite.items}
    joint = {}
    n_pairs = 0
    n_correct = 0
    done = set()
    for item in suite.items:
        key = frozenset((item.item_id, item.twin_id))
        if key in done:
            continue
        done.add(key)
        flag = correct[item.item_id] and correct[item.twin_id]
        joint[item.item_id] = flag
        joint[item.twin_id] = flag
        n_pairs += 1
        n_correct += flag
    return n_correct / n_pairs, correct, joint
