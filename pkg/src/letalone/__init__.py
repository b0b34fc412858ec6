"""Minimal-pair suites, SLOR scoring, and corpus filtering for let-alone.

The package covers the full evaluation pipeline around the English
"let alone" construction short of neural pretraining itself: templatic
suite generation in a 2x2 manipulation-by-conjunction design, SLOR-based
accuracy scoring against a unigram baseline, filtered-corpus construction,
a hand-checkable n-gram reference scorer, and report aggregation.
"""

__version__ = "0.1.0"

from .exchange import (ExchangeFile, ExchangeValidationError, TokenRecord,
                       read_exchange, validate_exchange, write_exchange)
from .filtering import (FilterReport, FilterScenario, NO_FILTERING,
                        UnknownScenarioError, filter_corpus, get_scenario,
                        scenario_catalog, split_sentences)
from .lexicon import (LexiconConfig, LexiconError, Noun, Predicate,
                      bundled_lexicon, lexicon_from_dict, load_lexicon)
from .manifest import TrainingManifest, read_manifest, write_manifest
from .ngram import NGramModel, train_ngram
from .report import CellSummary, ReportError, seed_mean_ci, summarize, write_report
from .scoring import (ItemScores, ScoredSentence, ScoringError, SuiteResult,
                      compute_item_scores, delta_slor, evaluate_suite,
                      item_correct, ngram_exchange_records, slor)
from .templates import (ALL_PROPERTIES, CONDITIONS, FORMAL_PROPERTIES,
                        SEMANTIC_PROPERTY, ConditionLabel, Suite, SuiteFormatError,
                        TestItem, expected_item_count, generate_formal_suite,
                        generate_semantic_suite, generate_suite, read_suite,
                        write_suite)
from .unigram import (OOVError, Smoothing, TokenizerError, UnigramModel,
                      build_unigram, tokenize)
