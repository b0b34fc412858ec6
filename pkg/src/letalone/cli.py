"""Command-line pipeline: generate, filter, unigram, score, evaluate, report.

Subcommands compose over files so each stage can run alone or through the
``pipeline`` subcommand driven by one JSON config. Every artifact embeds
the fingerprints of the inputs that produced it; rerunning any stage on
identical inputs writes byte-identical outputs.

Exit codes: 0 success; 1 failure (for ``filter``: 0 means at least one
unit was removed, 1 means the corpus had no matches); 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__
from .exchange import (ExchangeValidationError, read_exchange, require_valid,
                       validate_exchange, write_exchange)
from .filtering import (LINE, SENTENCE, SUBSTRING, WORD, FilterInputError,
                        UnknownScenarioError, filter_corpus, get_scenario)
from .lexicon import LexiconError, bundled_lexicon, load_lexicon
from .manifest import write_manifest
from .ngram import NGramModel, train_ngram
from .report import ReportError, write_report
from .scoring import (ScoringError, SuiteResult, compute_item_scores,
                      evaluate_suite, ngram_exchange_records)
from .templates import (ALL_PROPERTIES, FORMAL_PROPERTIES, SEMANTIC_PROPERTY,
                        SuiteFormatError, generate_suite, read_suite, write_suite)
from .unigram import Smoothing, UnigramModel, build_unigram


class PipelineStageError(RuntimeError):
    def __init__(self, stage: str, message: str):
        super().__init__(f"stage '{stage}': {message}")
        self.stage = stage


def _resolve_properties(spec: str) -> tuple[str, ...]:
    if spec == "all":
        return ALL_PROPERTIES
    if spec == "formal":
        return FORMAL_PROPERTIES
    if spec in ALL_PROPERTIES:
        return (spec,)
    raise ValueError(f"unknown property {spec!r}; expected one of "
                     f"{ALL_PROPERTIES + ('all', 'formal')}")


def _lexicon_for(property: str, lexicon_path: str | None):
    if lexicon_path:
        return load_lexicon(lexicon_path)
    return bundled_lexicon("semantic" if property == SEMANTIC_PROPERTY else "formal")


def cmd_generate(args: argparse.Namespace) -> int:
    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)
    for property in _resolve_properties(args.property):
        suite = generate_suite(_lexicon_for(property, args.lexicon), property)
        path = outdir / f"{property}.suite.jsonl"
        write_suite(suite, path)
        print(f"{property}: k={suite.k} items ({suite.k_twin_pairs} twin pairs) -> {path}")
    return 0


def cmd_filter(args: argparse.Namespace) -> int:
    scenario = get_scenario(
        args.scenario,
        removal_unit=SENTENCE if args.unit == SENTENCE else LINE,
        match_mode=SUBSTRING if args.substring else WORD,
    )
    with open(args.output, "w", encoding="utf-8", newline="") as sink:
        _, report = filter_corpus(Path(args.input), scenario, sink)
    if args.report:
        report.save(args.report)
    print(f"{scenario.name}: {report.units_removed} of {report.units_in} units removed "
          f"({report.lines_out} lines kept)")
    return 0 if report.units_removed > 0 else 1


def _parse_smoothing(args: argparse.Namespace) -> Smoothing:
    if args.smoothing == "none":
        return Smoothing.none()
    if args.smoothing == "add-k":
        return Smoothing.add_k(args.k)
    return Smoothing.floor()


def _load_vocab(path: str) -> list[str]:
    text = Path(path).read_text(encoding="utf-8")
    try:
        data = json.loads(text)
    except json.JSONDecodeError:
        return [line for line in text.splitlines() if line]
    if isinstance(data, dict) and "tokens" in data:
        return list(data["tokens"])
    if isinstance(data, list):
        return [str(t) for t in data]
    raise ValueError(f"vocabulary file {path} has an unrecognized layout")


def cmd_unigram(args: argparse.Namespace) -> int:
    vocab = _load_vocab(args.vocab) if args.vocab else None
    with open(args.corpus, encoding="utf-8") as corpus:
        model = build_unigram(corpus, args.tokenizer, lowercase=args.lowercase,
                              vocab=vocab, smoothing=_parse_smoothing(args))
    model.save(args.out)
    print(f"unigram model: {len(model.counts)} types, {model.total} tokens -> {args.out}")
    return 0


def cmd_score(args: argparse.Namespace) -> int:
    suite = read_suite(args.suite)
    if args.scorer == "external":
        if not args.logprobs:
            raise ValueError("--scorer external requires --logprobs")
        exchange = read_exchange(args.logprobs)
        require_valid(exchange, suite)
        print(f"{args.logprobs}: valid for suite {suite.property} (k={suite.k})")
        return 0
    if not args.corpus:
        raise ValueError("--scorer reference-lm requires --corpus")
    with open(args.corpus, encoding="utf-8") as corpus:
        model = train_ngram(corpus, args.order, args.discount, lowercase=args.lowercase)
    records = ngram_exchange_records(suite, model, lowercase=args.lowercase)
    tokenizer_spec = "whitespace+lowercase" if args.lowercase else "whitespace"
    write_exchange(args.out, records, model_fingerprint=model.fingerprint(),
                   tokenizer_spec=tokenizer_spec)
    print(f"scored {suite.k} items x 4 conditions -> {args.out}")
    return 0


def cmd_evaluate(args: argparse.Namespace) -> int:
    suite = read_suite(args.suite)
    exchange = read_exchange(args.logprobs)
    unigram = UnigramModel.load(args.unigram)
    if (exchange.tokenizer_spec and unigram.tokenizer_spec
            and exchange.tokenizer_spec != unigram.tokenizer_spec
            and not args.allow_tokenizer_mismatch):
        raise ValueError(
            f"tokenizer mismatch: logprobs use {exchange.tokenizer_spec!r}, unigram "
            f"model uses {unigram.tokenizer_spec!r} (pass --allow-tokenizer-mismatch "
            "to override)")
    scores = compute_item_scores(suite, exchange, unigram)
    result = evaluate_suite(
        suite, scores, strict=args.strict,
        model_fingerprint=exchange.model_fingerprint,
        unigram_fingerprint=unigram.fingerprint(),
        scenario=args.scenario, seed=args.seed)
    result.save(args.out)
    print(f"{suite.property}: accuracy {result.accuracy:.4f} over "
          f"{result.k_twin_pairs} twin pairs -> {args.out}")
    return 0


def cmd_report(args: argparse.Namespace) -> int:
    results = [SuiteResult.load(path) for path in args.results]
    paths = write_report(results, args.out)
    for name, path in paths.items():
        print(f"{name}: {path}")
    return 0


def cmd_emit_manifest(args: argparse.Namespace) -> int:
    manifest = write_manifest(args.out)
    print(f"training manifest ({manifest.architecture}, "
          f"{manifest.total_parameters} params) -> {args.out}")
    return 0


def _config_value(config: dict, key: str, default=None, required: bool = False):
    if required and key not in config:
        raise ValueError(f"pipeline config is missing required key {key!r}")
    return config.get(key, default)


def run_pipeline(config: dict, config_dir: Path) -> Path:
    """Run generate -> filter -> unigram -> score -> evaluate -> report."""

    def resolve(path_text: str) -> Path:
        path = Path(path_text)
        return path if path.is_absolute() else config_dir / path

    outdir = resolve(_config_value(config, "output_dir", required=True))
    properties = _resolve_properties(_config_value(config, "properties", "all"))
    corpus_path = resolve(_config_value(config, "corpus", required=True))
    if not corpus_path.exists():
        raise PipelineStageError("configure", f"corpus file {corpus_path} does not exist")
    lexicon_path = _config_value(config, "lexicon")
    if lexicon_path:
        lexicon_path = str(resolve(lexicon_path))
        if not Path(lexicon_path).exists():
            raise PipelineStageError("configure", f"lexicon file {lexicon_path} does not exist")
    scenario_name = _config_value(config, "scenario", "NoFiltering")
    scorers = _config_value(config, "scorers", [{"seed": "1", "order": 1, "discount": 0.75}])
    seeds = [str(s.get("seed", "")) for s in scorers]
    if len(set(seeds)) != len(seeds) or "" in seeds:
        raise PipelineStageError("configure", "scorer seed ids must be present and distinct")
    unigram_options = _config_value(config, "unigram", {})
    lowercase = bool(unigram_options.get("lowercase", False))
    strict = bool(_config_value(config, "strict", False))

    outdir.mkdir(parents=True, exist_ok=True)

    # generate
    suites = {}
    suite_dir = outdir / "suites"
    suite_dir.mkdir(exist_ok=True)
    try:
        for property in properties:
            suite = generate_suite(_lexicon_for(property, lexicon_path), property)
            write_suite(suite, suite_dir / f"{property}.suite.jsonl")
            suites[property] = suite
    except (LexiconError, ValueError) as exc:
        raise PipelineStageError("generate", str(exc)) from exc

    # filter
    try:
        scenario = get_scenario(scenario_name)
        filtered_path = outdir / "filtered_corpus.txt"
        with open(filtered_path, "w", encoding="utf-8", newline="") as sink:
            _, filter_report = filter_corpus(corpus_path, scenario, sink)
        filter_report.save(outdir / "filter_report.json")
    except (UnknownScenarioError, FilterInputError) as exc:
        raise PipelineStageError("filter", str(exc)) from exc

    # unigram over the filtered corpus
    try:
        with open(filtered_path, encoding="utf-8") as f:
            unigram = build_unigram(f, lowercase=lowercase)
        unigram.save(outdir / "unigram.model")
    except (ValueError, KeyError) as exc:
        raise PipelineStageError("unigram", str(exc)) from exc

    # score and evaluate, per scorer seed
    results = []
    logprob_dir = outdir / "logprobs"
    result_dir = outdir / "results"
    logprob_dir.mkdir(exist_ok=True)
    result_dir.mkdir(exist_ok=True)
    for scorer in scorers:
        seed = str(scorer["seed"])
        try:
            with open(filtered_path, encoding="utf-8") as f:
                model = train_ngram(f, int(scorer.get("order", 1)),
                                    float(scorer.get("discount", 0.75)),
                                    lowercase=lowercase)
        except ValueError as exc:
            raise PipelineStageError("score", f"seed {seed}: {exc}") from exc
        for property, suite in suites.items():
            try:
                records = ngram_exchange_records(suite, model, lowercase=lowercase)
                exchange_path = logprob_dir / f"{property}.seed{seed}.jsonl"
                tokenizer_spec = "whitespace+lowercase" if lowercase else "whitespace"
                write_exchange(exchange_path, records,
                               model_fingerprint=model.fingerprint(),
                               tokenizer_spec=tokenizer_spec)
                exchange = read_exchange(exchange_path)
                scores = compute_item_scores(suite, exchange, unigram)
            except (ScoringError, ExchangeValidationError) as exc:
                raise PipelineStageError("score", f"{property} seed {seed}: {exc}") from exc
            try:
                result = evaluate_suite(
                    suite, scores, strict=strict,
                    model_fingerprint=model.fingerprint(),
                    unigram_fingerprint=unigram.fingerprint(),
                    scenario=scenario.name, seed=seed)
                result.save(result_dir / f"{property}.seed{seed}.result.jsonl")
                results.append(result)
            except ScoringError as exc:
                raise PipelineStageError("evaluate", f"{property} seed {seed}: {exc}") from exc

    # report
    try:
        paths = write_report(results, outdir / "report")
    except ReportError as exc:
        raise PipelineStageError("report", str(exc)) from exc
    return paths["report"]


def cmd_pipeline(args: argparse.Namespace) -> int:
    config_path = Path(args.config)
    with open(config_path, encoding="utf-8") as f:
        config = json.load(f)
    report_path = run_pipeline(config, config_path.parent.resolve())
    print(f"pipeline complete -> {report_path}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="letalone",
        description="Generate, filter, score, and report on let-alone minimal-pair suites.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="generate minimal-pair suites from a lexicon")
    p.add_argument("--property", default="all",
                   help="one property name, 'formal', or 'all' (default)")
    p.add_argument("--lexicon", help="lexicon JSON (default: bundled reconstruction)")
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("filter", help="remove matching units from a corpus")
    p.add_argument("--scenario", required=True)
    p.add_argument("--input", required=True)
    p.add_argument("--output", required=True)
    p.add_argument("--report", help="write a JSON filter report here")
    p.add_argument("--unit", choices=[LINE, SENTENCE], default=LINE)
    p.add_argument("--substring", action="store_true",
                   help="match without word boundaries (sensitivity analysis)")
    p.set_defaults(func=cmd_filter)

    p = sub.add_parser("unigram", help="build a unigram model from a corpus")
    p.add_argument("--corpus", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--tokenizer", choices=["whitespace", "pretokenized"],
                   default="whitespace")
    p.add_argument("--lowercase", action="store_true")
    p.add_argument("--vocab", help="imported vocabulary file (token list or JSON export)")
    p.add_argument("--smoothing", choices=["floor", "add-k", "none"], default="floor")
    p.add_argument("--k", type=float, default=1.0, help="k for add-k smoothing")
    p.set_defaults(func=cmd_unigram)

    p = sub.add_parser("score", help="produce token logprobs for a suite")
    p.add_argument("--suite", required=True)
    p.add_argument("--scorer", choices=["reference-lm", "external"], default="reference-lm")
    p.add_argument("--corpus", help="training corpus for the reference scorer")
    p.add_argument("--order", type=int, default=2)
    p.add_argument("--discount", type=float, default=0.75)
    p.add_argument("--lowercase", action="store_true")
    p.add_argument("--logprobs", help="existing exchange file to validate (external scorer)")
    p.add_argument("--out", help="output exchange file (reference scorer)")
    p.set_defaults(func=cmd_score)

    p = sub.add_parser("evaluate", help="compute SLOR deltas and suite accuracy")
    p.add_argument("--suite", required=True)
    p.add_argument("--logprobs", required=True)
    p.add_argument("--unigram", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--strict", action="store_true",
                   help="count ties as incorrect (robustness analysis)")
    p.add_argument("--scenario", default="", help="label for the report grid")
    p.add_argument("--seed", default="", help="seed label for the report grid")
    p.add_argument("--allow-tokenizer-mismatch", action="store_true")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("report", help="aggregate results into table layouts")
    p.add_argument("results", nargs="+", help="SuiteResult files")
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("emit-manifest", help="write the static pretraining manifest")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_emit_manifest)

    p = sub.add_parser("pipeline", help="run the full chain from a JSON config")
    p.add_argument("--config", required=True)
    p.set_defaults(func=cmd_pipeline)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except PipelineStageError as exc:
        print(f"error: pipeline failed in {exc}", file=sys.stderr)
        return 1
    except (LexiconError, SuiteFormatError, ExchangeValidationError, ScoringError,
            UnknownScenarioError, FilterInputError, ReportError, ValueError,
            OSError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
