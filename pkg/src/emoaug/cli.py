"""Command-line surface: one subcommand per pipeline stage, with file handoffs.

    emoaug ingest    raw JSONL -> canonical corpus (length cap, label mapping)
    emoaug classify  corpus    -> prediction scores
    emoaug filter    scores    -> kept post ids (confidence window)
    emoaug sample    corpus+ids -> low-resource train/valid split
    emoaug augment   train     -> synthetic examples
    emoaug evaluate  synthetic or predictions -> metrics report

Every stage writes a manifest beside its output with the exact configuration
needed to re-run it.  Identical config and seed produce byte-identical
outputs regardless of --workers.  Exit codes: 1 usage, 2 data, 3 provider.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import __version__
from .augment import (
    AugmentationAborted,
    AugmentationConfig,
    ProviderBundle,
    augment_corpus,
    read_synthetic_jsonl,
    write_synthetic_jsonl,
)
from .corpus import (
    CorpusError,
    EMOTION_LABELS,
    EmotionVector,
    LabeledPost,
    Post,
    binarize_rating,
    default_stopwords,
    enforce_max_length,
    load_corpus,
    map_emotion,
    tokenize,
    write_corpus,
)
from .filtering import FilterConfig, SplitSpec, confidence_filter, sample_split
from .lexicon import build_sne_lexicon, load_embeddings, load_vad_lexicon
from .metrics import MetricsError, evaluate_extrinsic, evaluate_fidelity, write_report
from .providers import (
    EchoFillMask,
    KeywordClassifier,
    NearestNeighborFillMask,
    ProviderError,
    RemoteClassifier,
    RemoteFillMask,
    RemoteTranslator,
    SubstitutionTranslator,
)
from .providers.base import classify as classify_post
from .providers.base import read_scores_jsonl, write_scores_jsonl
from .providers.mocks import DEMO_EN_FR, DEMO_FR_EN

EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_PROVIDER = 3

ENDPOINT_ENV = "AUGMENTOR_ENDPOINT"

# Graded mock classifier: two distinct cue words put a label at activation
# 0.7, squarely inside the default confidence window; three push it to 1.0.
MOCK_CLASSIFIER_PER_HIT = 0.7


class _Parser(argparse.ArgumentParser):
    """ArgumentParser that exits with code 1 on usage errors."""

    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _load_config(argv) -> dict:
    """Pre-scan argv for --config and load defaults from the JSON file."""
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config")
    known, _ = pre.parse_known_args(argv)
    if not known.config:
        return {}
    try:
        cfg = json.loads(Path(known.config).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        print(f"error: cannot read config {known.config}: {exc}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)
    if not isinstance(cfg, dict):
        print(f"error: config {known.config} must be a JSON object", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)
    return cfg


def build_parser(cfg: dict | None = None) -> argparse.ArgumentParser:
    cfg = cfg or {}

    def d(key, fallback):
        return cfg.get(key, fallback)

    parser = _Parser(prog="emoaug", description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("--version", action="version", version=f"emoaug {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--config", help="JSON file of default flag values")
        p.add_argument("--seed", type=int, default=d("seed", 0), help="global random seed")
        p.add_argument("--workers", type=int, default=d("workers", 1), help="parallel workers")

    def add_provider(p):
        p.add_argument("--mock", action="store_true", default=d("mock", False),
                       help="use the built-in deterministic providers")
        p.add_argument("--endpoint", default=d("endpoint", None),
                       help=f"inference service base URL (or ${ENDPOINT_ENV})")

    p = sub.add_parser("ingest", help="normalize a raw corpus into canonical JSONL")
    add_common(p)
    p.add_argument("--in", dest="inp", required=True, help="raw JSONL input")
    p.add_argument("--schema", choices=["posts", "labeled", "ratings"], default=d("schema", "posts"))
    p.add_argument("--out", required=True, help="canonical corpus output")
    p.add_argument("--max-tokens", type=int, default=d("max_tokens", 512),
                   help="drop posts longer than this many tokens")
    p.add_argument("--rating-threshold", type=int, default=d("rating_threshold", 4),
                   help="1-10 rating binarization threshold (ratings schema)")

    p = sub.add_parser("classify", help="score a corpus with the emotion classifier")
    add_common(p)
    add_provider(p)
    p.add_argument("--in", dest="inp", required=True, help="corpus JSONL")
    p.add_argument("--out", required=True, help="prediction scores JSONL")
    p.add_argument("--threshold", type=float, default=d("threshold", 0.5),
                   help="decision threshold on activated scores")

    p = sub.add_parser("filter", help="keep posts inside the confidence window")
    add_common(p)
    p.add_argument("--scores", required=True, help="prediction scores JSONL")
    p.add_argument("--out", required=True, help="kept ids output (one per line)")
    p.add_argument("--low", type=float, default=d("low", 0.3))
    p.add_argument("--high", type=float, default=d("high", 0.8))
    p.add_argument("--mode", choices=["any", "all"], default=d("mode", "any"))
    p.add_argument("--threshold", type=float, default=d("threshold", 0.5),
                   help="decision threshold on activated scores")

    p = sub.add_parser("sample", help="sample a low-resource train/valid split")
    add_common(p)
    p.add_argument("--corpus", required=True, help="corpus JSONL")
    p.add_argument("--ids", required=True, help="candidate ids file")
    p.add_argument("--scores", help="scores JSONL providing pseudo-labels")
    p.add_argument("--out-dir", required=True)
    p.add_argument("--total", type=int, default=d("total", 1000))
    p.add_argument("--train", type=int, default=d("train", 700))
    p.add_argument("--valid", type=int, default=d("valid", 300))

    p = sub.add_parser("augment", help="synthesize labeled examples")
    add_common(p)
    add_provider(p)
    p.add_argument("--in", dest="inp", required=True, help="labeled training corpus JSONL")
    p.add_argument("--out", required=True, help="synthetic examples JSONL")
    p.add_argument("--method", choices=["bt", "mask_token", "mask_span"],
                   default=d("method", "mask_token"))
    p.add_argument("--folds", type=int, default=d("folds", 1),
                   help="synthetic examples per training example")
    p.add_argument("--mask-rate", type=float, default=d("mask_rate", 0.15))
    p.add_argument("--span-len", type=int, default=d("span_len", 5))
    p.add_argument("--max-regen", type=int, default=d("max_regen", 3),
                   help="regeneration attempts for degenerate outputs")
    p.add_argument("--drop-degenerate", action="store_true", default=d("drop_degenerate", False),
                   help="drop outputs identical to their source instead of flagging them")
    p.add_argument("--embeddings", default=d("embeddings", None), help="embedding table file")
    p.add_argument("--vad", default=d("vad", None), help="VAD lexicon file")
    p.add_argument("--vad-scale", choices=["unit", "1-9"], default=d("vad_scale", "unit"))
    p.add_argument("--valence-max", type=float, default=d("valence_max", 0.3))
    p.add_argument("--arousal-min", type=float, default=d("arousal_min", 0.7))

    p = sub.add_parser("evaluate", help="evaluate synthetic data or predictions")
    add_common(p)
    add_provider(p)
    p.add_argument("--kind", choices=["fidelity", "extrinsic"], required=True)
    p.add_argument("--synthetic", help="synthetic JSONL (fidelity)")
    p.add_argument("--gold", help="gold labeled corpus JSONL (extrinsic)")
    p.add_argument("--scores", help="prediction scores JSONL (extrinsic)")
    p.add_argument("--out", required=True, help="metrics report JSON")
    p.add_argument("--table", help="also write an aligned text table here")
    p.add_argument("--threshold", type=float, default=d("threshold", 0.5))
    p.add_argument("--ttr-include-source", action="store_true", default=d("ttr_include_source", False),
                   help="compute diversity over synthetic plus source text")
    p.add_argument("--corpus", help="source corpus for --ttr-include-source")

    return parser


def _write_manifest(path: Path, stage: str, inputs: dict, outputs: dict, counts: dict, config: dict, seed=None):
    manifest = {
        "stage": stage,
        "inputs": {k: Path(v).name for k, v in inputs.items() if v},
        "outputs": {k: Path(v).name for k, v in outputs.items() if v},
        "counts": counts,
        "config": config,
        "emoaug_version": __version__,
    }
    if seed is not None:
        manifest["seed"] = seed
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(manifest, ensure_ascii=False, sort_keys=True, indent=2) + "\n", encoding="utf-8")


def _resolve_endpoint(args) -> str | None:
    if args.mock:
        return None
    endpoint = args.endpoint or os.environ.get(ENDPOINT_ENV)
    if not endpoint:
        raise SystemExitWithCode(
            EXIT_USAGE, "no provider: pass --mock, --endpoint, or set " + ENDPOINT_ENV
        )
    return endpoint


class SystemExitWithCode(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def _ingest_record(obj, line_no: int, schema: str, rating_threshold: int):
    if not isinstance(obj, dict):
        raise CorpusError(f"line {line_no}: record must be a JSON object")
    post_id = obj.get("id")
    if not isinstance(post_id, str) or not post_id:
        raise CorpusError(f"line {line_no}: missing or empty 'id'")
    title = obj.get("title") or ""
    body = obj.get("text") or ""
    text = f"{title} {body}".strip() if title else body
    if not isinstance(text, str) or not text.strip():
        raise CorpusError(f"line {line_no}: post {post_id!r} has empty text")
    source = obj.get("source")
    meta = obj.get("meta")
    post = Post(id=post_id, text=text, source=source, meta=meta)
    if schema == "posts":
        return post
    if schema == "labeled":
        labels = obj.get("labels")
        if not isinstance(labels, list) or len(labels) != len(EMOTION_LABELS):
            raise CorpusError(f"line {line_no}: labeled schema requires {len(EMOTION_LABELS)} labels")
        return LabeledPost(post=post, labels=EmotionVector(scores=tuple(float(v) for v in labels)))
    ratings = obj.get("ratings")
    if not isinstance(ratings, dict) or not ratings:
        raise CorpusError(f"line {line_no}: ratings schema requires a 'ratings' map")
    scores = [0.0] * len(EMOTION_LABELS)
    for name, rating in ratings.items():
        target = map_emotion(name)
        if target is None:
            continue
        if not isinstance(rating, int) or isinstance(rating, bool):
            raise CorpusError(f"line {line_no}: rating for {name!r} must be an integer")
        try:
            value = binarize_rating(rating, rating_threshold)
        except CorpusError as exc:
            raise CorpusError(f"line {line_no}: {exc}") from None
        scores[EMOTION_LABELS.index(target)] = float(value)
    return LabeledPost(post=post, labels=EmotionVector(scores=tuple(scores)))


def cmd_ingest(args) -> int:
    out_records = []
    kept = dropped_overlength = 0
    seen: dict[str, int] = {}
    with open(args.inp, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise CorpusError(f"line {line_no}: invalid JSON: {exc.msg}") from None
            record = _ingest_record(obj, line_no, args.schema, args.rating_threshold)
            post = record if isinstance(record, Post) else record.post
            if post.id in seen:
                raise CorpusError(f"duplicate id {post.id!r} at lines {seen[post.id]} and {line_no}")
            seen[post.id] = line_no
            if not enforce_max_length(tokenize(post.text, post_id=post.id), args.max_tokens):
                dropped_overlength += 1
                continue
            out_records.append(record)
            kept += 1
    write_corpus(args.out, out_records)
    print(f"kept={kept} dropped_overlength={dropped_overlength}")
    _write_manifest(
        Path(args.out + ".manifest.json"), "ingest",
        inputs={"raw": args.inp}, outputs={"corpus": args.out},
        counts={"kept": kept, "dropped_overlength": dropped_overlength},
        config={"schema": args.schema, "max_tokens": args.max_tokens,
                "rating_threshold": args.rating_threshold},
    )
    return 0


def _classifier(args):
    if args.mock:
        return KeywordClassifier(per_hit=MOCK_CLASSIFIER_PER_HIT), {"provider": "mock-keyword", "per_hit": MOCK_CLASSIFIER_PER_HIT}
    endpoint = _resolve_endpoint(args)
    return RemoteClassifier(endpoint), {"provider": "remote", "endpoint": endpoint}


def cmd_classify(args) -> int:
    posts = load_corpus(args.inp, schema="posts")
    provider, provider_cfg = _classifier(args)
    scores = [classify_post(post, provider, args.threshold) for post in posts]
    write_scores_jsonl(args.out, scores)
    print(f"classified={len(scores)}")
    _write_manifest(
        Path(args.out + ".manifest.json"), "classify",
        inputs={"corpus": args.inp}, outputs={"scores": args.out},
        counts={"classified": len(scores)},
        config={"threshold": args.threshold, **provider_cfg},
        seed=args.seed,
    )
    return 0


def cmd_filter(args) -> int:
    scores = read_scores_jsonl(args.scores)
    cfg = FilterConfig(low=args.low, high=args.high, mode=args.mode, decision_threshold=args.threshold)
    kept = confidence_filter(scores, cfg)
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text("".join(pid + "\n" for pid in kept), encoding="utf-8")
    print(f"kept={len(kept)} dropped={len(scores) - len(kept)}")
    _write_manifest(
        Path(args.out + ".manifest.json"), "filter",
        inputs={"scores": args.scores}, outputs={"ids": args.out},
        counts={"kept": len(kept), "dropped": len(scores) - len(kept)},
        config=cfg.to_dict(),
    )
    return 0


def cmd_sample(args) -> int:
    posts = {p.id: p for p in load_corpus(args.corpus, schema="posts")}
    ids = [ln.strip() for ln in Path(args.ids).read_text(encoding="utf-8").splitlines() if ln.strip()]
    missing = [pid for pid in ids if pid not in posts]
    if missing:
        raise CorpusError(f"ids not present in corpus: {missing[:10]}")
    if args.scores:
        labels_by_id = {
            s.post_id: EmotionVector(scores=tuple(float(p) for p in s.predicted))
            for s in read_scores_jsonl(args.scores)
        }
    else:
        labeled = load_corpus(args.corpus, schema="labeled")
        labels_by_id = {lp.post.id: lp.labels for lp in labeled}
    unlabeled = [pid for pid in ids if pid not in labels_by_id]
    if unlabeled:
        raise CorpusError(f"no labels for ids: {unlabeled[:10]}")
    spec = SplitSpec(total=args.total, train=args.train, valid=args.valid, seed=args.seed)
    train_ids, valid_ids = sample_split(ids, spec)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    for name, chosen in (("train", train_ids), ("valid", valid_ids)):
        write_corpus(out_dir / f"{name}.jsonl", [LabeledPost(post=posts[pid], labels=labels_by_id[pid]) for pid in chosen])
        (out_dir / f"{name}_ids.txt").write_text("".join(pid + "\n" for pid in chosen), encoding="utf-8")
    print(f"train={len(train_ids)} valid={len(valid_ids)}")
    _write_manifest(
        out_dir / "manifest.json", "sample",
        inputs={"corpus": args.corpus, "ids": args.ids, "scores": args.scores},
        outputs={"train": str(out_dir / "train.jsonl"), "valid": str(out_dir / "valid.jsonl")},
        counts={"train": len(train_ids), "valid": len(valid_ids)},
        config={"total": args.total, "train": args.train, "valid": args.valid},
        seed=args.seed,
    )
    return 0


def _augment_bundle(args):
    embeddings = sne = None
    provider_cfg: dict = {}
    if args.embeddings:
        embeddings = load_embeddings(args.embeddings)
        provider_cfg["embeddings"] = Path(args.embeddings).name
    if args.vad:
        if embeddings is None:
            raise SystemExitWithCode(EXIT_USAGE, "--vad requires --embeddings")
        vad = load_vad_lexicon(args.vad, scale=args.vad_scale)
        sne = build_sne_lexicon(vad, valence_max=args.valence_max, arousal_min=args.arousal_min)
        provider_cfg["vad"] = Path(args.vad).name
        provider_cfg["valence_max"] = args.valence_max
        provider_cfg["arousal_min"] = args.arousal_min
    if args.mock:
        if args.method == "bt":
            fwd = SubstitutionTranslator(DEMO_EN_FR, "en", "fr")
            bwd = SubstitutionTranslator(DEMO_FR_EN, "fr", "en")
            provider_cfg["provider"] = "mock-substitution-bt"
            return ProviderBundle(translator_fwd=fwd, translator_bwd=bwd), provider_cfg
        if embeddings is not None:
            filler = NearestNeighborFillMask(embeddings, stopwords=default_stopwords())
            provider_cfg["provider"] = "mock-nearest-neighbor"
        else:
            filler = EchoFillMask()
            provider_cfg["provider"] = "mock-echo"
        return ProviderBundle(fill_mask=filler, embeddings=embeddings, sne=sne), provider_cfg
    endpoint = _resolve_endpoint(args)
    provider_cfg["provider"] = "remote"
    provider_cfg["endpoint"] = endpoint
    if args.method == "bt":
        fwd = RemoteTranslator(endpoint, "en", "fr", supports_sampling=args.folds > 1)
        bwd = RemoteTranslator(endpoint, "fr", "en")
        return ProviderBundle(translator_fwd=fwd, translator_bwd=bwd), provider_cfg
    return ProviderBundle(fill_mask=RemoteFillMask(endpoint), embeddings=embeddings, sne=sne), provider_cfg


def cmd_augment(args) -> int:
    train = load_corpus(args.inp, schema="labeled")
    cfg = AugmentationConfig(
        method=args.method,
        folds=args.folds,
        mask_rate=args.mask_rate,
        span_len=args.span_len,
        global_seed=args.seed,
        max_regen_attempts=args.max_regen,
    )
    bundle, provider_cfg = _augment_bundle(args)
    aborted_error = None
    try:
        result = augment_corpus(train, cfg, bundle, workers=args.workers,
                                keep_degenerate=not args.drop_degenerate)
    except AugmentationAborted as exc:
        result = exc.partial
        aborted_error = str(exc.cause)
    write_synthetic_jsonl(args.out, result.examples)
    counts = {
        "sources": len(train),
        "target": len(train) * cfg.folds,
        "emitted": len(result.examples),
        "degenerate": result.degenerate_count,
        "dropped_degenerate": result.dropped_degenerate,
        "shortfalls": len(result.shortfalls),
    }
    manifest_cfg = {**cfg.to_dict(), **provider_cfg, "drop_degenerate": args.drop_degenerate}
    manifest_extra = {"shortfall_report": result.shortfalls}
    if aborted_error:
        manifest_extra["aborted"] = aborted_error
    _write_manifest(
        Path(args.out + ".manifest.json"), "augment",
        inputs={"train": args.inp}, outputs={"synthetic": args.out},
        counts={**counts, **manifest_extra}, config=manifest_cfg, seed=args.seed,
    )
    print(f"emitted={counts['emitted']} degenerate={counts['degenerate']} shortfalls={counts['shortfalls']}")
    if aborted_error:
        print(f"aborted: {aborted_error}", file=sys.stderr)
        return EXIT_PROVIDER
    return 0


def cmd_evaluate(args) -> int:
    if args.kind == "fidelity":
        if not args.synthetic:
            raise SystemExitWithCode(EXIT_USAGE, "evaluate --kind fidelity requires --synthetic")
        synthetic = read_synthetic_jsonl(args.synthetic)
        provider, provider_cfg = _classifier(args)
        extra_texts = []
        if args.ttr_include_source:
            if not args.corpus:
                raise SystemExitWithCode(EXIT_USAGE, "--ttr-include-source requires --corpus")
            extra_texts = [p.text for p in load_corpus(args.corpus, schema="posts")]
        report, failures = evaluate_fidelity(
            synthetic, provider, threshold=args.threshold, extra_texts=extra_texts
        )
        counts = {"evaluated": report.n_examples, "failures": len(failures), "failure_report": failures}
        inputs = {"synthetic": args.synthetic, "corpus": args.corpus}
        config = {"kind": "fidelity", "threshold": args.threshold,
                  "ttr_include_source": args.ttr_include_source, **provider_cfg}
    else:
        if not args.gold or not args.scores:
            raise SystemExitWithCode(EXIT_USAGE, "evaluate --kind extrinsic requires --gold and --scores")
        gold = load_corpus(args.gold, schema="labeled")
        pred = read_scores_jsonl(args.scores)
        report = evaluate_extrinsic(gold, pred)
        counts = {"evaluated": report.n_examples}
        inputs = {"gold": args.gold, "scores": args.scores}
        config = {"kind": "extrinsic"}
    write_report(args.out, report, table_path=args.table)
    print(report.to_table(), end="")
    _write_manifest(
        Path(args.out + ".manifest.json"), "evaluate",
        inputs=inputs, outputs={"report": args.out, "table": args.table},
        counts=counts, config=config,
    )
    return 0


_COMMANDS = {
    "ingest": cmd_ingest,
    "classify": cmd_classify,
    "filter": cmd_filter,
    "sample": cmd_sample,
    "augment": cmd_augment,
    "evaluate": cmd_evaluate,
}


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    cfg = _load_config(argv)
    parser = build_parser(cfg)
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except SystemExitWithCode as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except (CorpusError, MetricsError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except AugmentationAborted as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PROVIDER
    except ProviderError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PROVIDER


if __name__ == "__main__":
    raise SystemExit(main())
