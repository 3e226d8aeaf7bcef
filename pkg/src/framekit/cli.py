"""Command line entry point: ``framekit <subcommand> [options]``.

Options may also come from a TOML file given with ``--config``. Top-level
keys apply to every subcommand and a table named after the subcommand
overrides them; keys are option names with dashes turned into underscores
(``sem_filter = "top-3"``, ``lambda = 1e-6``). Flags on the command line
win over the file.

Errors are reported as one JSON object on stderr with a non-zero exit.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path
from typing import Dict, List, Optional

from . import __version__
from .errors import FrameKitError

logger = logging.getLogger("framekit")

DEFAULTS = {
    "format": "jsonl",
    "strict": False,
    "exemplars": False,
    "test_docs": "",
    "dev_docs": "",
    "pos_filter": "",
    "mwe_filter": False,
    "sem_filter": "none",
    "max_per_source": None,
    "lambda": 1e-6,
    "rho": 0.95,
    "eps": 1e-6,
    "epochs": 10,
    "hierarchy": False,
    "beam": 100,
    "seed": 0,
    "jobs": 1,
    "samples": 10000,
    "frame_credit": False,
    "host": "127.0.0.1",
    "port": 8080,
}


def _csv(text: str) -> List[str]:
    return [x.strip() for x in text.split(",") if x.strip()] if text else []


def _write(text: str, out: Optional[str]) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _dump(doc) -> str:
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def _require(args, *names):
    missing = [n for n in names if getattr(args, n) is None]
    if missing:
        raise UsageError("missing required option(s): " + ", ".join("--" + n.replace("_", "-") for n in missing))


class UsageError(Exception):
    pass


def _load_corpus(args, path=None):
    from .fndata import ingest_corpus

    return ingest_corpus(path or args.corpus, args.format, strict=args.strict,
                         **({"include_exemplars": True} if getattr(args, "exemplars", False) and args.format == "fnxml" else {}))


def _load_trees(path) -> Dict[int, object]:
    from .deptree import ingest_conll

    return {t.sentence_id: t for t in ingest_conll(path)}


# subcommands


def cmd_ingest(args) -> int:
    from .fndata import corpus_stats, split_corpus, write_jsonl

    _require(args, "corpus", "out")
    corpus = _load_corpus(args)
    test_docs, dev_docs = _csv(args.test_docs), _csv(args.dev_docs)
    report = {"stats": corpus_stats(corpus).to_dict(), "rejected": len(corpus.rejected)}
    if test_docs or dev_docs:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        parts = dict(zip(("train", "dev", "test"), split_corpus(corpus, test_docs, dev_docs)))
        for name, part in parts.items():
            write_jsonl(part, out / f"{name}.jsonl")
            report[name] = corpus_stats(part).to_dict()
    else:
        write_jsonl(corpus, args.out)
    for r in corpus.rejected:
        logger.warning("rejected record %s at %s: %s", r.record_id, r.position, r.reason)
    sys.stdout.write(_dump(report))
    return 0


def cmd_stats(args) -> int:
    from .fndata import corpus_stats

    _require(args, "corpus")
    _write(_dump(corpus_stats(_load_corpus(args)).to_dict()), args.out)
    return 0


def cmd_augment(args) -> int:
    from .deptree import format_conll
    from .embeddings import SemanticFilterSpec, load_table
    from .fndata import POS, write_jsonl
    from .paraphrase import GenerationConfig, augment, export_augmented, project_trees
    from .valence import build_index

    _require(args, "corpus", "out")
    spec = SemanticFilterSpec.parse(args.sem_filter, seed=args.seed)
    table = None
    if spec.needs_table:
        _require(args, "embeddings")
    if args.embeddings:
        table = load_table(args.embeddings, "binary" if args.embeddings.endswith(".bin") else "text")
    pos = frozenset(POS.parse(p) for p in _csv(args.pos_filter)) or None
    cfg = GenerationConfig(pos, args.mwe_filter, spec, args.max_per_source)
    corpus = _load_corpus(args)
    generated, report = augment(build_index(corpus), cfg, table, args.jobs)
    augmented = export_augmented(corpus, generated)
    write_jsonl(augmented, args.out)
    doc = report.to_dict()
    if args.conll:
        trees, missing = project_trees(corpus, generated, _load_trees(args.conll))
        Path(args.out).with_suffix(".conll").write_text(
            format_conll(trees[s] for s in sorted(trees)), encoding="utf-8"
        )
        doc["generated_without_tree"] = missing
    sys.stdout.write(_dump(doc))
    return 0


def cmd_train(args) -> int:
    from .argid import FeatureExtractor, Model, TemplateConfig, make_instances, objective, train

    _require(args, "corpus", "conll", "model")
    corpus = _load_corpus(args)
    templates = TemplateConfig(hierarchy=args.hierarchy)
    extractor = FeatureExtractor(templates, corpus.frames, corpus.relations)
    instances, report = make_instances(corpus, _load_trees(args.conll), extractor)
    log = []

    def on_epoch(epoch, value):
        log.append({"epoch": epoch, "objective": value})
        logger.info("epoch %d objective %.6g", epoch, value)

    model = train(Model(lam=args.__dict__["lambda"], rho=args.rho, eps=args.eps, templates=templates),
                  instances, epochs=args.epochs, seed=args.seed, on_epoch=on_epoch)
    model.save(args.model)
    doc = {"instances": report.to_dict(), "epochs": log,
           "final_objective": log[-1]["objective"] if log else objective(model, instances)}
    if args.out:
        Path(args.out).write_text(_dump(doc), encoding="utf-8")
    sys.stdout.write(_dump(doc))
    return 0


def cmd_predict(args) -> int:
    from .argid import FeatureExtractor, Model, predict

    _require(args, "corpus", "conll", "model")
    if args.beam < 1:
        raise UsageError("--beam must be >= 1")
    corpus = _load_corpus(args)
    model = Model.load(args.model)
    extractor = FeatureExtractor(model.templates, corpus.frames, corpus.relations)
    records = predict(model, extractor, corpus, _load_trees(args.conll), args.beam, args.jobs)
    _write("".join(json.dumps(r, sort_keys=True) + "\n" for r in records), args.out)
    return 0


def cmd_score(args) -> int:
    from .evaluation import (EvalConfig, aggregate, bootstrap_p, load_predictions, per_sentence,
                             score_corpus)

    _require(args, "corpus", "predictions")
    gold = _load_corpus(args)
    cfg = EvalConfig(frame_credit=args.frame_credit)
    tallies = score_corpus(gold, load_predictions(args.predictions), cfg)
    doc = aggregate(tallies.values()).to_dict()
    if args.baseline:
        base = score_corpus(gold, load_predictions(args.baseline), cfg)
        doc["baseline"] = aggregate(base.values()).to_dict()
        doc["p"] = bootstrap_p(per_sentence(gold, tallies), per_sentence(gold, base),
                               args.samples, args.seed)
    _write(_dump(doc), args.out)
    return 0


def cmd_analyze(args) -> int:
    from .analysis import (ItemKind, coverage_overlap, coverage_to_dict, febar_ratio, fe_counts,
                           per_fe_scores, ptgf_breakdown, rank_frequency, write_csv, write_json,
                           write_rank_frequency)
    from .evaluation import EvalConfig, load_predictions

    _require(args, "corpus", "out")
    gold = _load_corpus(args)
    train = _load_corpus(args, args.train) if args.train else None
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    cfg = EvalConfig()
    written = []
    if args.predictions:
        pred = load_predictions(args.predictions)
        write_csv(per_fe_scores(gold, pred, train, cfg), out / "per_fe.csv")
        write_csv(ptgf_breakdown(gold, pred, cfg).values(), out / "ptgf.csv")
        written += ["per_fe.csv", "ptgf.csv"]
    febar = {fe: febar_ratio(gold, fe) for fe in sorted(fe_counts(gold))}
    write_json(febar, out / "febar.json")
    written.append("febar.json")
    if train is not None:
        write_json(coverage_to_dict(coverage_overlap(train, gold)), out / "coverage.json")
        written.append("coverage.json")
    for kind in ItemKind:
        name = f"rank_frequency_{kind.value}.dat"
        write_rank_frequency(rank_frequency(gold, kind), out / name)
        written.append(name)
    sys.stdout.write(_dump({"written": written}))
    return 0


def cmd_serve(args) -> int:
    from .service import serve

    _require(args, "corpus")
    port = int(os.environ.get("FRAMEKIT_PORT", args.port))
    serve(_load_corpus(args), args.host, port)
    return 0


COMMANDS = {
    "ingest": cmd_ingest, "stats": cmd_stats, "augment": cmd_augment, "train": cmd_train,
    "predict": cmd_predict, "score": cmd_score, "analyze": cmd_analyze, "serve": cmd_serve,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="TOML file with option values")
    common.add_argument("--corpus", help="corpus file (jsonl) or FrameNet release directory (fnxml)")
    common.add_argument("--format", choices=["jsonl", "fnxml"], default=None)
    common.add_argument("--strict", action="store_true", default=None, help="fail on invalid records")
    common.add_argument("--out", help="output file or directory")
    common.add_argument("--seed", type=int, default=None)
    common.add_argument("--jobs", type=int, default=None)
    common.add_argument("-v", "--verbose", action="store_true")

    p = argparse.ArgumentParser(prog="framekit", description=__doc__.split("\n")[0])
    p.add_argument("--version", action="version", version=f"framekit {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("ingest", parents=[common], help="read a corpus, validate, optionally split")
    s.add_argument("--exemplars", action="store_true", default=None)
    s.add_argument("--test-docs", help="comma separated document names")
    s.add_argument("--dev-docs", help="comma separated document names")

    sub.add_parser("stats", parents=[common], help="corpus counts")

    s = sub.add_parser("augment", parents=[common], help="generate paraphrastic training data")
    s.add_argument("--embeddings", help="vector table (.bin for binary, text otherwise)")
    s.add_argument("--conll", help="trees of the corpus; projected trees go next to --out")
    s.add_argument("--pos-filter", help="comma separated POS tags of sources to keep, e.g. V,N")
    s.add_argument("--mwe-filter", action="store_true", default=None)
    s.add_argument("--sem-filter", help="none, random-N, top-N or threshold-T")
    s.add_argument("--max-per-source", type=int)

    s = sub.add_parser("train", parents=[common], help="train the argument identification model")
    s.add_argument("--conll")
    s.add_argument("--model", help="model file to write")
    s.add_argument("--lambda", type=float, dest="lambda")
    s.add_argument("--rho", type=float)
    s.add_argument("--eps", type=float)
    s.add_argument("--epochs", type=int)
    s.add_argument("--hierarchy", action="store_true", default=None)

    s = sub.add_parser("predict", parents=[common], help="decode arguments with gold targets and frames")
    s.add_argument("--conll")
    s.add_argument("--model")
    s.add_argument("--beam", type=int)

    s = sub.add_parser("score", parents=[common], help="weighted P/R/F1, optional significance test")
    s.add_argument("--predictions")
    s.add_argument("--baseline", help="predictions of a second system to test against")
    s.add_argument("--samples", type=int)
    s.add_argument("--frame-credit", action="store_true", default=None)

    s = sub.add_parser("analyze", parents=[common], help="per-FE, PT.GF, febar, coverage reports")
    s.add_argument("--predictions")
    s.add_argument("--train", help="training corpus for counts and coverage")

    s = sub.add_parser("serve", parents=[common], help="HTTP valence pattern query service")
    s.add_argument("--host")
    s.add_argument("--port", type=int)
    return p


def load_config(path) -> dict:
    try:
        import tomllib
    except ModuleNotFoundError:  # Python < 3.11
        import tomli as tomllib
    with open(path, "rb") as fh:
        return tomllib.load(fh)


def resolve(args: argparse.Namespace) -> argparse.Namespace:
    """Fill unset options from the config file, then from built-in defaults."""
    cfg = {}
    if args.config:
        raw = load_config(args.config)
        cfg = {k.replace("-", "_"): v for k, v in raw.items() if not isinstance(v, dict)}
        cfg.update({k.replace("-", "_"): v for k, v in raw.get(args.command, {}).items()})
    for key, value in vars(args).items():
        if value is None:
            if key in cfg:
                setattr(args, key, cfg[key])
            elif key in DEFAULTS:
                setattr(args, key, DEFAULTS[key])
    return args


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        args = resolve(args)
        return COMMANDS[args.command](args)
    except Exception as exc:  # every failure becomes a JSON error record
        if not isinstance(exc, (FrameKitError, UsageError, ValueError, OSError)):
            logger.debug("unexpected failure", exc_info=True)
        err = {"error": {"type": type(exc).__name__, "message": str(exc)}}
        if getattr(exc, "position", None) is not None:
            err["error"]["position"] = str(exc.position)
        sys.stderr.write(json.dumps(err, sort_keys=True) + "\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
