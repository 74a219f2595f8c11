"""Command-line pipeline: extract, pairs, stats, sample, agreement.

Exit codes: 0 success, 1 fatal configuration or input error, 2 when every
paper failed extraction.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, fields
from pathlib import Path
from typing import Callable, Optional, Sequence
from urllib.parse import quote

from . import agreement as agr
from .errors import ConfigError, EmptyCorpus, MissingPairs, RevmineError
from .latex import Position, list_papers, load_paper
from .lexical import build_idf
from .pipeline import ExtractedPaper, extract_paper, fingerprint, process_paper
from .revisions import (
    LABELABLE_POSITIONS,
    filter_labelable,
    read_pairs,
    sample_pairs,
    write_pairs,
)
from .stats import PaperSummary, stats_tables

log = logging.getLogger("revmine")

EXIT_OK, EXIT_INPUT, EXIT_ALL_FAILED = 0, 1, 2


class AllPapersFailed(RevmineError):
    pass


@dataclass(frozen=True)
class PipelineConfig:
    corpus_root: Optional[Path] = None
    out: Path = Path("out")
    mismatch_penalty: float = 0.1
    sim_threshold: float = 0.5
    typo_edit_distance: int = 3
    majority: int = 5
    positions: frozenset = LABELABLE_POSITIONS
    sample_n: Optional[int] = None
    seed: int = 0
    jobs: int = 1
    dump_alignment: bool = False

    def validate(self) -> "PipelineConfig":
        if self.mismatch_penalty < 0:
            raise ConfigError("mismatch_penalty must be >= 0")
        if not 0.0 <= self.sim_threshold <= 1.0:
            raise ConfigError("sim_threshold must lie in [0, 1]")
        if self.typo_edit_distance < 1:
            raise ConfigError("typo_edit_distance must be >= 1")
        if self.majority < 1:
            raise ConfigError("majority must be >= 1")
        if self.jobs < 1:
            raise ConfigError("jobs must be >= 1")
        if self.sample_n is not None and self.sample_n < 0:
            raise ConfigError("sample_n must be >= 0")
        return self

    # output locations
    @property
    def extracted_dir(self) -> Path:
        return self.out / "extracted"

    @property
    def pairs_path(self) -> Path:
        return self.out / "pairs.jsonl"

    @property
    def labelable_path(self) -> Path:
        return self.out / "labelable.jsonl"

    @property
    def papers_path(self) -> Path:
        return self.out / "papers.jsonl"

    @property
    def alignment_path(self) -> Path:
        return self.out / "alignments.jsonl"

    @property
    def idf_path(self) -> Path:
        return self.out / "idf.tsv"

    @property
    def stats_dir(self) -> Path:
        return self.out / "stats"

    @property
    def sample_path(self) -> Path:
        return self.out / "sample.jsonl"

    @property
    def agreement_path(self) -> Path:
        return self.out / "agreement.tsv"


def _parse_positions(text: str) -> frozenset:
    out = set()
    for part in text.replace("+", ",").split(","):
        part = part.strip()
        if not part:
            continue
        try:
            out.add(Position(part.capitalize()))
        except ValueError:
            raise ConfigError(f"unknown position {part!r}") from None
    return frozenset(out)


_CONVERTERS: dict[str, Callable[[str], object]] = {
    "corpus_root": Path,
    "out": Path,
    "mismatch_penalty": float,
    "sim_threshold": float,
    "typo_edit_distance": int,
    "majority": int,
    "positions": _parse_positions,
    "sample_n": int,
    "seed": int,
    "jobs": int,
    "dump_alignment": lambda s: s.strip().lower() in ("1", "true", "yes", "on"),
}


def read_config_file(path: str | Path) -> dict:
    """``key = value`` lines; ``#`` starts a comment, dashes equal underscores."""
    values = {}
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key = key.strip().replace("-", "_")
        if not sep or key not in _CONVERTERS:
            raise ConfigError(f"{path}:{lineno}: unrecognized setting {line!r}")
        try:
            values[key] = _CONVERTERS[key](value.strip())
        except ValueError as exc:
            raise ConfigError(f"{path}:{lineno}: {exc}") from None
    return values


# ---------------------------------------------------------------------------
# commands


def _write_atomic(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_text(text, encoding="utf-8")
    os.replace(tmp, path)


def _cache_path(cache_dir: Path, paper_id: str) -> Path:
    return cache_dir / (quote(paper_id, safe="") + ".json")


def _extract_one(args):
    paper_dir, cache_dir = args
    try:
        raw = load_paper(paper_dir)
        cache = _cache_path(cache_dir, raw.paper_id)
        if cache.exists():
            try:
                cached = ExtractedPaper.from_json(cache.read_text(encoding="utf-8"))
            except (ValueError, KeyError):
                cached = None
            if cached is not None and cached.fingerprint == fingerprint(raw):
                return cached, None, False
        return extract_paper(raw), None, True
    except (RevmineError, OSError, UnicodeDecodeError) as exc:
        return None, f"{paper_dir.name}: {type(exc).__name__}: {exc}", False


def _map(fn, items: Sequence, jobs: int) -> list:
    if jobs <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, items))


def cmd_extract(config: PipelineConfig) -> list[ExtractedPaper]:
    """Extract every paper into ``<out>/extracted/<quoted paper_id>.json``.

    Entries whose source fingerprint is unchanged are reused.  Failed papers
    are logged and skipped; if all of them fail, AllPapersFailed is raised.
    """
    if config.corpus_root is None:
        raise ConfigError("--corpus-root is required")
    dirs = list_papers(config.corpus_root)
    if not dirs:
        raise EmptyCorpus(f"no papers under {config.corpus_root}")
    results = _map(_extract_one, [(d, config.extracted_dir) for d in dirs], config.jobs)
    papers, failures = [], []
    for paper, err, fresh in results:
        if paper is None:
            log.warning("extraction failed for %s", err)
            failures.append(err)
            continue
        if fresh:
            _write_atomic(_cache_path(config.extracted_dir, paper.paper_id),
                          paper.to_json() + "\n")
        papers.append(paper)
    if not papers:
        raise AllPapersFailed(f"all {len(dirs)} papers failed extraction")
    log.info("extracted %d papers, %d failed", len(papers), len(failures))
    return sorted(papers, key=lambda p: p.paper_id)


def _process(args):
    paper, idf, penalty, typo = args
    return process_paper(paper, idf, penalty, typo)


def cmd_pairs(config: PipelineConfig, papers: Optional[list[ExtractedPaper]] = None) -> dict:
    """Build idf over first versions, align first vs last, write pair corpora."""
    if papers is None:
        papers = cmd_extract(config)
    idf = build_idf(p.first for p in papers)
    with open(config.idf_path, "w", encoding="utf-8") as fp:
        idf.dump(fp)
    jobs = [(p, idf, config.mismatch_penalty, config.typo_edit_distance) for p in papers]
    results = _map(_process, jobs, config.jobs)

    all_pairs = [pair for r in results for pair in r.pairs]
    labelable = filter_labelable(all_pairs, config.sim_threshold, config.positions)
    with open(config.pairs_path, "w", encoding="utf-8") as fp:
        write_pairs(all_pairs, fp)
    with open(config.labelable_path, "w", encoding="utf-8") as fp:
        write_pairs(labelable, fp)
    with open(config.papers_path, "w", encoding="utf-8") as fp:
        for r in results:
            fp.write(json.dumps(r.summary.to_dict(), sort_keys=True) + "\n")
    if config.dump_alignment:
        with open(config.alignment_path, "w", encoding="utf-8") as fp:
            for r in results:
                for row in r.alignment_rows:
                    fp.write(json.dumps(row) + "\n")
    log.info("wrote %d pairs (%d labelable)", len(all_pairs), len(labelable))
    return {"pairs": len(all_pairs), "labelable": len(labelable), "papers": len(papers)}


def _read_summaries(path: Path) -> list[PaperSummary]:
    if not path.exists():
        return []
    with open(path, encoding="utf-8") as fp:
        return [PaperSummary.from_dict(json.loads(line)) for line in fp if line.strip()]


def cmd_stats(config: PipelineConfig) -> dict[str, str]:
    if not config.pairs_path.exists():
        raise MissingPairs(f"{config.pairs_path} not found; run the pairs command first")
    with open(config.pairs_path, encoding="utf-8") as fp:
        pairs = read_pairs(fp)
    tables = stats_tables(_read_summaries(config.papers_path), pairs)
    for name, text in tables.items():
        _write_atomic(config.stats_dir / f"{name}.tsv", text)
    return tables


def cmd_sample(config: PipelineConfig) -> int:
    if config.sample_n is None:
        raise ConfigError("--sample-n is required for sampling")
    if not config.labelable_path.exists():
        raise MissingPairs(f"{config.labelable_path} not found; run the pairs command first")
    with open(config.labelable_path, encoding="utf-8") as fp:
        pool = read_pairs(fp)
    chosen = sample_pairs(pool, config.sample_n, config.seed)
    with open(config.sample_path, "w", encoding="utf-8") as fp:
        write_pairs(chosen, fp)
    return len(chosen)


def cmd_agreement(labels_csv: str | Path, config: PipelineConfig) -> agr.AgreementReport:
    with open(labels_csv, encoding="utf-8", newline="") as fp:
        records = agr.read_labels(fp)
    if not records:
        raise agr.LabelIngestError("no label rows")
    matrix = agr.LabelMatrix.from_records(records)
    report = agr.agreement_report(matrix, config.majority)
    _write_atomic(config.agreement_path, report.to_tsv())
    return report


# ---------------------------------------------------------------------------
# argument parsing


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="key=value settings file; flags override it")
    common.add_argument("--corpus-root", dest="corpus_root")
    common.add_argument("--out")
    common.add_argument("--mismatch-penalty", dest="mismatch_penalty", type=float)
    common.add_argument("--sim-threshold", dest="sim_threshold", type=float)
    common.add_argument("--typo-edit-distance", dest="typo_edit_distance", type=int)
    common.add_argument("--majority", type=int)
    common.add_argument("--positions", help="comma list, e.g. abstract,introduction")
    common.add_argument("--sample-n", dest="sample_n", type=int)
    common.add_argument("--seed", type=int)
    common.add_argument("--jobs", type=int)
    common.add_argument("--dump-alignment", dest="dump_alignment", action="store_true",
                        default=None)
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="revmine", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("extract", parents=[common], help="extract documents from the corpus tree")
    sub.add_parser("pairs", parents=[common], help="align versions and write revision pairs")
    sub.add_parser("stats", parents=[common], help="write figure tables from pairs")
    sub.add_parser("sample", parents=[common], help="sample labelable pairs")
    p = sub.add_parser("agreement", parents=[common], help="agreement report from a label CSV")
    p.add_argument("labels_csv")
    return parser


def config_from_args(args: argparse.Namespace) -> PipelineConfig:
    values = read_config_file(args.config) if args.config else {}
    for f in fields(PipelineConfig):
        v = getattr(args, f.name, None)
        if v is None:
            continue
        values[f.name] = _CONVERTERS[f.name](v) if isinstance(v, str) else v
    return PipelineConfig(**values).validate()


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        config = config_from_args(args)
        config.out.mkdir(parents=True, exist_ok=True)
        if args.command == "extract":
            n = len(cmd_extract(config))
            print(f"extracted {n} papers into {config.extracted_dir}")
        elif args.command == "pairs":
            res = cmd_pairs(config)
            print(f"{res['pairs']} pairs, {res['labelable']} labelable -> {config.pairs_path}")
        elif args.command == "stats":
            for text in cmd_stats(config).values():
                print(text)
        elif args.command == "sample":
            n = cmd_sample(config)
            print(f"sampled {n} pairs -> {config.sample_path}")
        elif args.command == "agreement":
            sys.stdout.write(cmd_agreement(args.labels_csv, config).to_tsv())
    except AllPapersFailed as exc:
        log.error("%s", exc)
        return EXIT_ALL_FAILED
    except (RevmineError, OSError) as exc:
        log.error("%s: %s", type(exc).__name__, exc)
        return EXIT_INPUT
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
