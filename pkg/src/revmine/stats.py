"""Corpus-level change statistics: by section position, category and author count."""

from __future__ import annotations

import math
from collections import Counter, defaultdict
from dataclasses import dataclass
from typing import Iterable, Sequence

from .latex import Position
from .revisions import CHANGE_TYPES, RevisionPair, RevisionType

HISTOGRAM_POSITIONS = (Position.INTRODUCTION, Position.MIDDLE, Position.CONCLUSION)
DEFAULT_AUTHOR_CAP = 5


@dataclass(frozen=True)
class PaperSummary:
    """Per-paper facts the statistics need beyond the pairs themselves."""

    paper_id: str
    category: str
    author_count: int
    n_versions: int
    v1_sentences: int = 0
    changed: bool = False

    def to_dict(self) -> dict:
        return {
            "paper_id": self.paper_id,
            "category": self.category,
            "author_count": self.author_count,
            "n_versions": self.n_versions,
            "v1_sentences": self.v1_sentences,
            "changed": self.changed,
        }

    @classmethod
    def from_dict(cls, d) -> "PaperSummary":
        return cls(d["paper_id"], d["category"], d["author_count"], d["n_versions"],
                   d.get("v1_sentences", 0), d.get("changed", False))


def _changes(pairs: Iterable[RevisionPair]) -> list[RevisionPair]:
    return [p for p in pairs if p.rtype.is_change]


def position_histogram(all_pairs: Iterable[RevisionPair]) -> dict[Position, dict[RevisionType, int]]:
    """Change counts by position and type; abstracts count as introduction."""
    table = {pos: {t: 0 for t in CHANGE_TYPES} for pos in HISTOGRAM_POSITIONS}
    for p in _changes(all_pairs):
        pos = Position.INTRODUCTION if p.position is Position.ABSTRACT else p.position
        table[pos][p.rtype] += 1
    return table


@dataclass(frozen=True)
class CategoryRow:
    category: str
    counts: dict
    sentences: int

    @property
    def total(self) -> int:
        return sum(self.counts.values())

    @property
    def rate(self) -> float:
        return self.total / self.sentences if self.sentences else 0.0

    def type_rate(self, rtype: RevisionType) -> float:
        return self.counts[rtype] / self.sentences if self.sentences else 0.0


def category_stats(papers: Sequence[PaperSummary],
                   all_pairs: Iterable[RevisionPair]) -> dict[str, CategoryRow]:
    """Change counts and changes per first-version sentence, by primary category."""
    cat_of = {p.paper_id: p.category for p in papers}
    counts: dict[str, Counter] = defaultdict(Counter)
    sentences: Counter = Counter()
    for p in papers:
        sentences[p.category] += p.v1_sentences
        counts[p.category]
    for pair in _changes(all_pairs):
        counts[cat_of[pair.paper_id]][pair.rtype] += 1
    return {
        cat: CategoryRow(cat, {t: counts[cat][t] for t in CHANGE_TYPES}, sentences[cat])
        for cat in sorted(counts)
    }


def top_k(rows: Iterable[CategoryRow], k: int | None = 5, key: str = "total") -> list[CategoryRow]:
    """Rows by descending ``key`` ("total" or "rate"), ties broken by category name."""
    ranked = sorted(rows, key=lambda r: (-getattr(r, key), r.category))
    return ranked if k is None else ranked[:k]


def mean(values: Sequence[float]) -> float:
    return math.fsum(values) / len(values) if values else 0.0


def standard_error(values: Sequence[float]) -> float:
    """Sample standard deviation over sqrt(n); 0 for groups of one."""
    n = len(values)
    if n < 2:
        return 0.0
    mu = mean(values)
    var = math.fsum((v - mu) ** 2 for v in values) / (n - 1)
    return math.sqrt(var) / math.sqrt(n)


@dataclass(frozen=True)
class AuthorGroup:
    label: str
    n_papers: int
    mean_changes: float
    se_changes: float
    mean_percent: float
    se_percent: float


def author_bucket(author_count: int, cap: int = DEFAULT_AUTHOR_CAP) -> str:
    return f"{cap}+" if author_count >= cap else str(author_count)


def author_stats(papers: Sequence[PaperSummary], all_pairs: Iterable[RevisionPair],
                 cap: int = DEFAULT_AUTHOR_CAP) -> list[AuthorGroup]:
    """Mean changes and mean fraction of changed v1 sentences per author bucket.

    Each v1 sentence yields exactly one pair, so a paper's changed-sentence
    count equals its number of Deletion/Typo/Rewrite pairs.
    """
    per_paper = Counter(p.paper_id for p in _changes(all_pairs))
    groups: dict[int, list[PaperSummary]] = defaultdict(list)
    for paper in papers:
        groups[min(paper.author_count, cap)].append(paper)
    out = []
    for key in sorted(groups):
        members = groups[key]
        changes = [float(per_paper[p.paper_id]) for p in members]
        percents = [per_paper[p.paper_id] / p.v1_sentences if p.v1_sentences else 0.0
                    for p in members]
        out.append(AuthorGroup(author_bucket(key, cap), len(members),
                               mean(changes), standard_error(changes),
                               mean(percents), standard_error(percents)))
    return out


def version_counts(papers: Sequence[PaperSummary]) -> tuple[float, int]:
    """(fraction of papers with several versions, papers whose text changed)."""
    if not papers:
        return 0.0, 0
    multi = sum(1 for p in papers if p.n_versions >= 2)
    changed = sum(1 for p in papers if p.n_versions >= 2 and p.changed)
    return multi / len(papers), changed


# ---------------------------------------------------------------------------
# TSV tables


def _fmt(x) -> str:
    return f"{x:.6f}" if isinstance(x, float) else str(x)


def _table(name: str, header: Sequence[str], rows: Iterable[Sequence]) -> str:
    lines = [name, "\t".join(header)]
    lines.extend("\t".join(_fmt(v) for v in row) for row in rows)
    return "\n".join(lines) + "\n"


def stats_tables(papers: Sequence[PaperSummary], all_pairs: Sequence[RevisionPair],
                 author_cap: int = DEFAULT_AUTHOR_CAP) -> dict[str, str]:
    """Render every figure analogue as a TSV string keyed by table name.

    Category and author tables cover papers with at least two versions.
    """
    aligned = [p for p in papers if p.n_versions >= 2]
    types = [t.value for t in CHANGE_TYPES]
    hist = position_histogram(all_pairs)
    fig1a = _table("fig1a", ["position", *types, "total"],
                   ([pos.value, *hist[pos].values(), sum(hist[pos].values())]
                    for pos in HISTOGRAM_POSITIONS))

    cats = category_stats(aligned, all_pairs).values()
    fig1b = _table("fig1b", ["category", *types, "total"],
                   ([r.category, *r.counts.values(), r.total] for r in top_k(cats, None)))
    fig1c = _table("fig1c", ["category", *types, "total", "sentences"],
                   ([r.category, *(r.type_rate(t) for t in CHANGE_TYPES), r.rate, r.sentences]
                    for r in top_k(cats, None, key="rate")))

    groups = author_stats(aligned, all_pairs, author_cap)
    fig2a = _table("fig2a", ["authors", "papers", "mean_changes", "stderr"],
                   ([g.label, g.n_papers, g.mean_changes, g.se_changes] for g in groups))
    fig2b = _table("fig2b", ["authors", "papers", "mean_percent_changed", "stderr"],
                   ([g.label, g.n_papers, g.mean_percent, g.se_percent] for g in groups))

    rate, changed = version_counts(papers)
    by_type = Counter(p.rtype for p in all_pairs)
    counts = _table("counts", ["statistic", "value"], [
        ("papers", len(papers)),
        ("multi_version_papers", sum(1 for p in papers if p.n_versions >= 2)),
        ("multi_version_rate", float(rate)),
        ("changed_papers", changed),
        ("v1_sentences", sum(p.v1_sentences for p in papers)),
        *((t.value, by_type[t]) for t in (*CHANGE_TYPES, RevisionType.UNCHANGED)),
        ("revisions", sum(by_type[t] for t in CHANGE_TYPES)),
    ])
    return {"fig1a": fig1a, "fig1b": fig1b, "fig1c": fig1c,
            "fig2a": fig2a, "fig2b": fig2b, "counts": counts}
