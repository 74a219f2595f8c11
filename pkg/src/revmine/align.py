"""Section-level (macro) and sentence-level (micro) alignment of two versions."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .lexical import similarity

DEFAULT_MISMATCH_PENALTY = 0.1


def _lcs_pairs(a: Sequence, b: Sequence) -> list[tuple[int, int]]:
    """Index pairs of one longest common subsequence under equality.

    Backtrace prefers a match whenever the two tail items are equal, then
    dropping from ``b``, then from ``a``; the result is deterministic.
    """
    n, m = len(a), len(b)
    L = [[0] * (m + 1) for _ in range(n + 1)]
    for i in range(n - 1, -1, -1):
        for j in range(m - 1, -1, -1):
            if a[i] == b[j]:
                L[i][j] = L[i + 1][j + 1] + 1
            else:
                L[i][j] = max(L[i + 1][j], L[i][j + 1])
    pairs = []
    i = j = 0
    while i < n and j < m:
        if a[i] == b[j]:
            pairs.append((i, j))
            i += 1
            j += 1
        elif L[i][j + 1] >= L[i + 1][j]:
            j += 1
        else:
            i += 1
    return pairs


@dataclass(frozen=True)
class SectionBlock:
    """A unit of micro alignment: v1 sections vs v2 sections.

    Anchored blocks hold exactly one section per side with equal titles.
    Synthetic blocks gather the unmatched run between two anchors; either
    side may be empty.
    """

    v1: tuple[int, ...]
    v2: tuple[int, ...]
    synthetic: bool


@dataclass(frozen=True)
class SectionPairing:
    pairs: tuple[tuple[int, int], ...]
    unmatched_v1: tuple[int, ...]
    unmatched_v2: tuple[int, ...]
    blocks: tuple[SectionBlock, ...] = ()

    @property
    def synthetic(self) -> list[SectionBlock]:
        return [b for b in self.blocks if b.synthetic]


def align_sections(doc_v1, doc_v2) -> SectionPairing:
    """Order-preserving section matching on equal normalized titles.

    Sections left between two consecutive title anchors are merged into one
    synthetic block per gap so their sentences still get aligned.
    """
    t1 = [s.norm_title for s in doc_v1.sections]
    t2 = [s.norm_title for s in doc_v2.sections]
    pairs = _lcs_pairs(t1, t2)
    matched1 = {i for i, _ in pairs}
    matched2 = {j for _, j in pairs}

    blocks = []
    prev_i = prev_j = -1
    for i, j in pairs + [(len(t1), len(t2))]:
        gap1 = tuple(range(prev_i + 1, i))
        gap2 = tuple(range(prev_j + 1, j))
        if gap1 or gap2:
            blocks.append(SectionBlock(gap1, gap2, True))
        if i < len(t1):
            blocks.append(SectionBlock((i,), (j,), False))
        prev_i, prev_j = i, j

    return SectionPairing(
        pairs=tuple(pairs),
        unmatched_v1=tuple(i for i in range(len(t1)) if i not in matched1),
        unmatched_v2=tuple(j for j in range(len(t2)) if j not in matched2),
        blocks=tuple(blocks),
    )


@dataclass(frozen=True)
class Alignment:
    links: tuple[tuple[int, int, float], ...]
    deleted_v1: tuple[int, ...]
    added_v2: tuple[int, ...]
    dp_score: float
    mismatch_penalty: float = DEFAULT_MISMATCH_PENALTY
    n_v1: int = field(default=0)
    n_v2: int = field(default=0)

    def check(self) -> None:
        """Raise AssertionError if the monotone one-to-one invariants fail."""
        for (i0, j0, _), (i1, j1, _) in zip(self.links, self.links[1:]):
            assert i0 < i1 and j0 < j1, f"crossing or repeated link {(i0, j0)} -> {(i1, j1)}"
        for i, j, sim in self.links:
            assert sim > self.mismatch_penalty, f"link {(i, j)} has sim {sim} <= penalty"
        linked1 = [i for i, _, _ in self.links]
        linked2 = [j for _, j, _ in self.links]
        assert sorted(linked1 + list(self.deleted_v1)) == list(range(self.n_v1))
        assert sorted(linked2 + list(self.added_v2)) == list(range(self.n_v2))


def _tokens(s):
    return s.tokens if hasattr(s, "tokens") else s


def align_matrix(sim: Sequence[Sequence[float]], n_v1: int, n_v2: int,
                 mismatch_penalty: float = DEFAULT_MISMATCH_PENALTY) -> Alignment:
    """Monotone one-to-one alignment maximizing the sum of (sim - penalty).

    Skipping a sentence on either side is free.  A link is only taken when
    its similarity strictly exceeds the penalty.  Backtrace ties resolve to
    the diagonal first, then skipping the v2 sentence, then the v1 sentence.
    """
    if mismatch_penalty < 0:
        raise ValueError("mismatch_penalty must be >= 0")
    M = [[0.0] * (n_v2 + 1) for _ in range(n_v1 + 1)]
    for i in range(1, n_v1 + 1):
        row, up = M[i], M[i - 1]
        srow = sim[i - 1]
        for j in range(1, n_v2 + 1):
            best = up[j] if up[j] >= row[j - 1] else row[j - 1]
            s = srow[j - 1]
            if s > mismatch_penalty:
                diag = up[j - 1] + (s - mismatch_penalty)
                if diag > best:
                    best = diag
            row[j] = best

    links = []
    i, j = n_v1, n_v2
    while i > 0 and j > 0:
        s = sim[i - 1][j - 1]
        if s > mismatch_penalty and M[i][j] == M[i - 1][j - 1] + (s - mismatch_penalty):
            links.append((i - 1, j - 1, s))
            i -= 1
            j -= 1
        elif M[i][j] == M[i][j - 1]:
            j -= 1
        else:
            i -= 1
    links.reverse()
    linked1 = {i for i, _, _ in links}
    linked2 = {j for _, j, _ in links}
    return Alignment(
        links=tuple(links),
        deleted_v1=tuple(i for i in range(n_v1) if i not in linked1),
        added_v2=tuple(j for j in range(n_v2) if j not in linked2),
        dp_score=M[n_v1][n_v2],
        mismatch_penalty=mismatch_penalty,
        n_v1=n_v1,
        n_v2=n_v2,
    )


def similarity_matrix(sentences_v1, sentences_v2, idf_model) -> list[list[float]]:
    t2 = [_tokens(s) for s in sentences_v2]
    return [[similarity(_tokens(a), b, idf_model) for b in t2] for a in sentences_v1]


def align_sentences(sentences_v1, sentences_v2, idf_model,
                    mismatch_penalty: float = DEFAULT_MISMATCH_PENALTY) -> Alignment:
    """Align two sentence lists (``Sentence`` objects or token lists)."""
    sim = similarity_matrix(sentences_v1, sentences_v2, idf_model)
    return align_matrix(sim, len(sentences_v1), len(sentences_v2), mismatch_penalty)
