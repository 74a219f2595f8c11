"""Typed revision pairs: Deletion, Typo, Rewrite (plus Unchanged)."""

from __future__ import annotations

import enum
import json
import random
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .align import Alignment, _lcs_pairs
from .errors import SampleTooLarge
from .latex import Position
from .lexical import edit_distance

DEFAULT_TYPO_THRESHOLD = 3
DEFAULT_SIM_THRESHOLD = 0.5
LABELABLE_POSITIONS = frozenset({Position.ABSTRACT, Position.INTRODUCTION})


class RevisionType(enum.Enum):
    DELETION = "Deletion"
    TYPO = "Typo"
    REWRITE = "Rewrite"
    UNCHANGED = "Unchanged"

    @property
    def is_change(self) -> bool:
        return self is not RevisionType.UNCHANGED


CHANGE_TYPES = (RevisionType.DELETION, RevisionType.TYPO, RevisionType.REWRITE)


@dataclass(frozen=True)
class ChangedSpan:
    v1_run: tuple[str, ...]
    v2_run: tuple[str, ...]


def diff_spans(tokens_v1: Sequence[str], tokens_v2: Sequence[str]) -> list[ChangedSpan]:
    """Maximal non-common runs between the anchors of a token LCS.

    >>> diff_spans(["a", "b", "c"], ["a", "x", "c"])
    [ChangedSpan(v1_run=('b',), v2_run=('x',))]
    """
    spans = []
    prev_i = prev_j = -1
    for i, j in _lcs_pairs(tokens_v1, tokens_v2) + [(len(tokens_v1), len(tokens_v2))]:
        run1 = tuple(tokens_v1[prev_i + 1:i])
        run2 = tuple(tokens_v2[prev_j + 1:j])
        if run1 or run2:
            spans.append(ChangedSpan(run1, run2))
        prev_i, prev_j = i, j
    return spans


def classify_pair(tokens_v1: Sequence[str], tokens_v2: Sequence[str],
                  typo_threshold: int = DEFAULT_TYPO_THRESHOLD) -> RevisionType:
    """Unchanged, Typo (every changed span within the edit budget) or Rewrite."""
    a, b = list(tokens_v1), list(tokens_v2)
    if a == b:
        return RevisionType.UNCHANGED
    # LCS ties can be broken differently depending on argument order; diffing
    # in a canonical order makes the result symmetric
    if b < a:
        a, b = b, a
    for span in diff_spans(a, b):
        if edit_distance(" ".join(span.v1_run), " ".join(span.v2_run)) >= typo_threshold:
            return RevisionType.REWRITE
    return RevisionType.TYPO


@dataclass(frozen=True)
class RevisionPair:
    paper_id: str
    section_title: str
    position: Position
    rtype: RevisionType
    v1_index: int
    v1_text: str
    v2_index: Optional[int] = None
    v2_text: Optional[str] = None
    similarity: Optional[float] = None

    def __post_init__(self):
        deleted = self.rtype is RevisionType.DELETION
        if deleted != (self.v2_index is None):
            raise ValueError("v2 fields must be absent exactly for Deletion pairs")

    def to_json(self) -> str:
        """One JSON object; similarity is written with 6 decimal places."""
        fields = [
            ("paper_id", json.dumps(self.paper_id)),
            ("section_title", json.dumps(self.section_title)),
            ("position", json.dumps(self.position.value)),
            ("rtype", json.dumps(self.rtype.value)),
            ("v1_index", str(self.v1_index)),
        ]
        if self.v2_index is not None:
            fields.append(("v2_index", str(self.v2_index)))
        fields.append(("v1_text", json.dumps(self.v1_text)))
        if self.v2_text is not None:
            fields.append(("v2_text", json.dumps(self.v2_text)))
        if self.similarity is not None:
            fields.append(("similarity", f"{self.similarity:.6f}"))
        return "{" + ", ".join(f'"{k}": {v}' for k, v in fields) + "}"

    @classmethod
    def from_json(cls, line: str) -> "RevisionPair":
        d = json.loads(line)
        return cls(
            paper_id=d["paper_id"],
            section_title=d["section_title"],
            position=Position(d["position"]),
            rtype=RevisionType(d["rtype"]),
            v1_index=d["v1_index"],
            v1_text=d["v1_text"],
            v2_index=d.get("v2_index"),
            v2_text=d.get("v2_text"),
            similarity=d.get("similarity"),
        )


def _context(origins, i):
    if origins is None:
        return "", Position.MIDDLE
    sec = origins[i]
    return sec.raw_title, sec.position


def _text(s):
    return s.spaced if hasattr(s, "spaced") else " ".join(s)


def _tokens(s):
    return s.tokens if hasattr(s, "tokens") else tuple(s)


def classify_alignment(alignment: Alignment, sentences_v1, sentences_v2,
                       paper_id: str = "", origins_v1=None,
                       typo_threshold: int = DEFAULT_TYPO_THRESHOLD,
                       v1_offset: int = 0, v2_offset: int = 0) -> list[RevisionPair]:
    """One pair per v1 sentence, in v1 order; added v2 sentences are not emitted.

    ``origins_v1[i]`` is the Section that v1 sentence ``i`` came from and
    supplies the title and position; without it pairs get an untitled Middle
    context.  The offsets shift the recorded indices so that block-local
    alignments report document-wide sentence indices.
    """
    linked = {i: (j, sim) for i, j, sim in alignment.links}
    out = []
    for i, s1 in enumerate(sentences_v1):
        title, position = _context(origins_v1, i)
        if i in linked:
            j, sim = linked[i]
            s2 = sentences_v2[j]
            rtype = classify_pair(_tokens(s1), _tokens(s2), typo_threshold)
            out.append(RevisionPair(paper_id, title, position, rtype, i + v1_offset,
                                    _text(s1), j + v2_offset, _text(s2), sim))
        else:
            out.append(RevisionPair(paper_id, title, position, RevisionType.DELETION,
                                    i + v1_offset, _text(s1)))
    return out


def revision_count(pairs: Iterable[RevisionPair]) -> int:
    return sum(1 for p in pairs if p.rtype.is_change)


def filter_labelable(pairs: Iterable[RevisionPair],
                     sim_threshold: float = DEFAULT_SIM_THRESHOLD,
                     positions=LABELABLE_POSITIONS) -> list[RevisionPair]:
    """Matched Typo/Rewrite pairs with similarity strictly above the threshold."""
    positions = frozenset(positions)
    return [
        p for p in pairs
        if p.rtype in (RevisionType.TYPO, RevisionType.REWRITE)
        and p.similarity is not None and p.similarity > sim_threshold
        and p.position in positions
    ]


def sample_pairs(pairs: Sequence[RevisionPair], n: int, seed: int) -> list[RevisionPair]:
    if n < 0:
        raise ValueError("n must be non-negative")
    if n > len(pairs):
        raise SampleTooLarge(f"requested {n} pairs from a pool of {len(pairs)}")
    return random.Random(seed).sample(list(pairs), n)


def write_pairs(pairs: Iterable[RevisionPair], fp) -> int:
    n = 0
    for p in pairs:
        fp.write(p.to_json())
        fp.write("\n")
        n += 1
    return n


def read_pairs(fp) -> list[RevisionPair]:
    return [RevisionPair.from_json(line) for line in fp if line.strip()]
