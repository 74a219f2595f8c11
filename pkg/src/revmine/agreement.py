"""Inter-annotator agreement on strength-change labels.

Fleiss' kappa over a fixed number of raters per item::

    P_i  = (sum_k n_ik^2 - r) / (r (r - 1))
    p_k  = sum_i n_ik / (N r)
    kappa = (mean(P_i) - sum_k p_k^2) / (1 - sum_k p_k^2)
"""

from __future__ import annotations

import csv
import enum
import math
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence, TextIO

import numpy as np

from .errors import DegenerateAgreement, EmptySubset, LabelIngestError, ThresholdTooLow

DEFAULT_MAJORITY = 5


class Label(enum.Enum):
    STRONGER = "stronger"
    WEAKER = "weaker"
    NO_CHANGE = "no_change"
    CANT_TELL = "cant_tell"

    @classmethod
    def parse(cls, text: str) -> "Label":
        return cls(text.strip().lower())


LABELS = tuple(Label)
STRENGTH_CHANGES = frozenset({Label.STRONGER, Label.WEAKER})


@dataclass(frozen=True)
class LabelRecord:
    pair_id: str
    labeler_id: str
    label: Label


@dataclass(frozen=True)
class LabelMatrix:
    """Per-item category counts; ``counts[i, k]`` raters chose ``categories[k]``."""

    pair_ids: tuple[str, ...]
    counts: np.ndarray
    categories: tuple[Label, ...] = LABELS

    def __post_init__(self):
        counts = np.asarray(self.counts, dtype=np.int64)
        if counts.ndim != 2 or counts.shape[1] != len(self.categories):
            raise ValueError(f"counts must be N x {len(self.categories)}")
        if counts.shape[0] != len(self.pair_ids):
            raise ValueError("one row per pair_id required")
        if (counts < 0).any():
            raise ValueError("counts must be non-negative")
        if counts.shape[0]:
            totals = counts.sum(axis=1)
            expected = Counter(totals.tolist()).most_common(1)[0][0]
            if (totals != expected).any():
                bad = int(np.flatnonzero(totals != expected)[0])
                raise LabelIngestError(f"{totals[bad]} raters, expected {expected}",
                                       pair_id=self.pair_ids[bad])
            if expected < 2:
                raise ValueError("at least two raters per item required")
        counts.setflags(write=False)
        object.__setattr__(self, "counts", counts)

    @property
    def raters(self) -> int:
        return int(self.counts[0].sum()) if len(self.pair_ids) else 0

    def __len__(self) -> int:
        return len(self.pair_ids)

    def subset(self, rows: Sequence[int]) -> "LabelMatrix":
        rows = list(rows)
        return LabelMatrix(tuple(self.pair_ids[i] for i in rows), self.counts[rows],
                           self.categories)

    @classmethod
    def from_records(cls, records: Iterable[LabelRecord]) -> "LabelMatrix":
        """Group records by pair; pairs keep first-seen order.

        Every pair must have the same number of distinct labelers.
        """
        index = {lab: k for k, lab in enumerate(LABELS)}
        seen: set[tuple[str, str]] = set()
        rows: dict[str, list[int]] = {}
        for rec in records:
            key = (rec.pair_id, rec.labeler_id)
            if key in seen:
                raise LabelIngestError(f"duplicate label from labeler {rec.labeler_id!r}",
                                       pair_id=rec.pair_id)
            seen.add(key)
            rows.setdefault(rec.pair_id, [0] * len(LABELS))[index[rec.label]] += 1
        ids = tuple(rows)
        counts = np.array([rows[i] for i in ids], dtype=np.int64).reshape(len(ids), len(LABELS))
        return cls(ids, counts)


def read_labels(fp: TextIO) -> list[LabelRecord]:
    """Parse ``pair_id,labeler_id,label`` CSV; errors carry the file row number."""
    reader = csv.reader(fp)
    header = next(reader, None)
    if header is None or [h.strip().lower() for h in header] != ["pair_id", "labeler_id", "label"]:
        raise LabelIngestError(f"expected header pair_id,labeler_id,label, got {header!r}", row=1)
    out = []
    for row_no, row in enumerate(reader, start=2):
        if not row or all(not c.strip() for c in row):
            continue
        if len(row) != 3:
            raise LabelIngestError(f"expected 3 fields, got {len(row)}", row=row_no)
        pair_id, labeler_id, label = (c.strip() for c in row)
        try:
            lab = Label.parse(label)
        except ValueError:
            raise LabelIngestError(f"unknown label {label!r}", row=row_no,
                                   pair_id=pair_id) from None
        out.append(LabelRecord(pair_id, labeler_id, lab))
    return out


def _counts(matrix) -> np.ndarray:
    return matrix.counts if isinstance(matrix, LabelMatrix) else np.asarray(matrix)


def fleiss_kappa(matrix) -> float:
    """Fleiss' kappa for a :class:`LabelMatrix` or an N x K count array."""
    n = _counts(matrix).astype(np.float64)
    if n.ndim != 2 or n.shape[0] < 1:
        raise ValueError("need a nonempty 2-d count matrix")
    r = n.sum(axis=1)
    if (r != r[0]).any() or r[0] < 2:
        raise ValueError("every item needs the same number (>= 2) of ratings")
    r = r[0]
    p_item = ((n ** 2).sum(axis=1) - r) / (r * (r - 1))
    # fsum keeps the result independent of row and category order
    p_bar = math.fsum(p_item) / n.shape[0]
    p_cat = n.sum(axis=0) / (n.shape[0] * r)
    p_e = math.fsum(p_cat ** 2)
    if p_e >= 1.0:
        raise DegenerateAgreement("all ratings fall in a single category; kappa is undefined")
    return float((p_bar - p_e) / (1.0 - p_e))


@dataclass(frozen=True)
class MajoritySubset:
    rows: tuple[int, ...]
    pair_ids: tuple[str, ...]
    labels: tuple[Label, ...]
    threshold: int

    def __len__(self) -> int:
        return len(self.rows)

    def label_counts(self) -> dict[Label, int]:
        c = Counter(self.labels)
        return {lab: c[lab] for lab in LABELS}


def majority_filter(matrix: LabelMatrix, threshold: int = DEFAULT_MAJORITY) -> MajoritySubset:
    """Items where at least ``threshold`` raters agree, tagged with that label."""
    r = matrix.raters
    if 2 * threshold <= r:
        raise ThresholdTooLow(f"threshold {threshold} does not exceed half of {r} raters")
    rows, ids, labels = [], [], []
    for i, row in enumerate(matrix.counts):
        hits = np.flatnonzero(row >= threshold)
        assert len(hits) <= 1
        if len(hits):
            rows.append(i)
            ids.append(matrix.pair_ids[i])
            labels.append(matrix.categories[int(hits[0])])
    return MajoritySubset(tuple(rows), tuple(ids), tuple(labels), threshold)


def strength_change_rate(majority_subset) -> float:
    """Fraction of majority-labelled items whose label is Stronger or Weaker.

    Accepts a :class:`MajoritySubset`, a label->count mapping, or an iterable
    of labels.
    """
    if isinstance(majority_subset, MajoritySubset):
        counts = majority_subset.label_counts()
    elif isinstance(majority_subset, Mapping):
        counts = {Label(k) if not isinstance(k, Label) else k: v
                  for k, v in majority_subset.items()}
    else:
        counts = Counter(majority_subset)
    total = sum(counts.values())
    if total == 0:
        raise EmptySubset("no items in the majority subset")
    return sum(v for k, v in counts.items() if k in STRENGTH_CHANGES) / total


def format_percent(rate: float) -> str:
    return f"{100 * rate:.1f}%"


@dataclass(frozen=True)
class AgreementReport:
    n_items: int
    raters: int
    kappa: float
    majority_threshold: int
    majority_counts: dict
    subset_kappa: float | None
    strength_change_rate: float | None

    @property
    def subset_size(self) -> int:
        return sum(self.majority_counts.values())

    def to_tsv(self) -> str:
        def num(x):
            return "NA" if x is None else f"{x:.6f}"

        rows = [
            ("items", str(self.n_items)),
            ("raters_per_item", str(self.raters)),
            ("kappa", num(self.kappa)),
            ("majority_threshold", str(self.majority_threshold)),
            ("majority_subset_size", str(self.subset_size)),
            *((f"majority_{lab.value}", str(self.majority_counts[lab])) for lab in LABELS),
            ("majority_kappa", num(self.subset_kappa)),
            ("strength_change_rate", num(self.strength_change_rate)),
            ("strength_change_percent",
             "NA" if self.strength_change_rate is None
             else format_percent(self.strength_change_rate)),
        ]
        return "statistic\tvalue\n" + "".join(f"{k}\t{v}\n" for k, v in rows)


def _kappa_or_none(matrix: LabelMatrix):
    if len(matrix) == 0:
        return None
    try:
        return fleiss_kappa(matrix)
    except DegenerateAgreement:
        return None


def agreement_report(matrix: LabelMatrix, threshold: int = DEFAULT_MAJORITY) -> AgreementReport:
    """Kappa on all items, then the majority subset, its kappa and change rate.

    Kappa on the full set must be defined; on the subset a degenerate or
    empty result is reported as NA.
    """
    kappa = fleiss_kappa(matrix)
    subset = majority_filter(matrix, threshold)
    rate = strength_change_rate(subset) if len(subset) else None
    return AgreementReport(
        n_items=len(matrix),
        raters=matrix.raters,
        kappa=kappa,
        majority_threshold=threshold,
        majority_counts=subset.label_counts(),
        subset_kappa=_kappa_or_none(matrix.subset(subset.rows)),
        strength_change_rate=rate,
    )
