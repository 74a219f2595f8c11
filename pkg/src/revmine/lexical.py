"""Tokenization, idf weights, idf-weighted LCS similarity and edit distance.

Similarity between two sentences is the idf weight of their heaviest common
subsequence, normalized by the larger of the two total idf weights.  Because
both numerator and denominator scale together, multiplying every idf by a
positive constant (e.g. switching the log base) leaves similarity unchanged.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Iterable, Mapping, Sequence, TextIO

from .errors import EmptyCorpus

MATH = "[MATH]"


def _is_punct(ch: str) -> bool:
    return not ch.isalnum()


def split_tokens(text: str) -> list[str]:
    """Case-preserving tokenization; :func:`tokenize` lowercases the result."""
    tokens: list[str] = []
    for piece in text.split():
        lead: list[str] = []
        trail: list[str] = []
        while piece and not piece.startswith(MATH) and _is_punct(piece[0]):
            lead.append(piece[0])
            piece = piece[1:]
        while piece and not piece.endswith(MATH) and _is_punct(piece[-1]):
            trail.append(piece[-1])
            piece = piece[:-1]
        tokens.extend(lead)
        if piece:
            tokens.append(piece)
        tokens.extend(reversed(trail))
    return tokens


def tokenize(text: str) -> list[str]:
    """Lowercase and split on whitespace, peeling off edge punctuation.

    >>> tokenize("The Algorithm, proposed.")
    ['the', 'algorithm', ',', 'proposed', '.']
    >>> tokenize("[MATH] holds")
    ['[MATH]', 'holds']
    """
    return [t.lower().replace("[math]", MATH) for t in split_tokens(text)]


@dataclass(frozen=True)
class IdfModel:
    """Frozen document-frequency table with smoothed natural-log idf.

    ``idf(w) = ln((1 + N) / (1 + df(w)))``; unseen tokens get ``ln(1 + N)``
    and the math placeholder is pinned to 0.
    """

    doc_count: int
    df: Mapping[str, int] = field(default_factory=dict)

    def __post_init__(self):
        if self.doc_count < 1:
            raise ValueError("doc_count must be positive")
        for tok, n in self.df.items():
            if not 0 <= n <= self.doc_count:
                raise ValueError(f"df({tok!r})={n} outside [0, {self.doc_count}]")
        object.__setattr__(self, "df", MappingProxyType(dict(self.df)))

    def __reduce__(self):
        # mappingproxy does not pickle; worker processes need a copy
        return (IdfModel, (self.doc_count, dict(self.df)))

    def idf(self, token: str) -> float:
        if token == MATH:
            return 0.0
        return math.log((1 + self.doc_count) / (1 + self.df.get(token, 0)))

    def weights(self, tokens: Sequence[str]) -> list[float]:
        return [self.idf(t) for t in tokens]

    def dump(self, fp: TextIO) -> None:
        fp.write(f"N={self.doc_count}\n")
        for tok in sorted(self.df):
            fp.write(f"{tok}\t{self.df[tok]}\n")

    @classmethod
    def load(cls, fp: TextIO) -> "IdfModel":
        header = fp.readline().rstrip("\n")
        if not header.startswith("N="):
            raise ValueError(f"bad idf header {header!r}")
        df = {}
        for lineno, line in enumerate(fp, start=2):
            line = line.rstrip("\n")
            if not line:
                continue
            tok, sep, count = line.rpartition("\t")
            if not sep:
                raise ValueError(f"line {lineno}: expected token<TAB>df")
            df[tok] = int(count)
        return cls(int(header[2:]), df)


def build_idf(documents: Iterable) -> IdfModel:
    """Count document frequency once per document.

    ``documents`` yields either objects with a ``tokens()`` method (such as
    :class:`revmine.latex.Document`) or plain token iterables.  Pass one
    document per paper, its first version.
    """
    df: Counter[str] = Counter()
    n = 0
    for doc in documents:
        toks = doc.tokens() if hasattr(doc, "tokens") else doc
        df.update(set(toks))
        n += 1
    if n == 0:
        raise EmptyCorpus("cannot build idf from an empty corpus")
    return IdfModel(n, df)


def _weight_of(idf):
    if isinstance(idf, IdfModel):
        return idf.idf
    if isinstance(idf, Mapping):
        return lambda t: float(idf[t])
    return idf


def weighted_lcs(tokens_a: Sequence[str], tokens_b: Sequence[str], idf) -> float:
    """Max total idf over common subsequences of the two token lists.

    ``idf`` is an :class:`IdfModel`, a token->weight mapping, or a callable.
    """
    weight = _weight_of(idf)
    shared = set(tokens_a).intersection(tokens_b)
    if not shared:
        return 0.0
    # tokens absent from the other side can never match; dropping them keeps
    # the DP small without changing its value
    a = [t for t in tokens_a if t in shared]
    b = [t for t in tokens_b if t in shared]
    w = {t: weight(t) for t in shared}
    prev = [0.0] * (len(b) + 1)
    for x in a:
        cur = [0.0] * (len(b) + 1)
        wx = w[x]
        for j, y in enumerate(b, start=1):
            best = prev[j] if prev[j] >= cur[j - 1] else cur[j - 1]
            if x == y and prev[j - 1] + wx > best:
                best = prev[j - 1] + wx
            cur[j] = best
        prev = cur
    return prev[-1]


def similarity(sent_a: Sequence[str], sent_b: Sequence[str], idf) -> float:
    """Weighted LCS over the larger of the two idf totals, in [0, 1].

    When both totals are zero (e.g. sentences made only of ``[MATH]`` and
    ubiquitous words) the score is 1 for equal token lists and 0 otherwise.
    """
    weight = _weight_of(idf)
    sum_a = math.fsum(weight(t) for t in sent_a)
    sum_b = math.fsum(weight(t) for t in sent_b)
    denom = max(sum_a, sum_b)
    if denom <= 0.0:
        return 1.0 if list(sent_a) == list(sent_b) else 0.0
    value = weighted_lcs(sent_a, sent_b, weight) / denom
    return min(1.0, max(0.0, value))


def edit_distance(a: str, b: str) -> int:
    """Character-level Levenshtein distance with unit costs."""
    if len(a) < len(b):
        a, b = b, a
    prev = list(range(len(b) + 1))
    for i, ca in enumerate(a, start=1):
        cur = [i]
        for j, cb in enumerate(b, start=1):
            cur.append(min(prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (ca != cb)))
        prev = cur
    return prev[-1]
