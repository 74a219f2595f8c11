"""Per-paper composition: extract every version, align first vs last, classify."""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Optional

from .align import DEFAULT_MISMATCH_PENALTY, align_sections, align_sentences
from .latex import Document, RawPaper, extract_text, load_paper
from .lexical import IdfModel
from .revisions import DEFAULT_TYPO_THRESHOLD, RevisionPair, classify_alignment
from .stats import PaperSummary


@dataclass(frozen=True)
class ExtractedPaper:
    paper_id: str
    categories: tuple[str, ...]
    author_count: int
    documents: tuple[Document, ...]
    fingerprint: str = ""

    @property
    def first(self) -> Document:
        return self.documents[0]

    @property
    def last(self) -> Document:
        return self.documents[-1]

    def to_json(self) -> str:
        return json.dumps({
            "paper_id": self.paper_id,
            "categories": list(self.categories),
            "author_count": self.author_count,
            "fingerprint": self.fingerprint,
            "documents": [d.to_dict() for d in self.documents],
        }, sort_keys=True, ensure_ascii=False)

    @classmethod
    def from_json(cls, text: str) -> "ExtractedPaper":
        d = json.loads(text)
        return cls(d["paper_id"], tuple(d["categories"]), d["author_count"],
                   tuple(Document.from_dict(x) for x in d["documents"]), d["fingerprint"])


def fingerprint(raw: RawPaper) -> str:
    h = hashlib.sha256()
    h.update(json.dumps([raw.paper_id, list(raw.categories), raw.author_count],
                        ensure_ascii=False).encode())
    for label, sources in raw.versions:
        h.update(b"\0v" + label.encode())
        for blob in sources:
            h.update(b"\0f" + blob.encode())
    return h.hexdigest()


def extract_paper(raw: RawPaper) -> ExtractedPaper:
    """Extract every version; any failing version fails the whole paper."""
    docs = tuple(extract_text(list(sources), raw.paper_id, label)
                 for label, sources in raw.versions)
    return ExtractedPaper(raw.paper_id, raw.categories, raw.author_count, docs,
                          fingerprint(raw))


def extract_paper_dir(paper_dir: str | Path) -> ExtractedPaper:
    return extract_paper(load_paper(paper_dir))


@dataclass(frozen=True)
class PaperResult:
    summary: PaperSummary
    pairs: tuple[RevisionPair, ...]
    alignment_rows: tuple[dict, ...]


def _block_sentences(doc: Document, section_ids):
    sentences, origins = [], []
    for k in section_ids:
        sec = doc.sections[k]
        sentences.extend(sec.sentences)
        origins.extend([sec] * len(sec.sentences))
    return sentences, origins


def _offsets(doc: Document) -> list[int]:
    out, acc = [], 0
    for sec in doc.sections:
        out.append(acc)
        acc += len(sec.sentences)
    return out


def compare_versions(doc_v1: Document, doc_v2: Document, idf: IdfModel,
                     paper_id: str = "",
                     mismatch_penalty: float = DEFAULT_MISMATCH_PENALTY,
                     typo_threshold: int = DEFAULT_TYPO_THRESHOLD):
    """Macro-align sections, micro-align sentences per block, classify.

    Returns ``(pairs, alignment_rows)``; indices in both are document-wide
    sentence ordinals.  Each v1 sentence appears in exactly one pair.
    """
    pairing = align_sections(doc_v1, doc_v2)
    off1, off2 = _offsets(doc_v1), _offsets(doc_v2)
    pairs: list[RevisionPair] = []
    rows: list[dict] = []
    for block in pairing.blocks:
        s1, origins = _block_sentences(doc_v1, block.v1)
        s2, _ = _block_sentences(doc_v2, block.v2)
        # a block's sections are contiguous, so the first offset maps the block
        base1 = off1[block.v1[0]] if block.v1 else 0
        base2 = off2[block.v2[0]] if block.v2 else 0
        alignment = align_sentences(s1, s2, idf, mismatch_penalty)
        pairs.extend(classify_alignment(alignment, s1, s2, paper_id, origins,
                                        typo_threshold, base1, base2))
        for i, j, sim in alignment.links:
            rows.append({"paper_id": paper_id, "i": i + base1, "j": j + base2,
                         "sim": round(sim, 6)})
        for i in alignment.deleted_v1:
            rows.append({"paper_id": paper_id, "i": i + base1, "j": None, "sim": None})
        for j in alignment.added_v2:
            rows.append({"paper_id": paper_id, "i": None, "j": j + base2, "sim": None})
    # exported similarities carry 6 decimals; round here so that filters
    # applied in memory and to re-read files agree
    pairs = [p if p.similarity is None else replace(p, similarity=round(p.similarity, 6))
             for p in pairs]
    return pairs, rows


def process_paper(paper: ExtractedPaper, idf: Optional[IdfModel],
                  mismatch_penalty: float = DEFAULT_MISMATCH_PENALTY,
                  typo_threshold: int = DEFAULT_TYPO_THRESHOLD) -> PaperResult:
    first = paper.first
    summary = PaperSummary(
        paper_id=paper.paper_id,
        category=paper.categories[0] if paper.categories else "",
        author_count=paper.author_count,
        n_versions=len(paper.documents),
        v1_sentences=len(first.sentences()),
        changed=len(paper.documents) >= 2 and first.text() != paper.last.text(),
    )
    if len(paper.documents) < 2:
        return PaperResult(summary, (), ())
    pairs, rows = compare_versions(first, paper.last, idf, paper.paper_id,
                                   mismatch_penalty, typo_threshold)
    return PaperResult(summary, tuple(pairs), tuple(rows))
