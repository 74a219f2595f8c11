"""Synthetic two-version corpora with planted, bookkept edits.

Every sentence is built from fresh random words, so unrelated sentences
share no weighted tokens and the planted edit is the only link between a
sentence and its revision.  The expected counts below come from the plan,
never from running the pipeline.
"""

from __future__ import annotations

import json
import random
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path

from oracles import levenshtein

SECTIONS = [
    # (title in v1, title in v2, position used for fig1a)
    ("Abstract", "Abstract", "Introduction"),
    ("Introduction", "Introduction", "Introduction"),
    ("Model", "Model", "Middle"),
    ("Experiments", "Evaluation", "Middle"),
    ("Conclusion", "Conclusion", "Conclusion"),
]
EDITS = ("keep", "delete", "typo", "rewrite")


@dataclass
class Plan:
    counts: Counter = field(default_factory=Counter)   # (fig1a position, rtype) -> n
    by_type: Counter = field(default_factory=Counter)
    labelable: int = 0
    v1_sentences: int = 0
    papers: list = field(default_factory=list)


def _word(rng, used):
    while True:
        w = "".join(rng.choice("bcdfghjklmnpqrstvwxz") + rng.choice("aeiou")
                    for _ in range(rng.randint(3, 4)))
        if w not in used:
            used.add(w)
            return w


def _sentence(words):
    return words[0].capitalize() + " " + " ".join(words[1:]) + "."


def _body(sentences, title, abstract=False):
    body = "\n".join(sentences)
    if abstract:
        return "\\begin{abstract}\n" + body + "\n\\end{abstract}\n"
    return f"\\section{{{title}}}\n% planted comment\n{body}\n"


def _tex(chunks):
    return ("\\documentclass{article}\n\\begin{document}\n"
            + "".join(chunks) + "\\end{document}\n")


def build_corpus(root: Path, n_papers: int = 10, seed: int = 2024) -> Plan:
    rng = random.Random(seed)
    used: set[str] = set()
    plan = Plan()
    categories = ["math.CO", "cs.CL", "stat.ML", "physics.optics"]
    for p in range(n_papers):
        pid = f"paper{p:02d}"
        chunks1, chunks2 = [], []
        for k, (t1, t2, fig_pos) in enumerate(SECTIONS):
            if p % 3 != 0:
                t2 = t1  # only every third paper renames a section
            sents1, sents2 = [], []
            for s in range(rng.randint(3, 6)):
                words = [_word(rng, used) for _ in range(8)]
                if s == 1:
                    # math and an inline citation never change between versions
                    words = words[:4] + ["$x_1$"] + words[4:]
                edit = rng.choice(EDITS) if s != 1 else "keep"
                plain = [w for w in words if not w.startswith("$")]
                sents1.append(_sentence(words))
                plan.v1_sentences += 1
                if edit == "keep":
                    sents2.append(_sentence(words))
                    continue
                if edit == "delete":
                    plan.counts[fig_pos, "Deletion"] += 1
                    plan.by_type["Deletion"] += 1
                    continue
                new = list(words)
                if edit == "typo":
                    pos = rng.randrange(1, len(plain))
                    w = words[pos]
                    cut = rng.randrange(1, len(w) - 1)
                    new[pos] = w[:cut] + w[cut + 1:]
                    assert levenshtein(w, new[pos]) == 1
                    rtype = "Typo"
                else:
                    pos = rng.randrange(1, len(plain) - 1)
                    repl = [_word(rng, used), _word(rng, used)]
                    assert levenshtein(" ".join(words[pos:pos + 2]), " ".join(repl)) >= 3
                    new[pos:pos + 2] = repl
                    rtype = "Rewrite"
                sents2.append(_sentence(new))
                plan.counts[fig_pos, rtype] += 1
                plan.by_type[rtype] += 1
                if k in (0, 1):
                    plan.labelable += 1
            if rng.random() < 0.5:
                # an inserted sentence is never emitted as a pair
                sents2.insert(rng.randint(0, len(sents2)),
                              _sentence([_word(rng, used) for _ in range(7)]))
            chunks1.append(_body(sents1, t1, abstract=k == 0))
            chunks2.append(_body(sents2, t2, abstract=k == 0))
        meta = {"paper_id": pid, "author_count": 1 + p % 6,
                "categories": [categories[p % len(categories)]], "versions": ["v1", "v2"]}
        write_paper(root, meta, {"v1": _tex(chunks1), "v2": _tex(chunks2)})
        plan.papers.append(meta)
    return plan


def write_paper(root: Path, meta: dict, sources: dict) -> None:
    pdir = root / meta["paper_id"]
    pdir.mkdir(parents=True, exist_ok=True)
    (pdir / "metadata.json").write_text(json.dumps(meta), encoding="utf-8")
    for label, text in sources.items():
        (pdir / label).mkdir(exist_ok=True)
        (pdir / label / "main.tex").write_text(text, encoding="utf-8")


def build_version_fixture(root: Path) -> None:
    """One changed paper, one byte-identical two-version paper, one single-version paper."""
    a = "\\section{Introduction}\nWe study revisions here. They matter a lot.\n"
    b = "\\section{Introduction}\nWe study revisions here. They matter greatly.\n"
    write_paper(root, {"paper_id": "changed", "author_count": 2, "categories": ["cs"],
                       "versions": ["v1", "v2"]}, {"v1": a, "v2": b})
    write_paper(root, {"paper_id": "same", "author_count": 1, "categories": ["cs"],
                       "versions": ["v1", "v2"]}, {"v1": a, "v2": a})
    write_paper(root, {"paper_id": "single", "author_count": 3, "categories": ["math"],
                       "versions": ["v1"]}, {"v1": a})
