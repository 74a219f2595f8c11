#!/usr/bin/env python3
# The whole pipeline on a throwaway two-paper corpus.

import json
import tempfile
from pathlib import Path

from revmine.cli import PipelineConfig, cmd_pairs, cmd_stats

V1 = r"""\documentclass{article}
\begin{document}
\begin{abstract}
We present a new parser. It is fast.
\end{abstract}
\section{Introduction}
Parsing matters for many tools. % a comment that never reaches the output
Our method uses $O(n)$ memory. Old methods are slow.
\section{Conclusion}
We showed a fast parser.
\end{document}
"""
V2 = V1.replace("It is fast.", "It is very fast.") \
       .replace("Old methods are slow.", "") \
       .replace("many tools", "many tols")

# the idf table comes from the corpus itself, so the second paper must differ:
# a word present in every first version gets weight ln(3/3) = 0
OTHER = r"""\section{Introduction}
Graphs are everywhere. We count triangles quickly.
"""

root = Path(tempfile.mkdtemp())
for pid, versions in [("2101.00001", {"v1": V1, "v2": V2}), ("2101.00002", {"v1": OTHER})]:
    (root / "corpus" / pid).mkdir(parents=True)
    meta = {"paper_id": pid, "author_count": 2, "categories": ["cs.CL"],
            "versions": list(versions)}
    (root / "corpus" / pid / "metadata.json").write_text(json.dumps(meta))
    for label, text in versions.items():
        (root / "corpus" / pid / label).mkdir()
        (root / "corpus" / pid / label / "main.tex").write_text(text)

cfg = PipelineConfig(corpus_root=root / "corpus", out=root / "out")
summary = cmd_pairs(cfg)
print(summary)
for line in cfg.pairs_path.read_text().splitlines():
    row = json.loads(line)
    if row["rtype"] != "Unchanged":
        print(row["rtype"], "|", row["v1_text"], "|", row.get("v2_text"))

tables = cmd_stats(cfg)
print(tables["fig1a"])
print(tables["counts"])
