#!/usr/bin/env python3
# Tokens, idf weights and the weighted-LCS sentence similarity.

from revmine.latex import extract_text
from revmine.lexical import build_idf, similarity, tokenize, weighted_lcs

# three tiny "papers"; idf is counted once per document
docs = [
    extract_text(r"We prove the main theorem. The bound $O(n)$ is tight."),
    extract_text(r"We study the graph. The theorem is new."),
    extract_text(r"The experiments show a gain. We report the results."),
]
idf = build_idf(docs)
print("documents:", idf.doc_count)
for w in ["the", "we", "theorem", "bound", "never-seen", "[MATH]"]:
    print(f"  idf({w!r}) = {idf.idf(w):.3f}")   # common words sink, [MATH] is pinned to 0

a = tokenize("We prove the main theorem.")
b = tokenize("We prove a stronger theorem.")
print(a, b, sep="\n")
print("weighted LCS:", round(weighted_lcs(a, b, idf), 4))
print("similarity:  ", round(similarity(a, b, idf), 4))   # WLCS / max(idf mass of a, b)

# identical sentences score 1, disjoint ones 0
print(similarity(a, a, idf), similarity(a, tokenize("Nothing shared here"), idf))

# any mapping or callable works as the weight source
print(similarity(a, b, lambda tok: 1.0))   # plain LCS ratio
