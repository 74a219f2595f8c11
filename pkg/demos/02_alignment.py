#!/usr/bin/env python3
# Monotone sentence alignment between two versions of a section.

from revmine.align import align_sentences, similarity_matrix
from revmine.lexical import tokenize
from revmine.revisions import classify_pair

v1 = ["We propose a fast solver.",
      "It handles sparse inputs.",
      "Prior work is slow.",
      "We evaluate on three datasets."]
v2 = ["We propose a fast and exact solver.",
      "Prior work is slow.",
      "Code is available online.",
      "We evaluate on tree datasets."]
t1, t2 = [tokenize(s) for s in v1], [tokenize(s) for s in v2]

weight = lambda tok: 1.0   # uniform weights keep the numbers readable
for row in similarity_matrix(t1, t2, weight):
    print("  ".join(f"{x:.2f}" for x in row))

al = align_sentences(t1, t2, weight, mismatch_penalty=0.1)
print("dp score:", round(al.dp_score, 4))
for i, j, sim in al.links:
    print(f"v1[{i}] -> v2[{j}]  sim={sim:.2f}  {classify_pair(t1[i], t2[j]).value}")
print("deleted from v1:", al.deleted_v1)   # never paired, becomes a Deletion
print("added in v2:   ", al.added_v2)      # insertions are not revisions

# a larger penalty acts as a stricter link threshold
print(align_sentences(t1, t2, weight, mismatch_penalty=0.8).links)
