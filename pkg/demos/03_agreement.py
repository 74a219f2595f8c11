#!/usr/bin/env python3
# Fleiss' kappa and the majority-label subset on simulated annotations.

import numpy as np

from revmine.agreement import (LABELS, LabelMatrix, agreement_report, fleiss_kappa,
                               format_percent, majority_filter, strength_change_rate)

rng = np.random.default_rng(0)
n_items, n_raters = 200, 9
truth = rng.integers(0, 4, n_items)
# each rater copies the hidden label 60% of the time, otherwise guesses
votes = np.where(rng.random((n_items, n_raters)) < 0.6, truth[:, None],
                 rng.integers(0, 4, (n_items, n_raters)))
counts = np.stack([np.bincount(v, minlength=4) for v in votes])
m = LabelMatrix(tuple(f"pair{k}" for k in range(n_items)), counts)

print("categories:", [lab.value for lab in LABELS])
print("kappa, all items:", round(fleiss_kappa(m), 4))

sub = majority_filter(m, 5)   # labels chosen by at least 5 of 9
print("majority items:", len(sub), "of", n_items)
print({lab.value: n for lab, n in sub.label_counts().items()})
print("strength change rate:", format_percent(strength_change_rate(sub)))

print(agreement_report(m).to_tsv())

# perfect agreement gives exactly 1
print(fleiss_kappa(np.array([[9, 0, 0, 0], [0, 0, 9, 0]])))
