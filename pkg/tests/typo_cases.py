"""Hand-traced typo-rule cases.

Each case lists the changed spans as joined strings with their Levenshtein
distance, then the expected class under the "< 3" rule.
"""

TYPO_CASES = [
    # (v1, v2, [(v1_span, v2_span, distance), ...], expected)
    ("teh cat sat", "the cat sat", [("teh", "the", 2)], "Typo"),
    ("is studied in", "is proposed in", [("studied", "proposed", 6)], "Rewrite"),
    ("the model works", "the modle works", [("model", "modle", 2)], "Typo"),
    ("the results hold", "the resluts hold", [("results", "resluts", 2)], "Typo"),
    ("we show that", "we prove that", [("show", "prove", 4)], "Rewrite"),
    ("the cat sat", "the dog sat", [("cat", "dog", 3)], "Rewrite"),
    ("the colour is red", "the color is red", [("colour", "color", 1)], "Typo"),
    ("the cat sat", "the cat sat .", [("", ".", 1)], "Typo"),
    ("see figure", "see a figure", [("", "a", 1)], "Typo"),
    ("the result", "the main result", [("", "main", 4)], "Rewrite"),
    ("the result", "the new result", [("", "new", 3)], "Rewrite"),
    ("the result", "the no result", [("", "no", 2)], "Typo"),
    ("this possibly holds", "this holds", [("possibly", "", 8)], "Rewrite"),
    ("teh cat sta", "the cat sat", [("teh", "the", 2), ("sta", "sat", 2)], "Typo"),
    ("teh cat sat", "the dog sat", [("teh cat", "the dog", 5)], "Rewrite"),
    ("a b c", "a bb c", [("b", "bb", 1)], "Typo"),
    ("data set is", "dataset is", [("data set", "dataset", 1)], "Typo"),
    ("The cat", "the cat", [], "Unchanged"),
    ("results , however", "results ; however", [(",", ";", 1)], "Typo"),
    ("this is better", "this is best", [("better", "best", 3)], "Rewrite"),
]
