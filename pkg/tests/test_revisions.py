import io

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from revmine.align import Alignment, align_sentences
from revmine.errors import SampleTooLarge
from revmine.latex import Position, Section, Sentence
from revmine.lexical import tokenize
from revmine.revisions import (
    ChangedSpan,
    RevisionPair,
    RevisionType,
    classify_alignment,
    classify_pair,
    diff_spans,
    filter_labelable,
    read_pairs,
    revision_count,
    sample_pairs,
    write_pairs,
)

from oracles import levenshtein
from typo_cases import TYPO_CASES


@pytest.mark.parametrize("a, b, spans", [
    ("a b c", "a x c", [(("b",), ("x",))]),
    ("a b", "a b c", [((), ("c",))]),
    ("a b c d", "a x c y", [(("b",), ("x",)), (("d",), ("y",))]),
    ("a b", "a b", []),
    ("", "x y", [((), ("x", "y"))]),
])
def test_diff_spans(a, b, spans):
    assert diff_spans(a.split(), b.split()) == [ChangedSpan(x, y) for x, y in spans]


@pytest.mark.parametrize("v1, v2, spans, expected", TYPO_CASES)
def test_typo_table(v1, v2, spans, expected):
    t1, t2 = tokenize(v1), tokenize(v2)
    got = [(" ".join(s.v1_run), " ".join(s.v2_run)) for s in diff_spans(t1, t2)]
    assert got == [(x, y) for x, y, _ in spans]
    for x, y, d in spans:
        assert levenshtein(x, y) == d
    assert classify_pair(t1, t2).value == expected


def test_typo_threshold_is_configurable():
    t1, t2 = tokenize("the cat sat"), tokenize("the dog sat")
    assert classify_pair(t1, t2) is RevisionType.REWRITE
    assert classify_pair(t1, t2, typo_threshold=4) is RevisionType.TYPO


seqs = st.lists(st.sampled_from(["a", "b", "ab", "ba", "abc", "x"]), max_size=6)


@settings(max_examples=300)
@given(seqs, seqs)
def test_classification_symmetric_and_partitioned(a, b):
    r = classify_pair(a, b)
    assert r is classify_pair(b, a)
    assert (r is RevisionType.UNCHANGED) == (a == b)
    assert r is not RevisionType.DELETION


def _sents(*texts):
    return [Sentence(i, t) for i, t in enumerate(texts)]


def test_classify_alignment_mapping():
    s1 = _sents("Same sentence here.", "Gone now.")
    s2 = _sents("Same sentence here.")
    al = Alignment(((0, 0, 1.0),), (1,), (), 0.9, n_v1=2, n_v2=1)
    pairs = classify_alignment(al, s1, s2, "p1")
    assert [p.rtype for p in pairs] == [RevisionType.UNCHANGED, RevisionType.DELETION]
    assert revision_count(pairs) == 1
    assert pairs[1].v2_index is None and pairs[1].similarity is None


def test_classify_alignment_all_rewrites_and_context():
    s1 = _sents("We study the problem.", "Results are good.", "It is fast.")
    s2 = _sents("We solve the problem.", "Results are excellent.", "It is very fast.")
    sec = Section("Intro", "intro", Position.INTRODUCTION, tuple(s1))
    al = align_sentences(s1, s2, lambda t: 1.0)
    pairs = classify_alignment(al, s1, s2, "p1", [sec] * 3, v1_offset=10, v2_offset=20)
    assert [p.rtype for p in pairs] == [RevisionType.REWRITE] * 3
    assert [(p.v1_index, p.v2_index) for p in pairs] == [(10, 20), (11, 21), (12, 22)]
    assert all(p.position is Position.INTRODUCTION and p.section_title == "Intro" for p in pairs)


def _pair(rtype, sim, position=Position.INTRODUCTION):
    if rtype is RevisionType.DELETION:
        return RevisionPair("p", "t", position, rtype, 0, "x")
    return RevisionPair("p", "t", position, rtype, 0, "x", 0, "y", sim)


def test_filter_labelable():
    kept = _pair(RevisionType.REWRITE, 0.51)
    pairs = [
        kept,
        _pair(RevisionType.REWRITE, 0.50),
        _pair(RevisionType.DELETION, None),
        _pair(RevisionType.REWRITE, 0.9, Position.MIDDLE),
        _pair(RevisionType.UNCHANGED, 1.0),
    ]
    assert filter_labelable(pairs) == [kept]
    assert filter_labelable(pairs, positions={Position.MIDDLE}) == [pairs[3]]


def test_deletion_requires_missing_v2():
    with pytest.raises(ValueError):
        RevisionPair("p", "t", Position.MIDDLE, RevisionType.DELETION, 0, "x", 1, "y", 0.2)
    with pytest.raises(ValueError):
        RevisionPair("p", "t", Position.MIDDLE, RevisionType.TYPO, 0, "x")


def test_sample_pairs():
    pairs = [RevisionPair("p", "t", Position.MIDDLE, RevisionType.REWRITE, i, "x", i, "y", 0.7)
             for i in range(20)]
    assert set(sample_pairs(pairs, 20, 1)) == set(pairs)
    assert sample_pairs(pairs, 0, 1) == []
    assert sample_pairs(pairs, 5, 42) == sample_pairs(pairs, 5, 42)
    with pytest.raises(SampleTooLarge):
        sample_pairs(pairs, 21, 0)


def test_jsonl_format_and_roundtrip():
    pairs = [
        RevisionPair("p1", "Intro", Position.INTRODUCTION, RevisionType.REWRITE, 3, "A b .",
                     4, "A c .", 2 / 3),
        RevisionPair("p1", "Intro", Position.INTRODUCTION, RevisionType.DELETION, 5, "Gone ."),
    ]
    buf = io.StringIO()
    write_pairs(pairs, buf)
    lines = buf.getvalue().splitlines()
    assert lines[0].endswith('"similarity": 0.666667}')
    assert "v2_index" not in lines[1] and "similarity" not in lines[1]
    buf.seek(0)
    back = read_pairs(buf)
    assert back[1] == pairs[1]
    assert back[0].similarity == 0.666667
