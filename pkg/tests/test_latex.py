import json
from pathlib import Path

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from revmine.errors import MalformedMetadata, NoTextExtracted
from revmine.latex import (
    Position,
    classify_position,
    extract_text,
    load_metadata,
    load_paper,
    normalize_title,
    replace_math,
    segment_sentences,
    strip_comments,
)
from revmine.lexical import MATH

DATA = Path(__file__).parent / "data"


def test_single_section_with_inline_math():
    doc = extract_text("\\section{Intro}\nWe prove $x>0$ here.")
    assert len(doc.sections) == 1
    sec = doc.sections[0]
    assert sec.raw_title == "Intro"
    assert sec.position is Position.INTRODUCTION
    assert [s.spaced for s in sec.sentences] == ["We prove [MATH] here ."]
    assert sec.sentences[0].tokens == ("we", "prove", MATH, "here", ".")


def test_no_sections_gives_one_untitled_middle_section():
    doc = extract_text("Plain text only. Nothing else here.")
    assert len(doc.sections) == 1
    assert doc.sections[0].raw_title == ""
    assert doc.sections[0].position is Position.MIDDLE


def test_three_section_fixture():
    src = (DATA / "three_sections.tex").read_text()
    doc = extract_text(src)
    assert [s.raw_title for s in doc.sections] == ["Introduction", "Method", "Conclusion"]
    text = " ".join(s.text for s in doc.sentences())
    assert text.count(MATH) == 1
    assert "reviewers" not in text
    assert "frac" not in text and "cite" not in text and "foo" not in text
    # the sentence around the display equation stays in one piece
    assert doc.sections[1].sentences[0].text == (
        "The score is the weighted overlap [MATH] between two sentences.")
    assert [s.position for s in doc.sections] == [
        Position.INTRODUCTION, Position.MIDDLE, Position.CONCLUSION]


@pytest.mark.parametrize("src, n", [
    ("a $x$ b $$y$$ c", 2),
    (r"a \(x\) b \[y\] c", 2),
    (r"a \begin{align*} x \\ y \end{align*} b", 1),
    (r"\begin{eqnarray} x \end{eqnarray}\begin{gather}y\end{gather}", 2),
    (r"\begin{multline*} x \end{multline*}", 1),
    (r"a \$5 and \$6", 0),
])
def test_math_region_count(src, n):
    text, count = replace_math(src)
    assert count == n
    assert text.count(MATH) == n


def test_unbalanced_math_warns_and_drops_region():
    warnings = []
    text, count = replace_math("keep this $ lost text\n\nnext para", warnings)
    assert count == 0
    assert "lost" not in text and "next para" in text
    assert len(warnings) == 1 and "unbalanced" in warnings[0]


def test_abstract_environment_becomes_section():
    src = r"""\begin{document}\begin{abstract}We find things.\end{abstract}
\section{Introduction}Some intro text.\end{document}"""
    doc = extract_text(src)
    assert [s.position for s in doc.sections] == [Position.ABSTRACT, Position.INTRODUCTION]


def test_formatting_and_dropped_environments():
    src = r"""\section{Results}
We show {\em strong} and \textbf{bold} results\footnote{not this}.
\begin{figure}\includegraphics{x}\caption{Hidden caption.}\end{figure}
\subsection{Details}
See Fig.~\ref{f} and 50\% more."""
    doc = extract_text(src)
    texts = [s.text for s in doc.sentences()]
    assert texts == ["We show strong and bold results.", "See Fig. and 50% more."]


def test_no_text_extracted():
    with pytest.raises(NoTextExtracted):
        extract_text(r"\section{A} $x$ \begin{equation}y\end{equation}")
    with pytest.raises(NoTextExtracted):
        extract_text("% only a comment\n")


def test_strip_comments():
    assert strip_comments("a % c\n% whole\nb \\% kept") == "a \nb \\% kept"


@pytest.mark.parametrize("text, expected", [
    ("A b. C d.", ["A b.", "C d."]),
    ("See Fig. 2. It works.", ["See Fig. 2.", "It works."]),
    ("", []),
    ("Smith et al. Showed this. Done!", ["Smith et al. Showed this.", "Done!"]),
    ("Is it? Yes, e.g. Paris. Ok", ["Is it?", "Yes, e.g. Paris.", "Ok"]),
    ("lower. case continues", ["lower. case continues"]),
    ("First para\n\nSecond para.", ["First para", "Second para."]),
])
def test_segment_sentences(text, expected):
    sents = segment_sentences(text)
    assert [s.text for s in sents] == expected
    assert [s.index for s in sents] == list(range(len(expected)))


def test_segment_custom_abbreviations():
    assert len(segment_sentences("See Obs. Two holds.")) == 2
    assert len(segment_sentences("See Obs. Two holds.", abbreviations={"obs."})) == 1


@pytest.mark.parametrize("title, ordinal, total, expected", [
    ("introduction", 0, 8, Position.INTRODUCTION),
    ("intro", 1, 8, Position.INTRODUCTION),
    ("experiments", 4, 8, Position.MIDDLE),
    ("summary and outlook", 7, 8, Position.CONCLUSION),
    ("summary of notation", 1, 8, Position.MIDDLE),
    ("abstract", 0, 5, Position.ABSTRACT),
    ("concluding remarks", 4, 5, Position.CONCLUSION),
    ("", 0, 1, Position.MIDDLE),
])
def test_classify_position(title, ordinal, total, expected):
    assert classify_position(title, ordinal, total) is expected


def test_normalize_title():
    assert normalize_title("  Related   Work: An Overview! ") == "related work an overview"


prose = st.lists(
    st.sampled_from(["We", "prove", "the", "claim", "Results", "hold", "[MATH]", "here"]),
    min_size=1, max_size=12,
).map(lambda ws: " ".join(ws) + ".")


@settings(max_examples=100)
@given(st.lists(prose, min_size=1, max_size=5))
def test_extraction_idempotent(sentences):
    src = " ".join(sentences)
    once = extract_text(src)
    twice = extract_text(once.text())
    assert [s.tokens for s in once.sentences()] == [s.tokens for s in twice.sentences()]


@settings(max_examples=100)
@given(st.lists(st.sampled_from(["word", "$x$", r"\[y\]", "Text.", "more"]),
                min_size=1, max_size=15))
def test_placeholder_count_matches_regions(parts):
    src = " ".join(parts) + " end."
    n = sum(1 for p in parts if p in ("$x$", r"\[y\]"))
    doc = extract_text(src)
    assert sum(s.tokens.count(MATH) for s in doc.sentences()) == n


def test_load_metadata_valid():
    paper = load_metadata('{"paper_id":"p1","author_count":1,"categories":["math"],'
                          '"versions":["v1","v2"]}')
    assert paper.paper_id == "p1"
    assert paper.version_labels == ["v1", "v2"]
    assert paper.primary_category == "math"


@pytest.mark.parametrize("patch, path", [
    ({"author_count": 0}, "$.author_count"),
    ({"versions": None}, "$.versions"),
    ({"categories": "math"}, "$.categories"),
    ({"categories": ["math", 3]}, "$.categories[1]"),
])
def test_load_metadata_invalid(patch, path):
    base = {"paper_id": "p1", "author_count": 2, "categories": ["cs"], "versions": ["v1"]}
    base.update(patch)
    base = {k: v for k, v in base.items() if v is not None}
    with pytest.raises(MalformedMetadata) as info:
        load_metadata(base)
    assert info.value.path == path


def test_load_paper_inlines_inputs(tmp_path):
    pdir = tmp_path / "p9"
    (pdir / "v1").mkdir(parents=True)
    (pdir / "metadata.json").write_text(json.dumps(
        {"paper_id": "p9", "author_count": 2, "categories": ["cs"], "versions": ["v1"]}))
    (pdir / "v1" / "main.tex").write_text(
        "\\begin{document}\\input{body}\nClosing words here.\\end{document}")
    (pdir / "v1" / "body.tex").write_text("\\section{Intro}\nBody text here.\n")
    raw = load_paper(pdir)
    doc = extract_text(list(raw.versions[0][1]))
    assert [s.text for s in doc.sentences()] == ["Body text here.", "Closing words here."]


chunk = st.sampled_from(["Results hold.", "e.g. this", "Dr. Smith", "ok?", "Yes!", "[MATH]",
                         "end", "\n\n", "  ", "i.e.", "Fig. 2"])


@settings(max_examples=200)
@given(st.lists(chunk, min_size=1, max_size=20))
def test_segmentation_only_drops_whitespace(parts):
    text = " ".join(parts)
    joined = "".join(s.text for s in segment_sentences(text))
    assert "".join(joined.split()) == "".join(text.split())
