"""Tolerant LaTeX-to-text extraction, sectioning and sentence segmentation.

This is a scanner, not a TeX engine: comments are stripped, math regions are
replaced by the ``[MATH]`` placeholder, non-prose environments are dropped,
and remaining commands are removed while the text of their brace arguments is
kept.  Malformed input degrades to warnings rather than exceptions wherever
possible.
"""

from __future__ import annotations

import enum
import json
import logging
import re
import string
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .errors import MalformedMetadata, NoTextExtracted
from .lexical import MATH, split_tokens, tokenize

log = logging.getLogger(__name__)

MATH_ENVS = frozenset(
    name + star
    for name in ("equation", "align", "eqnarray", "gather", "multline",
                 "displaymath", "math", "flalign", "alignat")
    for star in ("", "*")
)

# environments whose content is not running prose
DROP_ENVS = frozenset(
    name + star
    for name in ("figure", "table", "tabular", "tabularx", "thebibliography",
                 "comment", "tikzpicture", "picture", "verbatim", "lstlisting",
                 "algorithm", "algorithmic", "wrapfigure", "subfigure", "array",
                 "keywords", "acknowledgments", "acknowledgements")
    for star in ("", "*")
)

# commands whose brace arguments are dropped along with the command
DROP_ARG_COMMANDS = frozenset("""
    label ref eqref pageref autoref cref Cref cite citep citet citealt citeauthor
    citeyear nocite url href includegraphics bibliography bibliographystyle
    title author date thanks affiliation address email institute keywords pacs
    newcommand renewcommand providecommand newenvironment renewenvironment
    usepackage documentclass vspace hspace input include footnote footnotetext
    caption setlength addtolength setcounter newtheorem DeclareMathOperator
    maketitle tableofcontents bibitem markboth pagestyle thispagestyle hypersetup
    graphicspath def let newlength numberwithin texorpdfstring
""".split())

# headings below \section: their titles are not body text
SUBHEADINGS = frozenset(
    name + star
    for name in ("subsection", "subsubsection", "paragraph", "subparagraph")
    for star in ("", "*")
)

SECTION_RE = re.compile(r"\\(?:section|chapter)\*?\s*(?:\[[^\]]*\]\s*)?\{")

ESCAPES = {
    "%": "%", "&": "&", "#": "#", "_": "_", "$": "$", "{": "{", "}": "}",
    " ": " ", ",": " ", ";": " ", ":": " ", "!": "", "/": "", "\\": " ",
    "-": "",
}

DEFAULT_ABBREVIATIONS = frozenset({
    "et al.", "i.e.", "e.g.", "cf.", "vs.", "viz.", "resp.", "approx.",
    "fig.", "figs.", "eq.", "eqs.", "sec.", "secs.", "ref.", "refs.",
    "tab.", "thm.", "lem.", "prop.", "def.", "no.", "dr.", "prof.", "mr.",
    "ms.", "st.", "ch.", "vol.", "pp.",
})


class Position(enum.Enum):
    ABSTRACT = "Abstract"
    INTRODUCTION = "Introduction"
    MIDDLE = "Middle"
    CONCLUSION = "Conclusion"


@dataclass(frozen=True)
class Sentence:
    index: int
    text: str
    tokens: tuple[str, ...] = ()

    def __post_init__(self):
        if not self.text:
            raise ValueError("sentence text must be nonempty")
        if not self.tokens:
            object.__setattr__(self, "tokens", tuple(tokenize(self.text)))

    @property
    def spaced(self) -> str:
        """Case-preserving tokens joined by single spaces (export form)."""
        return " ".join(split_tokens(self.text))


@dataclass(frozen=True)
class Section:
    raw_title: str
    norm_title: str
    position: Position
    sentences: tuple[Sentence, ...] = ()


@dataclass(frozen=True)
class Document:
    paper_id: str
    version_label: str
    sections: tuple[Section, ...]
    warnings: tuple[str, ...] = ()

    def sentences(self) -> list[Sentence]:
        return [s for sec in self.sections for s in sec.sentences]

    def tokens(self) -> list[str]:
        return [t for s in self.sentences() for t in s.tokens]

    def text(self) -> str:
        """All sentence text, one sentence per line; titles excluded."""
        return "\n".join(s.text for s in self.sentences())

    def to_dict(self) -> dict:
        return {
            "paper_id": self.paper_id,
            "version_label": self.version_label,
            "warnings": list(self.warnings),
            "sections": [
                {
                    "raw_title": sec.raw_title,
                    "position": sec.position.value,
                    "sentences": [s.text for s in sec.sentences],
                }
                for sec in self.sections
            ],
        }

    @classmethod
    def from_dict(cls, d: Mapping) -> "Document":
        sections = []
        for sec in d["sections"]:
            sentences = tuple(Sentence(i, t) for i, t in enumerate(sec["sentences"]))
            sections.append(Section(sec["raw_title"], normalize_title(sec["raw_title"]),
                                    Position(sec["position"]), sentences))
        return cls(d["paper_id"], d["version_label"], tuple(sections),
                   tuple(d.get("warnings", ())))


@dataclass(frozen=True)
class RawPaper:
    paper_id: str
    versions: tuple[tuple[str, tuple[str, ...]], ...]
    categories: tuple[str, ...] = ()
    author_count: int = 1

    @property
    def version_labels(self) -> list[str]:
        return [label for label, _ in self.versions]

    @property
    def primary_category(self) -> str:
        return self.categories[0] if self.categories else ""


# ---------------------------------------------------------------------------
# scanning helpers


def strip_comments(text: str) -> str:
    """Drop unescaped ``%`` comments; whole-line comments vanish entirely."""
    out = []
    for line in text.splitlines():
        m = re.search(r"(?<!\\)(?:\\\\)*%", line)
        if m is None:
            out.append(line)
            continue
        kept = line[: m.end() - 1]
        if kept.strip() or not line.lstrip().startswith("%"):
            out.append(kept)
    return "\n".join(out)


def _match_brace(text: str, start: int) -> int:
    """Index just past the ``}`` closing the ``{`` at ``start``, or -1."""
    depth = 0
    i = start
    while i < len(text):
        ch = text[i]
        if ch == "\\":
            i += 2
            continue
        if ch == "{":
            depth += 1
        elif ch == "}":
            depth -= 1
            if depth == 0:
                return i + 1
        i += 1
    return -1


def _skip_ws(text: str, i: int) -> int:
    while i < len(text) and text[i] in " \t\n":
        i += 1
    return i


def _skip_optional(text: str, i: int) -> int:
    j = _skip_ws(text, i)
    if j < len(text) and text[j] == "[" and not text.startswith(MATH, j):
        depth = 0
        k = j
        while k < len(text):
            if text[k] == "[":
                depth += 1
            elif text[k] == "]":
                depth -= 1
                if depth == 0:
                    return k + 1
            k += 1
    return i


def _find_env_end(text: str, name: str, start: int) -> tuple[int, int]:
    """(start of ``\\end{name}``, index past it), honouring nesting; (-1, -1) if absent."""
    pat = re.compile(r"\\(begin|end)\s*\{" + re.escape(name) + r"\}")
    depth = 1
    for m in pat.finditer(text, start):
        depth += 1 if m.group(1) == "begin" else -1
        if depth == 0:
            return m.start(), m.end()
    return -1, -1


def _paragraph_end(text: str, start: int) -> int:
    m = re.compile(r"\n[ \t]*\n").search(text, start)
    return m.start() if m else len(text)


def replace_math(text: str, warnings: list[str] | None = None) -> tuple[str, int]:
    """Replace every math region with `` [MATH] ``.

    Returns the new text and the number of regions replaced.  An opener with
    no closer is reported in ``warnings`` and the rest of its paragraph is
    dropped without a placeholder.
    """
    if warnings is None:
        warnings = []
    out: list[str] = []
    count = 0
    i = 0
    n = len(text)
    env_open = re.compile(r"\\begin\s*\{([A-Za-z]+\*?)\}")
    while i < n:
        ch = text[i]
        if ch == "\\" and i + 1 < n:
            nxt = text[i + 1]
            if nxt in "([":
                close = "\\)" if nxt == "(" else "\\]"
                end = text.find(close, i + 2)
                if end < 0:
                    warnings.append(f"unbalanced math \\{nxt} at offset {i}")
                    i = _paragraph_end(text, i)
                    continue
                out.append(f" {MATH} ")
                count += 1
                i = end + 2
                continue
            m = env_open.match(text, i)
            if m and m.group(1) in MATH_ENVS:
                _, after = _find_env_end(text, m.group(1), m.end())
                if after < 0:
                    warnings.append(f"unbalanced math environment {m.group(1)} at offset {i}")
                    i = _paragraph_end(text, i)
                    continue
                out.append(f" {MATH} ")
                count += 1
                i = after
                continue
            out.append(text[i:i + 2])
            i += 2
            continue
        if ch == "$":
            delim = "$$" if text.startswith("$$", i) else "$"
            j = i + len(delim)
            end = -1
            while j < n:
                if text[j] == "\\":
                    j += 2
                    continue
                if text.startswith(delim, j):
                    end = j
                    break
                if delim == "$" and text.startswith("\n\n", j):
                    break
                j += 1
            if end < 0:
                warnings.append(f"unbalanced math {delim} at offset {i}")
                i = _paragraph_end(text, i)
                continue
            out.append(f" {MATH} ")
            count += 1
            i = end + len(delim)
            continue
        out.append(ch)
        i += 1
    return "".join(out), count


def _drop_environments(text: str, warnings: list[str]) -> str:
    out = []
    i = 0
    pat = re.compile(r"\\(begin|end)\s*\{([A-Za-z]+\*?)\}")
    while True:
        m = pat.search(text, i)
        if m is None:
            out.append(text[i:])
            break
        out.append(text[i:m.start()])
        name = m.group(2)
        if name in MATH_ENVS:
            out.append(m.group(0))
            i = m.end()
            continue
        if m.group(1) == "begin" and name in DROP_ENVS:
            _, after = _find_env_end(text, name, m.end())
            if after < 0:
                warnings.append(f"unterminated environment {name}")
                after = _paragraph_end(text, m.end())
            i = after
            out.append("\n\n")
            continue
        # other environment markers are structural; the body stays
        i = _skip_optional(text, m.end())
        if name in ("itemize", "enumerate", "description"):
            out.append("\n\n")
        else:
            out.append(" ")
    return "".join(out)


def _strip_commands(text: str) -> str:
    out: list[str] = []
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch == "\\":
            if i + 1 < n and not text[i + 1].isalpha():
                sym = text[i + 1]
                if sym == "\\":
                    out.append(" ")
                    i = _skip_optional(text, i + 2)
                else:
                    out.append(ESCAPES.get(sym, ""))
                    i += 2
                continue
            m = re.compile(r"[A-Za-z]+\*?").match(text, i + 1)
            if m is None:
                i += 1
                continue
            name = m.group(0)
            j = _skip_optional(text, m.end())
            if name in DROP_ARG_COMMANDS or name in SUBHEADINGS:
                while True:
                    k = _skip_ws(text, j)
                    if k < n and text[k] == "{":
                        end = _match_brace(text, k)
                        if end < 0:
                            break
                        j = _skip_optional(text, end)
                    else:
                        break
                if name in SUBHEADINGS:
                    out.append("\n\n")
                else:
                    out.append(" ")
                i = j
                continue
            if name == "item":
                out.append("\n\n")
            elif name in ("par", "newline", "linebreak", "newpage", "clearpage"):
                out.append("\n\n")
            else:
                # formatting command: keep a word boundary, the args survive
                out.append("" if j < n and text[j] == "{" else " ")
            i = j
            continue
        if ch in "{}":
            i += 1
            continue
        if ch == "~":
            out.append(" ")
            i += 1
            continue
        out.append(ch)
        i += 1
    text = "".join(out)
    text = text.replace("``", '"').replace("''", '"')
    return re.sub(r"[ \t]+([.,;:!?])", r"\1", text)


def clean_body(text: str, warnings: list[str] | None = None) -> tuple[str, int]:
    """Comment-free LaTeX body -> plain text with ``[MATH]`` placeholders."""
    if warnings is None:
        warnings = []
    text = _drop_environments(text, warnings)
    text, count = replace_math(text, warnings)
    return _strip_commands(text), count


def normalize_title(raw: str) -> str:
    cleaned = "".join(" " if ch in string.punctuation else ch for ch in raw.lower())
    return " ".join(cleaned.split())


def classify_position(norm_title: str, ordinal: int, total: int) -> Position:
    """Map a normalized section title and its ordinal to a coarse position.

    A conclusion keyword only counts when the section sits in the last third
    of the document.
    """
    if "abstract" in norm_title:
        return Position.ABSTRACT
    if "introduction" in norm_title or norm_title == "intro":
        return Position.INTRODUCTION
    if any(k in norm_title for k in ("conclusion", "concluding", "summary")):
        if total > 0 and 3 * (ordinal + 1) > 2 * total:
            return Position.CONCLUSION
    return Position.MIDDLE


# ---------------------------------------------------------------------------
# sentences

_BOUNDARY = re.compile(r"[.!?]+[\"')\]]*(?=\s+[\"'(\[]?[A-Z]|\s*$)")


def _ends_with_abbreviation(chunk: str, abbreviations: frozenset[str]) -> bool:
    low = chunk.lower()
    for abbr in abbreviations:
        if low.endswith(abbr):
            before = len(low) - len(abbr)
            if before == 0 or not low[before - 1].isalnum():
                return True
    return False


def segment_sentences(section_text: str,
                      abbreviations: Iterable[str] = DEFAULT_ABBREVIATIONS) -> list[Sentence]:
    """Split body text into sentences.

    A split happens after ``.``/``!``/``?`` when followed by whitespace and a
    capital letter, or by the end of the text, unless the text so far ends in
    one of ``abbreviations``.  Blank lines always end a sentence.
    """
    abbreviations = frozenset(a.lower() for a in abbreviations)
    pieces: list[str] = []
    for para in re.split(r"\n[ \t]*\n", section_text):
        para = " ".join(para.split())
        if not para:
            continue
        start = 0
        for m in _BOUNDARY.finditer(para):
            chunk = para[start:m.end()]
            if _ends_with_abbreviation(chunk, abbreviations):
                continue
            pieces.append(chunk)
            start = m.end()
        pieces.append(para[start:])
    texts = [p.strip() for p in pieces]
    return [Sentence(i, t) for i, t in enumerate(t for t in texts if t)]


# ---------------------------------------------------------------------------
# documents


def _document_body(text: str) -> str:
    m = re.search(r"\\begin\s*\{document\}", text)
    if m:
        text = text[m.end():]
    m = re.search(r"\\end\s*\{document\}", text)
    if m:
        text = text[:m.start()]
    return text


def _split_sections(text: str) -> list[tuple[str, str]]:
    """[(raw_title, body)] in source order; text before the first heading gets title ''."""
    heads = []
    pos = 0
    while True:
        m = SECTION_RE.search(text, pos)
        if m is None:
            break
        brace = m.end() - 1
        end = _match_brace(text, brace)
        if end < 0:
            line_end = text.find("\n", m.end())
            end = len(text) if line_end < 0 else line_end
            title = text[m.end():end]
        else:
            title = text[brace + 1:end - 1]
        heads.append((m.start(), end, title))
        pos = end
    parts = []
    first = heads[0][0] if heads else len(text)
    parts.append(("", text[:first]))
    for k, (_, end, title) in enumerate(heads):
        stop = heads[k + 1][0] if k + 1 < len(heads) else len(text)
        parts.append((title, text[end:stop]))
    return parts


def _title_text(raw: str) -> str:
    text, _ = replace_math(raw)
    return " ".join(_strip_commands(text).split())


def extract_text(source_files: str | Sequence[str], paper_id: str = "",
                 version_label: str = "",
                 abbreviations: Iterable[str] = DEFAULT_ABBREVIATIONS) -> Document:
    """Parse LaTeX sources into a sectioned, sentence-segmented document.

    Multiple blobs are concatenated in order.  An ``abstract`` environment
    becomes a section titled "Abstract".  Text before the first ``\\section``
    becomes an untitled section when it has any sentences.
    """
    if isinstance(source_files, str):
        source_files = [source_files]
    raw = strip_comments("\n".join(source_files))
    warnings: list[str] = []

    chunks: list[tuple[str, str]] = []
    m = re.search(r"\\begin\s*\{abstract\}", raw)
    if m:
        end_start, end_after = _find_env_end(raw, "abstract", m.end())
        if end_start < 0:
            warnings.append("unterminated abstract environment")
        else:
            chunks.append(("Abstract", raw[m.end():end_start]))
            raw = raw[:m.start()] + "\n\n" + raw[end_after:]
    chunks.extend(_split_sections(_document_body(raw)))

    sections: list[tuple[str, list[Sentence]]] = []
    for k, (title, body) in enumerate(chunks):
        try:
            text, _ = clean_body(body, warnings)
            sentences = segment_sentences(text, abbreviations)
            title_text = _title_text(title)
        except Exception as exc:  # one bad section must not sink the paper
            warnings.append(f"section {k} ({title!r}) skipped: {exc}")
            continue
        if not title_text and not sentences:
            continue
        sections.append((title_text, sentences))

    if not any(s.tokens and any(t != MATH for t in s.tokens)
               for _, sents in sections for s in sents):
        raise NoTextExtracted(f"no body text in {paper_id or 'source'} {version_label}".strip())

    total = len(sections)
    built = []
    for ordinal, (title, sentences) in enumerate(sections):
        norm = normalize_title(title)
        built.append(Section(title, norm, classify_position(norm, ordinal, total),
                             tuple(sentences)))
    for w in warnings:
        log.warning("%s %s: %s", paper_id, version_label, w)
    return Document(paper_id, version_label, tuple(built), tuple(warnings))


# ---------------------------------------------------------------------------
# corpus tree


def load_metadata(metadata_blob: str | bytes | Mapping) -> RawPaper:
    """Validate a metadata record; the returned paper has no source text yet."""
    if isinstance(metadata_blob, (str, bytes)):
        try:
            data = json.loads(metadata_blob)
        except json.JSONDecodeError as exc:
            raise MalformedMetadata("$", f"invalid JSON: {exc}") from None
    else:
        data = metadata_blob
    if not isinstance(data, Mapping):
        raise MalformedMetadata("$", "expected an object")
    for key in ("paper_id", "author_count", "categories", "versions"):
        if key not in data:
            raise MalformedMetadata(f"$.{key}", "required field missing")
    pid = data["paper_id"]
    if not isinstance(pid, str) or not pid:
        raise MalformedMetadata("$.paper_id", "expected a nonempty string")
    ac = data["author_count"]
    if isinstance(ac, bool) or not isinstance(ac, int) or ac < 1:
        raise MalformedMetadata("$.author_count", f"expected an integer >= 1, got {ac!r}")
    cats = data["categories"]
    if not isinstance(cats, list):
        raise MalformedMetadata("$.categories", "expected a list of strings")
    for k, c in enumerate(cats):
        if not isinstance(c, str):
            raise MalformedMetadata(f"$.categories[{k}]", "expected a string")
    versions = data["versions"]
    if not isinstance(versions, list) or not versions:
        raise MalformedMetadata("$.versions", "expected a nonempty list")
    for k, v in enumerate(versions):
        if not isinstance(v, str) or not v:
            raise MalformedMetadata(f"$.versions[{k}]", "expected a nonempty string")
    if len(set(versions)) != len(versions):
        raise MalformedMetadata("$.versions", "duplicate version label")
    return RawPaper(pid, tuple((v, ()) for v in versions), tuple(cats), ac)


_INPUT_RE = re.compile(r"\\(?:input|include)\s*\{([^}]*)\}")


def _assemble_sources(files: Mapping[str, str]) -> tuple[str, ...]:
    """Inline ``\\input`` targets into the main file when one exists."""
    mains = [name for name in sorted(files) if re.search(r"\\begin\s*\{document\}", files[name])]
    if not mains:
        return tuple(files[name] for name in sorted(files))
    by_stem = {}
    for name in files:
        by_stem[name] = name
        by_stem[name[:-4] if name.endswith(".tex") else name] = name

    def expand(name, seen):
        def repl(m):
            target = by_stem.get(Path(m.group(1).strip()).as_posix())
            if target is None or target in seen:
                return " "
            return expand(target, seen | {target})
        return _INPUT_RE.sub(repl, files[name])

    return (expand(mains[0], {mains[0]}),)


def load_paper(paper_dir: str | Path) -> RawPaper:
    paper_dir = Path(paper_dir)
    meta_path = paper_dir / "metadata.json"
    try:
        blob = meta_path.read_text(encoding="utf-8")
    except FileNotFoundError:
        raise MalformedMetadata(str(meta_path), "file missing") from None
    header = load_metadata(blob)
    versions = []
    for label in header.version_labels:
        vdir = paper_dir / label
        files = {p.name: p.read_text(encoding="utf-8") for p in sorted(vdir.glob("*.tex"))}
        versions.append((label, _assemble_sources(files) if files else ()))
    return RawPaper(header.paper_id, tuple(versions), header.categories, header.author_count)


def list_papers(corpus_root: str | Path) -> list[Path]:
    root = Path(corpus_root)
    if not root.is_dir():
        return []
    return sorted(p for p in root.iterdir() if (p / "metadata.json").is_file())
