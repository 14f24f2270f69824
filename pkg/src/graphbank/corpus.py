"""Line-oriented corpus text format with embedded tagsets.

One file holds everything an annotation session needs: the three tag
inventories (with versions), free-form metadata, and the sentences.  The
format is tab-separated UTF-8 with LF line endings and is bit-exact:
serializing equal corpora yields identical bytes, and ``parse`` is the
exact inverse of ``serialize`` on its output.  That makes golden-file
tests and reviewable diffs possible, which is the whole point of using
text instead of a database.

Layout::

    %% free comment lines (ignored)
    #FORMAT 1
    #CORPUS <name>
    #META <key>\\t<value>          (zero or more)
    #TAGSET pos <version>
    <label>\\t<description>
    ...
    #END
    #TAGSET node <version>        (same shape; then edge)
    ...
    #BOS <sentence-id> <status>
    %% sentence comment           (zero or more)
    <form>\\t<pos>\\t<function>\\t<parent>[\\t<fn>:<target>]*
    #<id>\\t<category>\\t<function>\\t<parent>[\\t<fn>:<target>]*
    #EOS <sentence-id>

Token ids are implicit surface positions 1..n; phrase-node lines follow in
ascending id order starting at 500.  Parent 0 means parentless.  The
``<fn>:<target>`` columns are the secondary links whose source is that
row's item; an unlabeled link writes ``--`` as its function.

Because ``#`` and ``%%`` open directive lines, token forms may not begin
with either; ``serialize`` rejects such corpora rather than escaping.
"""

from __future__ import annotations

import os
import re
import time
from dataclasses import dataclass, field

from . import errors
from .graph import (
    PHRASE_ID_BASE,
    AnnotationGraph,
    PhraseNode,
    PrimaryEdge,
    SecondaryLink,
    Status,
    Token,
    validate,
)
from .tagsets import KINDS, UNLABELED, Tagset, TagsetRegistry, check_label

FORMAT_VERSION = 1
BANNER = "%% graphbank corpus"

_NODE_LINE = re.compile(r"^#(\d+)\t")


@dataclass
class Corpus:
    """Named, ordered collection of sentences plus their tag inventories."""

    name: str
    tagsets: TagsetRegistry
    sentences: list[AnnotationGraph] = field(default_factory=list)
    metadata: list[tuple[str, str]] = field(default_factory=list)

    def sentence(self, sentence_id: str) -> AnnotationGraph:
        for s in self.sentences:
            if s.sentence_id == sentence_id:
                return s
        raise errors.UnknownSentence(f"no sentence {sentence_id!r}")

    def ids(self) -> list[str]:
        return [s.sentence_id for s in self.sentences]


# --- serialization -------------------------------------------------------

def serialize(corpus: Corpus) -> str:
    """Render the corpus as canonical text.

    Raises :class:`~graphbank.errors.CorpusError` when the corpus cannot
    be represented faithfully (duplicate sentence ids, labels missing from
    the embedded tagsets, reserved token forms); never writes a file that
    would not parse back to the same corpus.
    """
    _check_serializable(corpus)
    lines = [BANNER, f"#FORMAT {FORMAT_VERSION}", f"#CORPUS {corpus.name}"]
    for key, value in corpus.metadata:
        lines.append(f"#META {key}\t{value}")
    for kind in KINDS:
        tagset = corpus.tagsets.get(kind)
        lines.append(f"#TAGSET {kind} {tagset.version}")
        for label, description in tagset.entries:
            lines.append(f"{label}\t{description}")
        lines.append("#END")
    for sentence in corpus.sentences:
        lines.extend(_sentence_lines(sentence))
    return "\n".join(lines) + "\n"


def _check_serializable(corpus: Corpus) -> None:
    if not corpus.name or any(c.isspace() for c in corpus.name):
        raise errors.CorpusError(f"bad corpus name {corpus.name!r}")
    for key, value in corpus.metadata:
        if not key or "\t" in key or "\n" in key or "\n" in value:
            raise errors.CorpusError(f"bad metadata pair {key!r}: {value!r}")
    seen: set[str] = set()
    for sentence in corpus.sentences:
        if sentence.sentence_id in seen:
            raise errors.CorpusError(f"duplicate sentence id {sentence.sentence_id!r}")
        seen.add(sentence.sentence_id)
        for tok in sentence.tokens:
            if tok.form.startswith("#") or tok.form.startswith("%%"):
                raise errors.CorpusError(
                    f"token form {tok.form!r} collides with a directive prefix"
                )
        hard = [
            v for v in validate(sentence, corpus.tagsets) if v.severity == "error"
        ]
        if hard:
            raise errors.CorpusError(
                f"sentence {sentence.sentence_id!r} is invalid: {hard[0].message}"
            )


def _sentence_lines(sentence: AnnotationGraph) -> list[str]:
    lines = [f"#BOS {sentence.sentence_id} {sentence.status.value}"]
    for comment in sentence.comments:
        lines.append(f"%% {comment}")
    links_by_source: dict[int, list[SecondaryLink]] = {}
    for link in sentence.secondary_links:
        links_by_source.setdefault(link.source, []).append(link)

    def columns(ref: int, first: str, second: str) -> str:
        edge = sentence.incoming.get(ref)
        function = edge.function if edge else UNLABELED
        parent = edge.parent if edge else 0
        cols = [first, second, function, str(parent)]
        for link in sorted(
            links_by_source.get(ref, ()), key=lambda l: (l.target, l.function or "")
        ):
            cols.append(f"{link.function or UNLABELED}:{link.target}")
        return "\t".join(cols)

    for tok in sentence.tokens:
        lines.append(columns(tok.position, tok.form, tok.pos_tag))
    for node_id in sorted(sentence.phrase_nodes):
        node = sentence.phrase_nodes[node_id]
        lines.append(columns(node_id, f"#{node_id}", node.category))
    lines.append(f"#EOS {sentence.sentence_id}")
    return lines


# --- parsing -------------------------------------------------------------

class _Reader:
    """Line cursor that remembers 1-based positions for error reporting."""

    def __init__(self, text: str):
        self.lines = text.split("\n")
        if self.lines and self.lines[-1] == "":
            self.lines.pop()  # trailing newline
        self.pos = 0

    def peek(self) -> str | None:
        return self.lines[self.pos] if self.pos < len(self.lines) else None

    def take(self) -> str:
        line = self.lines[self.pos]
        self.pos += 1
        return line

    @property
    def line_no(self) -> int:
        return self.pos  # after take(), pos is the 1-based number of that line

    def fail(self, message: str, line: int | None = None) -> "errors.ParseError":
        return errors.ParseError(message, line if line is not None else self.line_no)


def parse(text: str) -> Corpus:
    """Read a corpus back from text; exact inverse of :func:`serialize`.

    All structural invariants are re-checked: labels against the embedded
    tagsets, parent references, acyclicity, completeness of sentences
    marked complete.  Every failure carries the 1-based line number."""
    r = _Reader(text)
    while r.peek() is not None and (r.peek().startswith("%%") or r.peek() == ""):
        r.take()
    _expect_directive(r, "#FORMAT", n_fields=2)
    line = r.take()
    version = line.split(" ")[1]
    if version != str(FORMAT_VERSION):
        raise r.fail(f"unsupported format version {version!r}")
    _expect_directive(r, "#CORPUS", n_fields=2)
    name = r.take().split(" ", 1)[1]

    metadata: list[tuple[str, str]] = []
    while r.peek() is not None and r.peek().startswith("#META "):
        body = r.take()[len("#META "):]
        key, sep, value = body.partition("\t")
        if not sep or not key:
            raise r.fail("malformed #META line")
        metadata.append((key, value))

    tagsets = _parse_tagsets(r)
    corpus = Corpus(name=name, tagsets=tagsets, metadata=metadata)
    seen_bos: dict[str, int] = {}
    while r.peek() is not None:
        if r.peek() == "":
            r.take()
            continue
        if not r.peek().startswith("#BOS "):
            r.take()
            raise r.fail(f"expected #BOS, got {r.lines[r.pos - 1]!r}")
        sentence = _parse_sentence(r, tagsets, seen_bos)
        corpus.sentences.append(sentence)
    return corpus


def _expect_directive(r: _Reader, keyword: str, n_fields: int) -> None:
    line = r.peek()
    if line is None:
        raise errors.ParseError(f"unexpected end of file, expected {keyword}", len(r.lines))
    fields = line.split(" ")
    if fields[0] != keyword or len(fields) < n_fields:
        raise errors.ParseError(f"expected {keyword}, got {line!r}", r.pos + 1)


def _parse_tagsets(r: _Reader) -> TagsetRegistry:
    parsed: dict[str, Tagset] = {}
    for kind in KINDS:
        _expect_directive(r, "#TAGSET", n_fields=3)
        header = r.take().split(" ")
        header_line = r.line_no
        if header[1] != kind:
            raise r.fail(f"expected #TAGSET {kind}, got {header[1]!r}")
        try:
            version = int(header[2])
        except ValueError:
            raise r.fail(f"bad tagset version {header[2]!r}") from None
        entries: list[tuple[str, str]] = []
        while True:
            line = r.peek()
            if line is None:
                raise errors.ParseError("unterminated #TAGSET section", len(r.lines))
            r.take()
            if line == "#END":
                break
            label, sep, description = line.partition("\t")
            if not sep:
                raise r.fail(f"malformed tagset entry {line!r}")
            entries.append((label, description))
        try:
            parsed[kind] = Tagset(kind=kind, entries=tuple(entries), version=version)
        except (ValueError, errors.AnnotationError) as exc:
            raise errors.ParseError(str(exc), header_line) from exc
    return TagsetRegistry(pos=parsed["pos"], node=parsed["node"], edge=parsed["edge"])


@dataclass
class _Row:
    line_no: int
    ref: int
    function: str
    parent: int
    links: list[tuple[str | None, int]]


def _parse_sentence(
    r: _Reader, tagsets: TagsetRegistry, seen_bos: dict[str, int]
) -> AnnotationGraph:
    header = r.take().split(" ")
    bos_line = r.line_no
    if len(header) != 3:
        raise r.fail("malformed #BOS line")
    _, sentence_id, status_text = header
    if sentence_id in seen_bos:
        raise errors.DuplicateSentence(
            f"sentence {sentence_id!r} already began at line {seen_bos[sentence_id]}",
            bos_line,
        )
    seen_bos[sentence_id] = bos_line
    try:
        status = Status(status_text)
    except ValueError:
        raise r.fail(f"unknown status {status_text!r}") from None

    comments: list[str] = []
    while r.peek() is not None and r.peek().startswith("%%"):
        line = r.take()
        comments.append(line[3:] if line.startswith("%% ") else line[2:])

    tokens: list[Token] = []
    nodes: dict[int, PhraseNode] = {}
    rows: list[_Row] = []
    while True:
        line = r.peek()
        if line is None:
            raise errors.ParseError(
                f"sentence {sentence_id!r} not closed by #EOS", len(r.lines)
            )
        r.take()
        if line.startswith("#EOS"):
            if line != f"#EOS {sentence_id}":
                raise r.fail(f"mismatched #EOS line {line!r}")
            break
        match = _NODE_LINE.match(line)
        if match and int(match.group(1)) >= PHRASE_ID_BASE:
            rows.append(_node_row(r, line, nodes, tagsets))
        else:
            if nodes:
                raise r.fail("token line after phrase-node lines")
            rows.append(_token_row(r, line, tokens, tagsets))

    graph = AnnotationGraph(
        sentence_id=sentence_id,
        tokens=tokens,
        phrase_nodes=nodes,
        comments=comments,
        status=status,
    )
    if not tokens:
        raise errors.ParseError(f"sentence {sentence_id!r} has no tokens", bos_line)
    _wire_rows(graph, rows, tagsets)
    hard = [v for v in validate(graph, tagsets) if v.severity == "error"]
    if hard:
        raise errors.ParseError(
            f"sentence {sentence_id!r}: {hard[0].message}", r.line_no
        )
    return graph


def _split_structural(
    r: _Reader, line: str
) -> tuple[str, str, str, int, list[tuple[str | None, int]]]:
    cols = line.split("\t")
    if len(cols) < 4:
        raise r.fail(f"malformed line {line!r} (need 4 tab-separated columns)")
    first, second, function, parent_text = cols[:4]
    try:
        parent = int(parent_text)
    except ValueError:
        raise r.fail(f"bad parent id {parent_text!r}") from None
    links: list[tuple[str | None, int]] = []
    for col in cols[4:]:
        fn, sep, target_text = col.partition(":")
        if not sep:
            raise r.fail(f"malformed secondary column {col!r}")
        try:
            target = int(target_text)
        except ValueError:
            raise r.fail(f"bad secondary target {target_text!r}") from None
        links.append((None if fn == UNLABELED else fn, target))
    return first, second, function, parent, links


def _token_row(
    r: _Reader, line: str, tokens: list[Token], tagsets: TagsetRegistry
) -> _Row:
    form, pos_tag, function, parent, links = _split_structural(r, line)
    if not check_label(tagsets.pos, pos_tag).ok:
        raise r.fail(f"unknown pos tag {pos_tag!r}")
    _check_row_labels(r, function, links, tagsets)
    position = len(tokens) + 1
    if position >= PHRASE_ID_BASE:
        raise r.fail("too many tokens in sentence")
    tokens.append(Token(position, form, pos_tag))
    return _Row(r.line_no, position, function, parent, links)


def _node_row(
    r: _Reader, line: str, nodes: dict[int, PhraseNode], tagsets: TagsetRegistry
) -> _Row:
    id_text, category, function, parent, links = _split_structural(r, line)
    node_id = int(id_text[1:])
    if node_id in nodes:
        raise r.fail(f"duplicate phrase node id {node_id}")
    if not check_label(tagsets.node, category).ok:
        raise r.fail(f"unknown category {category!r}")
    _check_row_labels(r, function, links, tagsets)
    nodes[node_id] = PhraseNode(node_id, category)
    return _Row(r.line_no, node_id, function, parent, links)


def _check_row_labels(
    r: _Reader, function: str, links: list[tuple[str | None, int]], tagsets: TagsetRegistry
) -> None:
    if function != UNLABELED and function not in tagsets.edge:
        raise r.fail(f"unknown function {function!r}")
    for fn, _target in links:
        if fn is not None and fn not in tagsets.edge:
            raise r.fail(f"unknown secondary function {fn!r}")


def _wire_rows(graph: AnnotationGraph, rows: list[_Row], tagsets: TagsetRegistry) -> None:
    for row in rows:
        if row.parent != 0:
            if row.parent not in graph.phrase_nodes:
                raise errors.DanglingParent(
                    f"parent {row.parent} is not a declared phrase node", row.line_no
                )
            graph.incoming[row.ref] = PrimaryEdge(row.parent, row.ref, row.function)
        elif row.function != UNLABELED:
            raise errors.ParseError(
                f"parentless item {row.ref} carries function {row.function!r}", row.line_no
            )
    for row in rows:
        for fn, target in row.links:
            if not graph.has_ref(target):
                raise errors.ParseError(
                    f"secondary link target {target} does not exist", row.line_no
                )
            if target == row.ref:
                raise errors.ParseError(
                    f"secondary link {row.ref} -> {target} is a self link", row.line_no
                )
            link = SecondaryLink(row.ref, target, fn)
            edge = graph.incoming.get(target)
            if link in graph.secondary_links or (edge and edge.parent == row.ref):
                raise errors.ParseError(
                    f"secondary link {row.ref} -> {target} duplicates an edge", row.line_no
                )
            graph.secondary_links.append(link)
    graph.secondary_links.sort(key=lambda l: (l.source, l.target, l.function or ""))


# --- files ---------------------------------------------------------------

def save(corpus: Corpus, path: str, lock_mode: str = "wait", timeout: float = 10.0) -> None:
    """Write atomically: serialize to a temp file, rename over ``path``.

    A ``<path>.lock`` file makes writers mutually exclusive.  With
    ``lock_mode="wait"`` a busy lock is polled until ``timeout`` seconds;
    with ``"fail"`` a busy lock raises :class:`SaveConflict` immediately.
    """
    if lock_mode not in ("wait", "fail"):
        raise ValueError(f"lock_mode must be 'wait' or 'fail', got {lock_mode!r}")
    text = serialize(corpus)  # serialize before touching the filesystem
    lock_path = path + ".lock"
    deadline = time.monotonic() + timeout
    while True:
        try:
            fd = os.open(lock_path, os.O_CREAT | os.O_EXCL | os.O_WRONLY)
            break
        except FileExistsError:
            if lock_mode == "fail" or time.monotonic() >= deadline:
                raise errors.SaveConflict(f"{path} is locked by another writer") from None
            time.sleep(0.02)
    try:
        os.write(fd, str(os.getpid()).encode("ascii"))
        os.close(fd)
        tmp_path = f"{path}.tmp.{os.getpid()}"
        with open(tmp_path, "w", encoding="utf-8", newline="\n") as handle:
            handle.write(text)
        os.replace(tmp_path, path)
    finally:
        os.unlink(lock_path)


def load(path: str) -> Corpus:
    try:
        with open(path, encoding="utf-8", newline="\n") as handle:
            text = handle.read()
    except OSError as exc:
        raise errors.CorpusError(f"cannot read {path}: {exc}") from exc
    return parse(text)
