"""Word-order-independent annotation graphs.

A sentence is annotated as a forest of phrase nodes over its tokens.  The
primary edges carry grammatical-function labels and are *not* constrained to
be projective: a phrase may dominate a discontinuous set of tokens, so
branches may cross when drawn over the surface string.  Secondary links add
structure sharing (e.g. understood subjects of infinitives) on top of the
primary forest without affecting it.

Identifiers share one integer namespace: token positions are ``1..n`` and
phrase nodes are allocated from :data:`PHRASE_ID_BASE` upward, which keeps
the two visually distinct in files and limits sentences to 499 tokens.

Editing operations mutate the graph in place and raise
:class:`~graphbank.errors.AnnotationError` subclasses when a precondition
fails; a failed operation never leaves partial changes behind.  The module
keeps no hidden state, so callers that need snapshot semantics (the service
layer does) simply deep-copy before editing.
"""

from __future__ import annotations

import copy
from dataclasses import dataclass, field
from enum import Enum

from . import errors
from .tagsets import (
    UNLABELED,
    TagsetRegistry,
    check_label,
    is_coordination_category,
)

#: First phrase-node id; token positions must stay below it.
PHRASE_ID_BASE = 500


class Status(str, Enum):
    IN_PROGRESS = "in-progress"
    COMPLETE = "complete"


@dataclass(frozen=True)
class Token:
    position: int  # 1-based surface index
    form: str
    pos_tag: str


@dataclass(frozen=True)
class PhraseNode:
    node_id: int
    category: str


@dataclass(frozen=True)
class PrimaryEdge:
    parent: int
    child: int
    function: str = UNLABELED


@dataclass(frozen=True)
class SecondaryLink:
    """Directed structure-sharing edge, drawn dotted.

    ``source`` is the constituent with the unrealized argument, ``target``
    the element that fills it, ``function`` the role being filled (optional:
    an unlabeled link is legal).
    """

    source: int
    target: int
    function: str | None = None


@dataclass(frozen=True)
class Violation:
    severity: str  # "error" | "warning"
    rule: str
    message: str
    ids: tuple[int, ...] = ()


#: Closed set of validation rules.  Order here fixes report order.
RULES = {
    "cycle": "primary edges must be acyclic",
    "pos-not-in-tagset": "token part-of-speech tag must be in the pos tagset",
    "category-not-in-tagset": "phrase category must be in the node tagset (coordination prefix allowed)",
    "function-not-in-tagset": "edge function must be in the edge tagset",
    "multiple-heads": "a phrase may have at most one HD child",
    "childless-phrase": "a phrase node must dominate at least one child",
    "degenerate-coordination": "a coordination category should have at least two children",
    "unlabeled-edge": "edges must be labeled before completion",
    "unattached-token": "tokens should be attached to the structure",
    "not-single-rooted": "a complete sentence has exactly one root phrase node",
}

HEAD_FUNCTION = "HD"


@dataclass
class AnnotationGraph:
    """One sentence: tokens, phrase nodes, labeled edges, secondary links."""

    sentence_id: str
    tokens: list[Token]
    phrase_nodes: dict[int, PhraseNode] = field(default_factory=dict)
    #: child id -> its unique incoming primary edge (forest by construction)
    incoming: dict[int, PrimaryEdge] = field(default_factory=dict)
    #: kept sorted by (source, target, function) so serialization is canonical
    secondary_links: list[SecondaryLink] = field(default_factory=list)
    comments: list[str] = field(default_factory=list)
    status: Status = Status.IN_PROGRESS

    # -- queries ----------------------------------------------------------

    def n_tokens(self) -> int:
        return len(self.tokens)

    def is_token(self, ref: int) -> bool:
        return 1 <= ref <= len(self.tokens)

    def is_phrase(self, ref: int) -> bool:
        return ref in self.phrase_nodes

    def has_ref(self, ref: int) -> bool:
        return self.is_token(ref) or self.is_phrase(ref)

    def token(self, position: int) -> Token:
        if not self.is_token(position):
            raise errors.UnknownNode(f"no token at position {position}")
        return self.tokens[position - 1]

    def parent_of(self, ref: int) -> int | None:
        edge = self.incoming.get(ref)
        return edge.parent if edge else None

    def children_of(self, parent: int) -> list[int]:
        """Direct children ordered by leftmost dominated token, then id.

        Children without any dominated token (childless sub-phrases) sort
        after all others.
        """
        kids = [c for c, e in self.incoming.items() if e.parent == parent]
        return sorted(kids, key=lambda c: (self._leftmost(c), c))

    def _leftmost(self, ref: int) -> int:
        y = self.yield_of(ref)
        return y[0] if y else PHRASE_ID_BASE

    def yield_of(self, ref: int) -> list[int]:
        """Sorted positions of all tokens transitively dominated by ``ref``
        via primary edges; a token's yield is itself."""
        if not self.has_ref(ref):
            raise errors.UnknownNode(f"unknown id {ref}")
        out: list[int] = []
        stack = [ref]
        children: dict[int, list[int]] = {}
        for child, edge in self.incoming.items():
            children.setdefault(edge.parent, []).append(child)
        while stack:
            cur = stack.pop()
            if self.is_token(cur):
                out.append(cur)
            else:
                stack.extend(children.get(cur, ()))
        return sorted(out)

    def is_continuous(self, ref: int) -> bool:
        """True iff the yield is an integer interval (empty counts as
        continuous by convention)."""
        y = self.yield_of(ref)
        return not y or y[-1] - y[0] + 1 == len(y)

    def roots(self) -> list[int]:
        """All parentless items, tokens first, ascending."""
        out = [t.position for t in self.tokens if t.position not in self.incoming]
        out += [n for n in sorted(self.phrase_nodes) if n not in self.incoming]
        return out

    def copy(self) -> "AnnotationGraph":
        return copy.deepcopy(self)

    def next_node_id(self) -> int:
        return max([PHRASE_ID_BASE - 1, *self.phrase_nodes]) + 1


# --- construction --------------------------------------------------------

def new_sentence(
    sentence_id: str,
    tokens: list[tuple[str, str]],
    tagsets: TagsetRegistry,
) -> AnnotationGraph:
    """Create a fresh sentence from ``(form, pos_tag)`` pairs."""
    if not tokens:
        raise errors.EmptySentence(f"sentence {sentence_id!r} has no tokens")
    if len(tokens) >= PHRASE_ID_BASE:
        raise errors.TooManyTokens(
            f"sentence {sentence_id!r} has {len(tokens)} tokens; limit is {PHRASE_ID_BASE - 1}"
        )
    if not sentence_id or any(c.isspace() for c in sentence_id):
        raise ValueError(f"bad sentence id {sentence_id!r}")
    toks = []
    for i, (form, pos_tag) in enumerate(tokens, start=1):
        if not form or "\t" in form or "\n" in form:
            raise ValueError(f"bad token form {form!r} at position {i}")
        if not check_label(tagsets.pos, pos_tag).ok:
            raise errors.UnknownLabel(pos_tag, "pos")
        toks.append(Token(i, form, pos_tag))
    return AnnotationGraph(sentence_id=sentence_id, tokens=toks)


# --- editing commands ----------------------------------------------------

def group(
    graph: AnnotationGraph,
    children: list[int],
    category: str,
    tagsets: TagsetRegistry,
) -> int:
    """Form a new phrase over the given children; returns the new node id.

    Children need not be contiguous in surface order — grouping a scattered
    set is exactly how a crossing branch comes into existence.  The new
    edges start out unlabeled.
    """
    if not children:
        raise errors.EmptyGroup("cannot group an empty selection")
    if len(set(children)) != len(children):
        raise errors.DuplicateChild(f"duplicate child ids in {children}")
    if not check_label(tagsets.node, category).ok:
        raise errors.UnknownLabel(category, "node")
    for c in children:
        if not graph.has_ref(c):
            raise errors.UnknownNode(f"unknown id {c}")
        if c in graph.incoming:
            raise errors.AlreadyAttached(f"{c} already has a parent ({graph.incoming[c].parent})")
    node_id = graph.next_node_id()
    graph.phrase_nodes[node_id] = PhraseNode(node_id, category)
    for c in children:
        graph.incoming[c] = PrimaryEdge(parent=node_id, child=c)
    return node_id


def ungroup(graph: AnnotationGraph, node_id: int, force: bool = False) -> None:
    """Dissolve a phrase: its children become parentless, the node and any
    secondary links touching it disappear."""
    if not graph.is_phrase(node_id):
        raise errors.UnknownNode(f"unknown phrase node {node_id}")
    if node_id in graph.incoming:
        if not force:
            raise errors.StillAttached(
                f"node {node_id} is attached to {graph.incoming[node_id].parent}; use force"
            )
        del graph.incoming[node_id]
    for child in [c for c, e in graph.incoming.items() if e.parent == node_id]:
        del graph.incoming[child]
    graph.secondary_links = [
        l for l in graph.secondary_links if node_id not in (l.source, l.target)
    ]
    del graph.phrase_nodes[node_id]


def relabel_node(
    graph: AnnotationGraph, node_id: int, category: str, tagsets: TagsetRegistry
) -> None:
    """Change a phrase category; coordination categories (C+base) pass."""
    if not graph.is_phrase(node_id):
        raise errors.UnknownNode(f"unknown phrase node {node_id}")
    if not check_label(tagsets.node, category).ok:
        raise errors.UnknownLabel(category, "node")
    graph.phrase_nodes[node_id] = PhraseNode(node_id, category)


def relabel_edge(
    graph: AnnotationGraph, child: int, function: str, tagsets: TagsetRegistry
) -> None:
    """Change the function label of the edge entering ``child``."""
    edge = graph.incoming.get(child)
    if edge is None:
        raise errors.UnknownNode(f"{child} has no incoming edge")
    if function not in tagsets.edge:
        raise errors.UnknownLabel(function, "edge")
    graph.incoming[child] = PrimaryEdge(edge.parent, child, function)


def reattach(graph: AnnotationGraph, child: int, new_parent: int) -> None:
    """Move ``child`` under ``new_parent``, keeping its function label.

    A parentless item is simply attached (with the unlabeled placeholder);
    this is the only way to add a child to an existing phrase.
    """
    if not graph.has_ref(child):
        raise errors.UnknownNode(f"unknown id {child}")
    if not graph.is_phrase(new_parent):
        raise errors.UnknownNode(f"new parent {new_parent} is not a phrase node")
    # walk up from new_parent; hitting child means child dominates it
    cur: int | None = new_parent
    while cur is not None:
        if cur == child:
            raise errors.WouldCreateCycle(f"{child} dominates {new_parent}")
        cur = graph.parent_of(cur)
    old = graph.incoming.get(child)
    function = old.function if old else UNLABELED
    graph.incoming[child] = PrimaryEdge(new_parent, child, function)


def detach(graph: AnnotationGraph, child: int) -> None:
    """Remove the incoming primary edge of ``child``."""
    if child not in graph.incoming:
        raise errors.UnknownNode(f"{child} has no incoming edge")
    del graph.incoming[child]


def set_secondary(
    graph: AnnotationGraph,
    source: int,
    target: int,
    function: str | None,
    action: str,
    tagsets: TagsetRegistry | None = None,
) -> None:
    """Add or remove a secondary link; primary structure is untouched."""
    for ref in (source, target):
        if not graph.has_ref(ref):
            raise errors.UnknownNode(f"unknown id {ref}")
    if source == target:
        raise errors.SelfLink(f"secondary link {source} -> {target}")
    if function is not None and tagsets is not None and function not in tagsets.edge:
        raise errors.UnknownLabel(function, "edge")
    link = SecondaryLink(source, target, function)
    if action == "add":
        if link in graph.secondary_links:
            raise errors.DuplicateLink(f"link {source} -> {target} already present")
        edge = graph.incoming.get(target)
        if edge is not None and edge.parent == source:
            raise errors.DuplicateLink(
                f"link {source} -> {target} duplicates a primary edge"
            )
        graph.secondary_links.append(link)
        graph.secondary_links.sort(key=_link_key)
    elif action == "remove":
        if link not in graph.secondary_links:
            raise errors.NoSuchLink(f"no secondary link {source} -> {target} ({function})")
        graph.secondary_links.remove(link)
    else:
        raise ValueError(f"action must be 'add' or 'remove', got {action!r}")


def _link_key(link: SecondaryLink):
    return (link.source, link.target, link.function or "")


def add_comment(graph: AnnotationGraph, text: str) -> None:
    if "\n" in text:
        raise ValueError("comments must be single-line")
    graph.comments.append(text)


def set_status(graph: AnnotationGraph, status: Status, tagsets: TagsetRegistry) -> None:
    """Change the sentence status.

    Marking a sentence complete is gated on a clean validation report
    (evaluated under completion rules); reverting to in-progress is always
    allowed.
    """
    status = Status(status)
    if status is Status.COMPLETE:
        probe = graph.copy()
        probe.status = Status.COMPLETE
        found = validate(probe, tagsets)
        if found:
            raise errors.CompletionBlocked(found)
    graph.status = status


# --- validation ----------------------------------------------------------

def validate(graph: AnnotationGraph, tagsets: TagsetRegistry) -> list[Violation]:
    """Deterministic rule check; violations are data, never exceptions.

    A complete sentence must come back empty.  Rule order follows
    :data:`RULES`; within a rule, findings are sorted by id.
    """
    complete = graph.status is Status.COMPLETE
    out: list[Violation] = []

    cyclic = _find_cycle_members(graph)
    if cyclic:
        out.append(
            Violation("error", "cycle", "primary edges contain a cycle", tuple(sorted(cyclic)))
        )

    for tok in graph.tokens:
        if not check_label(tagsets.pos, tok.pos_tag).ok:
            out.append(
                Violation(
                    "error",
                    "pos-not-in-tagset",
                    f"token {tok.position} ({tok.form!r}) has unknown pos tag {tok.pos_tag!r}",
                    (tok.position,),
                )
            )

    for node_id in sorted(graph.phrase_nodes):
        category = graph.phrase_nodes[node_id].category
        if not check_label(tagsets.node, category).ok:
            out.append(
                Violation(
                    "error",
                    "category-not-in-tagset",
                    f"node {node_id} has unknown category {category!r}",
                    (node_id,),
                )
            )

    for child in sorted(graph.incoming):
        fn = graph.incoming[child].function
        if fn != UNLABELED and fn not in tagsets.edge:
            out.append(
                Violation(
                    "error",
                    "function-not-in-tagset",
                    f"edge into {child} has unknown function {fn!r}",
                    (child,),
                )
            )

    heads: dict[int, list[int]] = {}
    for child in sorted(graph.incoming):
        edge = graph.incoming[child]
        if edge.function == HEAD_FUNCTION:
            heads.setdefault(edge.parent, []).append(child)
    for parent in sorted(heads):
        if len(heads[parent]) > 1:
            out.append(
                Violation(
                    "error",
                    "multiple-heads",
                    f"node {parent} has {len(heads[parent])} HD children",
                    (parent, *heads[parent]),
                )
            )

    with_children = {e.parent for e in graph.incoming.values()}
    for node_id in sorted(graph.phrase_nodes):
        if node_id not in with_children:
            out.append(
                Violation(
                    "error",
                    "childless-phrase",
                    f"node {node_id} has no children",
                    (node_id,),
                )
            )

    for node_id in sorted(graph.phrase_nodes):
        category = graph.phrase_nodes[node_id].category
        if is_coordination_category(tagsets.node, category):
            n_children = sum(1 for e in graph.incoming.values() if e.parent == node_id)
            if n_children < 2:
                out.append(
                    Violation(
                        "warning",
                        "degenerate-coordination",
                        f"coordination node {node_id} ({category}) has {n_children} child(ren)",
                        (node_id,),
                    )
                )

    severity = "error" if complete else "warning"
    for child in sorted(graph.incoming):
        if graph.incoming[child].function == UNLABELED:
            out.append(
                Violation(
                    severity,
                    "unlabeled-edge",
                    f"edge into {child} is unlabeled",
                    (child,),
                )
            )

    for tok in graph.tokens:
        if tok.position not in graph.incoming:
            out.append(
                Violation(
                    severity,
                    "unattached-token",
                    f"token {tok.position} ({tok.form!r}) is unattached",
                    (tok.position,),
                )
            )

    if complete:
        phrase_roots = [n for n in sorted(graph.phrase_nodes) if n not in graph.incoming]
        if len(phrase_roots) != 1:
            out.append(
                Violation(
                    "error",
                    "not-single-rooted",
                    f"complete sentence has {len(phrase_roots)} root phrase nodes",
                    tuple(phrase_roots),
                )
            )

    rule_order = {rule: i for i, rule in enumerate(RULES)}
    out.sort(key=lambda v: (rule_order[v.rule], v.ids))
    return out


def _find_cycle_members(graph: AnnotationGraph) -> set[int]:
    """Ids on a parent-chain cycle.  The child-keyed edge map guarantees at
    most one parent each, so a cycle is a closed parent chain."""
    color: dict[int, int] = {}  # 1 = on current chain, 2 = done
    cyclic: set[int] = set()
    for start in graph.incoming:
        chain = []
        cur: int | None = start
        while cur is not None and color.get(cur) != 2:
            if color.get(cur) == 1:
                # closed the loop: everything from cur onwards is cyclic
                idx = chain.index(cur)
                cyclic.update(chain[idx:])
                break
            color[cur] = 1
            chain.append(cur)
            cur = graph.parent_of(cur)
        for ref in chain:
            color[ref] = 2
    return cyclic


# --- constituency recovery ------------------------------------------------

@dataclass(frozen=True)
class Trace(object):
    """Extraction record: ``child`` was moved away from ``origin`` while
    flattening crossing branches."""

    child: int
    origin: int


def to_constituency(graph: AnnotationGraph) -> tuple[AnnotationGraph, list[Trace]]:
    """Recover a projective tree plus a trace table from a complete graph.

    Repeatedly takes a lowest node with a discontinuous yield, partitions
    its children into maximal surface-contiguous blocks, keeps the block
    containing the HD child (with no head: the block with the most children,
    leftmost on a tie), and reattaches every other block's children to the
    node's parent, recording one trace per moved child.  Each step strictly
    shrinks one discontinuous yield and touches no other node's yield, so
    the loop terminates with every yield an interval.

    Secondary links are not carried into the output: the result is a plain
    tree, with the extraction history in the trace table.
    """
    if graph.status is not Status.COMPLETE:
        raise errors.GraphNotComplete(
            f"sentence {graph.sentence_id!r} is {graph.status.value}"
        )
    tree = graph.copy()
    tree.secondary_links = []
    traces: list[Trace] = []

    while True:
        discontinuous = {
            n for n in tree.phrase_nodes if not tree.is_continuous(n)
        }
        if not discontinuous:
            break
        lowest = sorted(
            n for n in discontinuous
            if not any(_dominates(tree, n, m) for m in discontinuous if m != n)
        )[0]
        parent = tree.parent_of(lowest)
        assert parent is not None  # the root spans 1..n, always continuous

        kids = tree.children_of(lowest)
        spans = {c: tree.yield_of(c) for c in kids}
        # every child of a *lowest* discontinuous node has an interval yield,
        # so adjacency of consecutive intervals decides block membership
        blocks: list[list[int]] = [[kids[0]]]
        for prev, cur in zip(kids, kids[1:]):
            if spans[cur][0] == spans[prev][-1] + 1:
                blocks[-1].append(cur)
            else:
                blocks.append([cur])

        kept = None
        for block in blocks:
            if any(tree.incoming[c].function == HEAD_FUNCTION for c in block):
                kept = block
                break
        if kept is None:
            kept = max(blocks, key=len)  # ties resolve leftmost: max keeps first
        for block in blocks:
            if block is kept:
                continue
            for child in block:
                function = tree.incoming[child].function
                tree.incoming[child] = PrimaryEdge(parent, child, function)
                traces.append(Trace(child=child, origin=lowest))
    return tree, traces


def _dominates(graph: AnnotationGraph, ancestor: int, ref: int) -> bool:
    cur = graph.parent_of(ref)
    while cur is not None:
        if cur == ancestor:
            return True
        cur = graph.parent_of(cur)
    return False
