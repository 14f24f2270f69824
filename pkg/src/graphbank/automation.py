"""Automation ladder: how much structure the machine proposes per step.

Level 0 proposes nothing.  At level 1 the human picks the children and the
category and the tagger fills in the function labels; at level 2 the human
picks only the children; at level 3 the machine also finds candidate
phrases itself by chunking noun kernels (optional determiner, adjectives,
nouns) out of the unattached tokens.  Full parsing is deliberately not a
level.

Everything here returns proposals as plain data.  Nothing is ever applied
to the graph; application goes through the normal editing commands after
the human has confirmed whatever the tagger marked unreliable.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import IntEnum

from . import errors
from .graph import AnnotationGraph
from .tagger import Suggestion, TaggerModel, decode_category, decode_functions


class AutomationLevel(IntEnum):
    MANUAL = 0
    FUNCTIONS = 1
    CATEGORY = 2
    KERNELS = 3


#: Selection fields the human must still provide at each level; strictly
#: shrinking along the ladder.
REQUIRED_FIELDS: dict[AutomationLevel, frozenset[str]] = {
    AutomationLevel.MANUAL: frozenset({"children", "category", "functions"}),
    AutomationLevel.FUNCTIONS: frozenset({"children", "category"}),
    AutomationLevel.CATEGORY: frozenset({"children"}),
    AutomationLevel.KERNELS: frozenset(),
}


@dataclass(frozen=True)
class KernelSpan:
    """Maximal token run matching the noun-kernel shape, 1-based inclusive."""

    start: int
    end: int
    category: str = "NP"

    def __post_init__(self):
        if not 1 <= self.start <= self.end:
            raise ValueError(f"bad span [{self.start}, {self.end}]")


@dataclass(frozen=True)
class KernelConfig:
    """Pos classes for the kernel pattern (determiner)?(adjective)*(noun)+."""

    determiner_tags: frozenset[str] = frozenset({"ART"})
    adjective_tags: frozenset[str] = frozenset({"ADJA"})
    noun_tags: frozenset[str] = frozenset({"NN", "NE"})
    category: str = "NP"


@dataclass(frozen=True)
class EditProposal:
    """One proposed phrase: which children, which category, which functions,
    with the per-position reliability records backing the functions."""

    children: tuple[int, ...]
    category: str
    functions: tuple[str, ...]
    suggestions: tuple[Suggestion, ...]
    level: AutomationLevel


def kernel_chunk(
    pos_tags, config: KernelConfig | None = None
) -> list[KernelSpan]:
    """Greedy left-to-right pass yielding non-overlapping kernel spans."""
    config = config or KernelConfig()
    tags = list(pos_tags)
    spans: list[KernelSpan] = []
    i = 0
    while i < len(tags):
        j = i
        if j < len(tags) and tags[j] in config.determiner_tags:
            j += 1
        while j < len(tags) and tags[j] in config.adjective_tags:
            j += 1
        nouns = 0
        while j < len(tags) and tags[j] in config.noun_tags:
            j += 1
            nouns += 1
        if nouns:
            spans.append(KernelSpan(i + 1, j, config.category))
            i = j
        else:
            i += 1
    return spans


def suggest(
    graph: AnnotationGraph,
    model: TaggerModel | None,
    level: AutomationLevel | int,
    selection=None,
    config: KernelConfig | None = None,
    variant: str = "paper",
) -> list[EditProposal]:
    """Produce edit proposals for one automation step.

    ``selection`` is ``(child_ids, category)`` at level 1, ``child_ids`` at
    level 2, and unused at level 3, where kernel spans over fully unattached
    tokens are proposed instead.  The graph is never touched.
    """
    level = AutomationLevel(level)
    if level is AutomationLevel.MANUAL:
        return []
    if model is None:
        raise errors.NoModel(f"level {level.value} needs a trained model")

    if level is AutomationLevel.FUNCTIONS:
        children, category = _check_selection(graph, level, selection, with_category=True)
        decoding = decode_functions(model, category, _child_types(graph, children), variant)
        return [_proposal(children, category, decoding, level)]

    if level is AutomationLevel.CATEGORY:
        children, _ = _check_selection(graph, level, selection, with_category=False)
        category, decoding = decode_category(model, _child_types(graph, children), variant)
        return [_proposal(children, category, decoding, level)]

    proposals = []
    for span in kernel_chunk([t.pos_tag for t in graph.tokens], config):
        members = list(range(span.start, span.end + 1))
        if any(p in graph.incoming for p in members):
            continue  # partially built structure wins over re-chunking
        category, decoding = decode_category(
            model, [graph.token(p).pos_tag for p in members], variant
        )
        proposals.append(_proposal(members, category, decoding, AutomationLevel.KERNELS))
    return proposals


def _check_selection(graph, level, selection, with_category):
    if with_category:
        if (
            not isinstance(selection, tuple)
            or len(selection) != 2
            or not isinstance(selection[1], str)
        ):
            raise ValueError(f"level {level.value} needs (children, category)")
        children, category = selection
    else:
        children, category = selection, None
    try:
        children = [int(c) for c in children]
    except (TypeError, ValueError):
        raise ValueError(f"level {level.value} needs a list of child ids") from None
    if not children:
        raise ValueError("selection has no children")
    if len(set(children)) != len(children):
        raise ValueError(f"duplicate ids in selection {children}")
    for c in children:
        if not graph.has_ref(c):
            raise errors.UnknownNode(f"unknown id {c} in selection")
    return children, category


def _child_types(graph: AnnotationGraph, children) -> list[str]:
    return [
        graph.token(c).pos_tag if graph.is_token(c) else graph.phrase_nodes[c].category
        for c in children
    ]


def _proposal(children, category, decoding, level) -> EditProposal:
    return EditProposal(
        children=tuple(children),
        category=category,
        functions=decoding.labels(),
        suggestions=decoding.suggestions,
        level=level,
    )
