"""Synthetic data with known ground truth, plus random-structure helpers.

The template generator produces a corpus from a fixed two-level grammar
whose function distributions are known exactly, so the optimal achievable
decoding accuracy (the Bayes accuracy) can be computed analytically and a
trained tagger measured against it.  Sentences are built through the
public editing commands, never by poking graph internals.

The random-graph helpers build arbitrary *valid* annotation graphs,
discontinuities included, for property and round-trip testing.
"""

from __future__ import annotations

import random

from .corpus import Corpus
from .graph import (
    HEAD_FUNCTION,
    AnnotationGraph,
    Status,
    group,
    new_sentence,
    relabel_edge,
    set_secondary,
    set_status,
)
from .tagsets import TagsetRegistry, default_tagsets

# Sentence-level templates: probability, child types in order.  "NP"
# children expand through the phrase templates below; the rest are tokens.
SENTENCE_TEMPLATES: tuple[tuple[float, tuple[str, ...]], ...] = (
    (0.35, ("NP", "VVFIN", "NP")),
    (0.15, ("NP", "VVFIN", "ADV")),
    (0.50, ("NP", "VVFIN")),
)

PHRASE_TEMPLATES: tuple[tuple[float, tuple[str, ...]], ...] = (
    (0.50, ("ART", "NN")),
    (0.20, ("ART", "ADJA", "NN")),
    (0.30, ("NE",)),
)

#: True conditional function distributions P(G | parent category, child type).
FUNCTION_TABLES: dict[tuple[str, str], dict[str, float]] = {
    ("S", "NP"): {"SB": 0.93, "OA": 0.07},
    ("S", "VVFIN"): {"HD": 1.0},
    ("S", "ADV"): {"MO": 0.84, "OA": 0.16},
    ("NP", "ART"): {"NK": 0.97, "MO": 0.03},
    ("NP", "ADJA"): {"NK": 0.95, "MO": 0.05},
    ("NP", "NN"): {"NK": 0.96, "GR": 0.04},
    ("NP", "NE"): {"NK": 0.56, "GR": 0.44},
}

_FORMS = {
    "ART": "die",
    "ADJA": "kleine",
    "NN": "Stadt",
    "NE": "Anna",
    "VVFIN": "wächst",
    "ADV": "schnell",
}


def _draw(rng: random.Random, options) -> object:
    """Pick from (probability, value) pairs or a {value: probability} map."""
    if isinstance(options, dict):
        pairs = [(p, v) for v, p in sorted(options.items())]
    else:
        pairs = [(p, v) for p, v in options]
    x = rng.random()
    cumulative = 0.0
    for p, v in pairs:
        cumulative += p
        if x < cumulative:
            return v
    return pairs[-1][1]


def generate_corpus(
    n_sentences: int, seed: int, name: str = "synthetic"
) -> Corpus:
    """Draw complete sentences from the template grammar.

    Every sentence has one S phrase over one to two NP phrases plus verb
    and optional adverb tokens; functions are drawn from the true tables,
    so label noise is exactly the tables' entropy and nothing else.
    """
    if n_sentences < 1:
        raise ValueError("need at least one sentence")
    rng = random.Random(seed)
    tagsets = default_tagsets()
    sentences = []
    for i in range(1, n_sentences + 1):
        sentences.append(_generate_sentence(rng, i, tagsets))
    return Corpus(name=name, tagsets=tagsets, sentences=sentences)


def _generate_sentence(
    rng: random.Random, index: int, tagsets: TagsetRegistry
) -> AnnotationGraph:
    s_template = _draw(rng, SENTENCE_TEMPLATES)
    expansions: list[tuple[str, tuple[str, ...]]] = []  # (child type, its tokens)
    for child_type in s_template:
        if child_type == "NP":
            expansions.append(("NP", _draw(rng, PHRASE_TEMPLATES)))
        else:
            expansions.append((child_type, (child_type,)))

    tokens = [
        (_FORMS[tag], tag) for _, tags in expansions for tag in tags
    ]
    graph = new_sentence(f"syn-{index}", tokens, tagsets)

    position = 1
    s_children: list[tuple[int, str]] = []  # (graph id, child type)
    for child_type, tags in expansions:
        if child_type == "NP":
            members = list(range(position, position + len(tags)))
            node = group(graph, members, "NP", tagsets)
            for member, tag in zip(members, tags):
                relabel_edge(
                    graph, member, _draw(rng, FUNCTION_TABLES[("NP", tag)]), tagsets
                )
            s_children.append((node, "NP"))
        else:
            s_children.append((position, child_type))
        position += len(tags)

    s_node = group(graph, [ref for ref, _ in s_children], "S", tagsets)
    for ref, child_type in s_children:
        relabel_edge(
            graph, ref, _draw(rng, FUNCTION_TABLES[("S", child_type)]), tagsets
        )
    assert s_node is not None
    set_status(graph, Status.COMPLETE, tagsets)
    return graph


# --- analytic ground truth ------------------------------------------------

def position_weights() -> dict[tuple[str, str], float]:
    """Expected number of (parent category, child type) decoding positions
    per sentence, straight from the template probabilities."""
    weights: dict[tuple[str, str], float] = {}

    def add(key, w):
        weights[key] = weights.get(key, 0.0) + w

    expected_nps = 0.0
    for p, template in SENTENCE_TEMPLATES:
        for child_type in template:
            if child_type == "NP":
                expected_nps += p
                add(("S", "NP"), p)
            else:
                add(("S", child_type), p)
    for p, template in PHRASE_TEMPLATES:
        for tag in template:
            add(("NP", tag), p * expected_nps)
    return weights


def bayes_accuracy() -> float:
    """Best possible per-position accuracy for data drawn from the true
    tables: pick argmax_G P(G|Q,T) everywhere."""
    weights = position_weights()
    total = sum(weights.values())
    winning = sum(
        w * max(FUNCTION_TABLES[key].values()) for key, w in weights.items()
    )
    return winning / total


def reliable_fraction_at(theta: float) -> float:
    """Fraction of positions whose true-table competitor quotient is at or
    under ``theta`` (positions with a single possible function count as
    always reliable)."""
    weights = position_weights()
    total = sum(weights.values())
    covered = 0.0
    for key, w in weights.items():
        probs = sorted(FUNCTION_TABLES[key].values(), reverse=True)
        if len(probs) < 2 or probs[1] / probs[0] <= theta:
            covered += w
    return covered / total


# --- random valid graphs --------------------------------------------------

_SAFE_POS = ("ART", "ADJA", "NN", "NE", "VVFIN", "ADV", "PPER", "APPR")
_SAFE_NODE = ("S", "NP", "AP", "VP")
_NON_HEAD = ("SB", "MO", "OA", "OC", "DA", "NK", "PD", "CP")


def make_random_graph(
    rng: random.Random,
    tagsets: TagsetRegistry,
    sentence_id: str,
    max_tokens: int = 9,
    complete: bool = True,
) -> AnnotationGraph:
    """A random valid graph built by repeatedly grouping random subsets of
    the parentless items, which freely produces discontinuous yields.

    With ``complete`` the construction ends in a single root and sets the
    status; otherwise labeling stops partway to leave warning-level gaps.
    """
    n = rng.randint(1, max_tokens)
    tokens = [(f"w{i}", rng.choice(_SAFE_POS)) for i in range(1, n + 1)]
    graph = new_sentence(sentence_id, tokens, tagsets)

    def parentless():
        return graph.roots()

    while len(parentless()) > 1 and rng.random() < 0.7:
        pool = parentless()
        size = rng.randint(2, min(4, len(pool)))
        members = rng.sample(pool, size)
        group(graph, members, rng.choice(_SAFE_NODE), tagsets)
        _label_children(rng, graph, tagsets, members, complete)

    if complete:
        pool = parentless()
        if len(pool) > 1 or not graph.phrase_nodes:
            group(graph, pool, rng.choice(_SAFE_NODE), tagsets)
            _label_children(rng, graph, tagsets, pool, complete)
        _add_random_links(rng, graph, tagsets)
        set_status(graph, Status.COMPLETE, tagsets)
    else:
        _add_random_links(rng, graph, tagsets)
    return graph


def _label_children(rng, graph, tagsets, members, always_label) -> None:
    head_at = rng.randrange(len(members)) if rng.random() < 0.8 else None
    for j, member in enumerate(members):
        if j == head_at:
            relabel_edge(graph, member, HEAD_FUNCTION, tagsets)
        elif always_label or rng.random() < 0.9:
            relabel_edge(graph, member, rng.choice(_NON_HEAD), tagsets)
        # else: leave the placeholder label (a warning while in progress)


def _add_random_links(rng, graph, tagsets) -> None:
    refs = [t.position for t in graph.tokens] + list(graph.phrase_nodes)
    for _ in range(rng.randint(0, 2)):
        source, target = rng.choice(refs), rng.choice(refs)
        function = rng.choice(_NON_HEAD + (None,))
        try:
            set_secondary(graph, source, target, function, "add", tagsets)
        except Exception:
            pass  # self link, duplicate, or shadowing a primary edge: skip


def make_random_corpus(rng: random.Random, n_sentences: int | None = None) -> Corpus:
    """Random corpus for round-trip tests: mixed statuses, comments,
    metadata, and an occasional tagset modification."""
    from .graph import add_comment
    from .tagsets import modify_tagset

    tagsets = default_tagsets()
    if rng.random() < 0.3:
        modify_tagset(tagsets, "edge", "add", "XX", "extra relation")
    if rng.random() < 0.2:
        modify_tagset(tagsets, "node", "add", "PP", "adpositional phrase")

    if n_sentences is None:
        n_sentences = rng.randint(0, 6)
    corpus = Corpus(name=f"random{rng.randrange(1000)}", tagsets=tagsets)
    if rng.random() < 0.5:
        corpus.metadata.append(("origin", "generator"))
    if rng.random() < 0.3:
        corpus.metadata.append(("note", "value with\ttab"))
    for i in range(1, n_sentences + 1):
        graph = make_random_graph(
            rng, tagsets, f"r{i}", complete=rng.random() < 0.6
        )
        if rng.random() < 0.4:
            add_comment(graph, f"comment {rng.randrange(100)}")
        corpus.sentences.append(graph)
    return corpus
