"""Hand-annotated demo sentences used by tests, goldens, and the tutorial.

Four German sentences exercising the constructions the data model exists
for: long-distance extraction (crossing branches), an extraposed relative
clause, an understood infinitive subject (secondary link), and shared
arguments under coordination.  All are built through the public editing
API, so they double as an integration check of the command layer.
"""

from __future__ import annotations

from .graph import AnnotationGraph, Status, group, new_sentence, relabel_edge, set_secondary, set_status
from .tagsets import TagsetRegistry, default_tagsets, modify_tagset


def sample_tagsets() -> TagsetRegistry:
    """Default inventories extended with the labels the demo corpus needs."""
    registry = default_tagsets()
    modify_tagset(registry, "edge", "add", "AC", "adpositional case marker")
    modify_tagset(registry, "edge", "add", "PNC", "punctuation attachment")
    modify_tagset(registry, "node", "add", "PP", "adpositional phrase")
    return registry


def extraction_sentence(tagsets: TagsetRegistry) -> AnnotationGraph:
    """"daran wird ihn Anna erkennen, daß er weint"

    The pronominal adverb (1) and the accusative object (3) both belong to
    the infinitive phrase headed by token 5, and the clausal complement of
    that phrase sits at the far right: annotating this as one VP produces
    three branches that cross the finite verb's subtree.
    """
    g = new_sentence(
        "extraction",
        [
            ("daran", "PROAV"),
            ("wird", "VAFIN"),
            ("ihn", "PPER"),
            ("Anna", "NE"),
            ("erkennen", "VVINF"),
            (",", "$,"),
            ("daß", "KOUS"),
            ("er", "PPER"),
            ("weint", "VVFIN"),
        ],
        tagsets,
    )
    sub = group(g, [7, 8, 9], "S", tagsets)
    for child, fn in [(7, "CP"), (8, "SB"), (9, "HD")]:
        relabel_edge(g, child, fn, tagsets)
    vp = group(g, [1, 3, 5, sub], "VP", tagsets)
    for child, fn in [(1, "MO"), (3, "OA"), (5, "HD"), (sub, "OC")]:
        relabel_edge(g, child, fn, tagsets)
    root = group(g, [2, 4, vp, 6], "S", tagsets)
    for child, fn in [(2, "HD"), (4, "SB"), (vp, "OC"), (6, "PNC")]:
        relabel_edge(g, child, fn, tagsets)
    set_status(g, Status.COMPLETE, tagsets)
    return g


def extraposition_sentence(tagsets: TagsetRegistry) -> AnnotationGraph:
    """"schade daß kein Arzt anwesend ist der sich auskennt"

    The relative clause (tokens 7-9) modifies "kein Arzt" but surfaces
    after the verb, so the NP's yield is discontinuous.  The top node has
    no head child, which is fine: headedness is never forced.
    """
    g = new_sentence(
        "extraposition",
        [
            ("schade", "ADJD"),
            ("daß", "KOUS"),
            ("kein", "ART"),
            ("Arzt", "NN"),
            ("anwesend", "ADJD"),
            ("ist", "VAFIN"),
            ("der", "PRELS"),
            ("sich", "PRF"),
            ("auskennt", "VVFIN"),
        ],
        tagsets,
    )
    rc = group(g, [7, 8, 9], "S", tagsets)
    for child, fn in [(7, "SB"), (8, "OA"), (9, "HD")]:
        relabel_edge(g, child, fn, tagsets)
    np = group(g, [3, 4, rc], "NP", tagsets)
    for child, fn in [(3, "NK"), (4, "NK"), (rc, "RC")]:
        relabel_edge(g, child, fn, tagsets)
    sub = group(g, [2, np, 5, 6], "S", tagsets)
    for child, fn in [(2, "CP"), (np, "SB"), (5, "PD"), (6, "HD")]:
        relabel_edge(g, child, fn, tagsets)
    root = group(g, [1, sub], "S", tagsets)
    for child, fn in [(1, "PD"), (sub, "SB")]:
        relabel_edge(g, child, fn, tagsets)
    set_status(g, Status.COMPLETE, tagsets)
    return g


def control_sentence(tagsets: TagsetRegistry) -> AnnotationGraph:
    """"er bat mich zu kommen"

    "mich" is the matrix object and at the same time the understood subject
    of "kommen"; the second role is a secondary link from the infinitive
    phrase to the token, labeled SB.
    """
    g = new_sentence(
        "control",
        [
            ("er", "PPER"),
            ("bat", "VVFIN"),
            ("mich", "PPER"),
            ("zu", "PTKZU"),
            ("kommen", "VVINF"),
        ],
        tagsets,
    )
    vp = group(g, [4, 5], "VP", tagsets)
    for child, fn in [(4, "PM"), (5, "HD")]:
        relabel_edge(g, child, fn, tagsets)
    s = group(g, [1, 2, 3, vp], "S", tagsets)
    for child, fn in [(1, "SB"), (2, "HD"), (3, "OA"), (vp, "OC")]:
        relabel_edge(g, child, fn, tagsets)
    set_secondary(g, vp, 3, "SB", "add", tagsets)
    set_status(g, Status.COMPLETE, tagsets)
    return g


def coordination_sentence(tagsets: TagsetRegistry) -> AnnotationGraph:
    """"sie wurde von preußischen Truppen besetzt und 1887 dem preußischen
    Staat angegliedert"

    Two conjunct VPs under a CVP node (coordination categories are formed
    by prefixing C to a regular one); the subject is shared, expressed by a
    secondary SB link from each conjunct to token 1.
    """
    g = new_sentence(
        "coordination",
        [
            ("sie", "PPER"),
            ("wurde", "VAFIN"),
            ("von", "APPR"),
            ("preußischen", "ADJA"),
            ("Truppen", "NN"),
            ("besetzt", "VVPP"),
            ("und", "KON"),
            ("1887", "CARD"),
            ("dem", "ART"),
            ("preußischen", "ADJA"),
            ("Staat", "NN"),
            ("angegliedert", "VVPP"),
        ],
        tagsets,
    )
    pp = group(g, [3, 4, 5], "PP", tagsets)
    for child, fn in [(3, "AC"), (4, "NK"), (5, "NK")]:
        relabel_edge(g, child, fn, tagsets)
    vp1 = group(g, [pp, 6], "VP", tagsets)
    for child, fn in [(pp, "MO"), (6, "HD")]:
        relabel_edge(g, child, fn, tagsets)
    np = group(g, [9, 10, 11], "NP", tagsets)
    for child, fn in [(9, "NK"), (10, "NK"), (11, "NK")]:
        relabel_edge(g, child, fn, tagsets)
    vp2 = group(g, [8, np, 12], "VP", tagsets)
    for child, fn in [(8, "MO"), (np, "DA"), (12, "HD")]:
        relabel_edge(g, child, fn, tagsets)
    cvp = group(g, [vp1, 7, vp2], "CVP", tagsets)
    for child, fn in [(vp1, "CJ"), (7, "CD"), (vp2, "CJ")]:
        relabel_edge(g, child, fn, tagsets)
    s = group(g, [1, 2, cvp], "S", tagsets)
    for child, fn in [(1, "SB"), (2, "HD"), (cvp, "OC")]:
        relabel_edge(g, child, fn, tagsets)
    set_secondary(g, vp1, 1, "SB", "add", tagsets)
    set_secondary(g, vp2, 1, "SB", "add", tagsets)
    set_status(g, Status.COMPLETE, tagsets)
    return g


def sample_corpus():
    """The four demo sentences in one corpus, ready for serialization."""
    from .corpus import Corpus

    tagsets = sample_tagsets()
    return Corpus(
        name="demo",
        tagsets=tagsets,
        sentences=[
            extraction_sentence(tagsets),
            extraposition_sentence(tagsets),
            control_sentence(tagsets),
            coordination_sentence(tagsets),
        ],
    )
