"""graphbank: an annotation workbench for free word-order treebanks.

Sentences are annotated as unordered trees whose branches may cross the
surface string, with grammatical functions on the edges and secondary links
for structure sharing.  The package bundles the data model and editing
commands (:mod:`graphbank.graph`), versioned tag inventories
(:mod:`graphbank.tagsets`), a line-oriented corpus format
(:mod:`graphbank.corpus`), a per-category statistical function tagger with
reliability filtering (:mod:`graphbank.tagger`), interactive automation
levels (:mod:`graphbank.automation`), deterministic SVG rendering
(:mod:`graphbank.layout`), and an HTTP editing service
(:mod:`graphbank.service`) with a command-line front door
(:mod:`graphbank.cli`).
"""

__version__ = "0.1.0"

from .graph import (  # noqa: F401
    PHRASE_ID_BASE,
    AnnotationGraph,
    PhraseNode,
    PrimaryEdge,
    SecondaryLink,
    Status,
    Token,
    Trace,
    Violation,
    add_comment,
    detach,
    group,
    new_sentence,
    reattach,
    relabel_edge,
    relabel_node,
    set_secondary,
    set_status,
    to_constituency,
    ungroup,
    validate,
)
from .tagsets import (  # noqa: F401
    UNLABELED,
    Tagset,
    TagsetRegistry,
    check_label,
    default_tagsets,
    modify_tagset,
)
