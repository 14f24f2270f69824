"""Variable tagsets for parts of speech, phrase categories, and edge functions.

The three tagsets travel with the corpus and back every label check in the
editor.  They are deliberately small: annotation projects extend them via
:func:`modify_tagset` rather than editing source.  Category labels support a
coordination convention: ``"C" + base`` is accepted whenever ``base`` is a
member of the node tagset, so coordinated phrases (CVP, CNP, CS, ...) do not
need their own entries.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import DuplicateLabel, LabelInUse, ReservedLabel, UnknownLabel

#: Placeholder function label carried by edges that have not been labeled yet.
#: Reserved: it can never be a tagset member.
UNLABELED = "--"

KINDS = ("pos", "node", "edge")


@dataclass(frozen=True)
class Tagset:
    """One immutable tagset version.

    ``entries`` preserve insertion order because the corpus format writes
    them verbatim; ``version`` increases by one on every modification.
    """

    kind: str  # "pos" | "node" | "edge"
    entries: tuple[tuple[str, str], ...]  # (label, description)
    version: int = 1

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown tagset kind {self.kind!r}")
        seen = set()
        for label, description in self.entries:
            if label == UNLABELED:
                raise ReservedLabel(f"{UNLABELED!r} is reserved and cannot be a member")
            if not label or any(c.isspace() for c in label):
                raise ValueError(f"bad label {label!r}: empty or contains whitespace")
            if "\t" in description or "\n" in description:
                raise ValueError(f"description for {label!r} contains tab or newline")
            if label in seen:
                raise DuplicateLabel(f"label {label!r} occurs twice in {self.kind} tagset")
            seen.add(label)

    @property
    def labels(self) -> frozenset[str]:
        return frozenset(label for label, _ in self.entries)

    def __contains__(self, label: str) -> bool:
        return label in self.labels


@dataclass(frozen=True)
class LabelCheck:
    """Outcome of :func:`check_label`.

    ``status`` is one of ``"valid"``, ``"valid-coordination"``, ``"invalid"``;
    ``base`` carries the uncoordinated category for the coordination case.
    """

    status: str
    base: str | None = None

    @property
    def ok(self) -> bool:
        return self.status != "invalid"


VALID = LabelCheck("valid")
INVALID = LabelCheck("invalid")


def check_label(tagset: Tagset, label: str) -> LabelCheck:
    """Pure, total membership test with the coordination prefix rule.

    Node tagsets additionally accept ``"C" + base`` when ``base`` is a
    member; pos and edge tagsets require exact membership.
    """
    if label in tagset:
        return VALID
    if tagset.kind == "node" and len(label) > 1 and label[0] == "C" and label[1:] in tagset:
        return LabelCheck("valid-coordination", base=label[1:])
    return INVALID


def is_coordination_category(tagset: Tagset, label: str) -> bool:
    """True for any C-prefixed category over a known base, even if the full
    label was also added verbatim."""
    return len(label) > 1 and label[0] == "C" and label[1:] in tagset


@dataclass
class TagsetRegistry:
    """The three tagsets of a corpus plus a modification journal.

    The journal records ``(kind, version, action, label)`` for auditability;
    it is operational metadata and excluded from equality so that a registry
    round-trips through the corpus format.
    """

    pos: Tagset
    node: Tagset
    edge: Tagset
    journal: list[tuple[str, int, str, str]] = field(default_factory=list, compare=False)

    def get(self, kind: str) -> Tagset:
        if kind not in KINDS:
            raise ValueError(f"unknown tagset kind {kind!r}")
        return getattr(self, kind)

    def _set(self, kind: str, tagset: Tagset) -> None:
        setattr(self, kind, tagset)


_DEFAULT_POS = (
    ("ADJA", "attributive adjective"),
    ("ADJD", "adverbial or predicative adjective"),
    ("ADV", "adverb"),
    ("APPR", "preposition"),
    ("ART", "article"),
    ("CARD", "cardinal number"),
    ("KON", "coordinating conjunction"),
    ("KOUS", "subordinating conjunction"),
    ("NE", "proper noun"),
    ("NN", "common noun"),
    ("PPER", "personal pronoun"),
    ("PRELS", "relative pronoun"),
    ("PRF", "reflexive pronoun"),
    ("PROAV", "pronominal adverb"),
    ("PTKVZ", "separated verb prefix"),
    ("PTKZU", "infinitival particle"),
    ("VAFIN", "finite auxiliary"),
    ("VAINF", "auxiliary infinitive"),
    ("VMFIN", "finite modal"),
    ("VVFIN", "finite full verb"),
    ("VVINF", "full verb infinitive"),
    ("VVPP", "past participle"),
    ("$,", "comma"),
    ("$.", "sentence-final punctuation"),
    ("$(", "other punctuation"),
)

_DEFAULT_NODE = (
    ("S", "sentence or clause"),
    ("NP", "noun phrase"),
    ("AP", "adjective phrase"),
    ("VP", "verb phrase"),
)

_DEFAULT_EDGE = (
    ("SB", "subject"),
    ("MO", "modifier"),
    ("HD", "head"),
    ("PD", "predicate"),
    ("CP", "complementizer"),
    ("OA", "accusative object"),
    ("OC", "clausal complement"),
    ("DA", "dative object"),
    ("GL", "prenominal genitive"),
    ("GR", "postnominal genitive"),
    ("RC", "relative clause"),
    ("NK", "noun kernel element"),
    ("PM", "morphological particle"),
    ("SVP", "separable verb prefix"),
    ("CJ", "conjunct"),
    ("CD", "coordinating conjunction"),
)


def default_tagsets() -> TagsetRegistry:
    """Registry seeded with the stock inventories.

    The node and edge sets ship only the core documented labels; real
    projects are expected to grow them with :func:`modify_tagset` (the full
    production function inventory is considerably larger than the stock
    one).  The pos set is a compact STTS-style starter.
    """
    return TagsetRegistry(
        pos=Tagset("pos", _DEFAULT_POS),
        node=Tagset("node", _DEFAULT_NODE),
        edge=Tagset("edge", _DEFAULT_EDGE),
    )


def modify_tagset(
    registry: TagsetRegistry,
    kind: str,
    action: str,
    label: str,
    description: str = "",
    in_use=None,
    force: bool = False,
) -> int:
    """Add or remove a label; returns the new tagset version.

    ``in_use`` is an optional callable ``label -> bool`` consulted before a
    removal (typically backed by a corpus scan); removing a label it reports
    as used requires ``force=True``.
    """
    tagset = registry.get(kind)
    if action == "add":
        if label == UNLABELED:
            raise ReservedLabel(f"{UNLABELED!r} is reserved")
        if label in tagset:
            raise DuplicateLabel(f"label {label!r} already in {kind} tagset")
        entries = tagset.entries + ((label, description),)
    elif action == "remove":
        if label not in tagset:
            raise UnknownLabel(label, kind)
        if in_use is not None and in_use(label) and not force:
            raise LabelInUse(f"label {label!r} is still used in the corpus")
        entries = tuple(e for e in tagset.entries if e[0] != label)
    else:
        raise ValueError(f"action must be 'add' or 'remove', got {action!r}")

    new_version = tagset.version + 1
    registry._set(kind, Tagset(kind, entries, new_version))
    registry.journal.append((kind, new_version, action, label))
    return new_version
