"""Exception types shared across the workbench.

Editing operations raise subclasses of :class:`AnnotationError` for domain
rule violations; plain ``ValueError`` is reserved for API misuse (bad
argument types, empty inputs to pure numeric routines).
"""


class AnnotationError(Exception):
    """Base class for all domain errors."""


# --- graph editing -------------------------------------------------------

class EmptySentence(AnnotationError):
    """A sentence must contain at least one token."""


class TooManyTokens(AnnotationError):
    """Token positions would collide with the phrase-node id space."""


class UnknownNode(AnnotationError):
    """Referenced token position or phrase node does not exist."""


class UnknownLabel(AnnotationError):
    """A label is not a member of the tagset it was checked against."""

    def __init__(self, label: str, tagset_kind: str):
        super().__init__(f"label {label!r} is not in the {tagset_kind} tagset")
        self.label = label
        self.tagset_kind = tagset_kind


class AlreadyAttached(AnnotationError):
    """Child already has a primary parent."""


class StillAttached(AnnotationError):
    """Node has a primary parent; pass force=True to detach it first."""


class DuplicateChild(AnnotationError):
    """The same child id was given more than once."""


class EmptyGroup(AnnotationError):
    """A phrase must be formed over at least one child."""


class WouldCreateCycle(AnnotationError):
    """The requested attachment would make the primary edges cyclic."""


class SelfLink(AnnotationError):
    """A secondary link may not connect a node to itself."""


class DuplicateLink(AnnotationError):
    """The secondary link is already present, or shadows a primary edge."""


class NoSuchLink(AnnotationError):
    """Attempted to remove a secondary link that is not present."""


class GraphNotComplete(AnnotationError):
    """Operation requires a sentence with status=complete."""


class CompletionBlocked(AnnotationError):
    """A sentence cannot be marked complete while violations remain."""

    def __init__(self, violations):
        super().__init__(
            "cannot mark sentence complete: %d violation(s) remain" % len(violations)
        )
        self.violations = list(violations)


# --- tagsets -------------------------------------------------------------

class DuplicateLabel(AnnotationError):
    """Label already present in the tagset."""


class ReservedLabel(AnnotationError):
    """The unlabeled-edge placeholder cannot be a tagset member."""


class LabelInUse(AnnotationError):
    """Label is still used in the corpus; removal requires force."""


# --- corpus I/O ----------------------------------------------------------

class CorpusError(AnnotationError):
    """Corpus violates its structural invariants (not serializable)."""


class ParseError(AnnotationError):
    """Corpus file is malformed; carries a 1-based line number."""

    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


class DanglingParent(ParseError):
    """A row references a parent id that is never declared."""


class DuplicateSentence(ParseError):
    """Two sentences share the same id."""


class SaveConflict(AnnotationError):
    """Another writer holds the lock for this corpus path."""


# --- tagger and service --------------------------------------------------

class NoModel(AnnotationError):
    """No trained tagger model is available."""


class StaleRevision(AnnotationError):
    """Command was based on an outdated sentence revision."""

    def __init__(self, expected: int, got: int):
        super().__init__(f"stale revision: sentence is at {expected}, command based on {got}")
        self.expected = expected
        self.got = got


class UnknownSentence(AnnotationError):
    """No sentence with the given id exists in the corpus."""
