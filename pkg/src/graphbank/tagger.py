"""Statistical assignment of grammatical-function labels.

For a phrase of category Q with children whose types are T_1..T_k (pos
tags for token children, categories for phrase children), the model scores
a function assignment G_1..G_k by

    product over i of  P_Q(T_i | T_{i-1}, T_{i-2}) * P_Q(G_i | T_i)

with all probabilities estimated separately per category Q.  The lexical
term uses additive smoothing over the functions seen under Q; the
contextual term is a deleted-interpolation trigram over child types with a
boundary symbol padding the left edge.

Because the contextual factor does not depend on G, the argmax of the
product decomposes into independent per-position decisions; that is the
default ``paper`` decoding variant.  The opt-in ``hmm`` variant instead
runs a trigram Viterbi *over the functions* with P_Q(T_i|G_i) emissions,
which makes the context genuinely sequential.  Both variants report, per
position, the best label, the strongest competitor, and a reliability flag:
an assignment is reliable when the competitor-to-best score quotient stays
under the model threshold, so unreliable ones can be routed to a human.

Training, threshold calibration against a target reliable fraction, and a
repeated-random-split evaluation protocol live here as well.
"""

from __future__ import annotations

import json
import math
import random
import warnings
from collections import Counter
from dataclasses import dataclass, field, replace

from . import errors
from .graph import AnnotationGraph, Status
from .tagsets import UNLABELED

#: Pseudo-type padding the left context of every child sequence.
BOUNDARY = "<B>"

DEFAULT_DELTA = 0.5
DEFAULT_THRESHOLD = 0.1
MODEL_FORMAT = 1

VARIANTS = ("paper", "hmm")


@dataclass(frozen=True)
class PhraseInstance:
    """One phrase occurrence: parent category plus (type, function) children
    in surface order."""

    category: str
    children: tuple[tuple[str, str], ...]

    def __post_init__(self):
        if not self.children:
            raise ValueError("a phrase instance needs at least one child")

    @property
    def k(self) -> int:
        return len(self.children)

    def tags(self) -> tuple[str, ...]:
        return tuple(t for t, _ in self.children)

    def functions(self) -> tuple[str, ...]:
        return tuple(g for _, g in self.children)


@dataclass(frozen=True)
class Smoothing:
    """Estimation knobs: additive ``delta`` for the lexical model, optional
    fixed interpolation weights (unigram, bigram, trigram) for the two
    contextual models; ``None`` means fit them by deleted interpolation."""

    delta: float = DEFAULT_DELTA
    lambdas: tuple[float, float, float] | None = None
    g_lambdas: tuple[float, float, float] | None = None

    def __post_init__(self):
        if self.delta < 0:
            raise ValueError(f"delta must be non-negative, got {self.delta}")
        for name, lam in (("lambdas", self.lambdas), ("g_lambdas", self.g_lambdas)):
            if lam is not None:
                if len(lam) != 3 or any(l < 0 for l in lam):
                    raise ValueError(f"bad {name} {lam!r}")
                if abs(sum(lam) - 1.0) > 1e-9:
                    raise ValueError(f"{name} must sum to 1, got {lam!r}")


class CategoryTable:
    """Count tables for one category; everything derives from the raw
    lexical pair counts and the two trigram event maps."""

    def __init__(
        self,
        lexical: dict[tuple[str, str], int],
        t_trigrams: dict[tuple[str, str, str], int],
        g_trigrams: dict[tuple[str, str, str], int],
    ):
        self.lexical = dict(lexical)
        self.t_trigrams = dict(t_trigrams)
        self.g_trigrams = dict(g_trigrams)

        self.tag_totals: dict[str, int] = {}
        self.function_totals: dict[str, int] = {}
        for (t, g), c in self.lexical.items():
            self.tag_totals[t] = self.tag_totals.get(t, 0) + c
            self.function_totals[g] = self.function_totals.get(g, 0) + c
        self.tags: tuple[str, ...] = tuple(sorted(self.tag_totals))
        self.functions: tuple[str, ...] = tuple(sorted(self.function_totals))

        def derive(trigrams):
            tri_ctx: dict[tuple[str, str], int] = {}
            bigrams: dict[tuple[str, str], int] = {}
            bi_ctx: dict[str, int] = {}
            unigrams: dict[str, int] = {}
            for (a2, a1, a), c in trigrams.items():
                tri_ctx[(a2, a1)] = tri_ctx.get((a2, a1), 0) + c
                bigrams[(a1, a)] = bigrams.get((a1, a), 0) + c
                bi_ctx[a1] = bi_ctx.get(a1, 0) + c
                unigrams[a] = unigrams.get(a, 0) + c
            return tri_ctx, bigrams, bi_ctx, unigrams, sum(unigrams.values())

        (self.t_tri_ctx, self.t_bigrams, self.t_bi_ctx,
         self.t_unigrams, self.t_total) = derive(self.t_trigrams)
        (self.g_tri_ctx, self.g_bigrams, self.g_bi_ctx,
         self.g_unigrams, self.g_total) = derive(self.g_trigrams)

    def __eq__(self, other):
        return (
            isinstance(other, CategoryTable)
            and self.lexical == other.lexical
            and self.t_trigrams == other.t_trigrams
            and self.g_trigrams == other.g_trigrams
        )


@dataclass(frozen=True)
class TaggerModel:
    """Trained model: per-category tables plus shared smoothing state.
    Immutable; decoding never mutates it."""

    categories: dict[str, CategoryTable]
    delta: float = DEFAULT_DELTA
    lambdas: tuple[float, float, float] = (1 / 3, 1 / 3, 1 / 3)
    g_lambdas: tuple[float, float, float] = (1 / 3, 1 / 3, 1 / 3)
    threshold: float = DEFAULT_THRESHOLD

    # -- probabilities ----------------------------------------------------

    def lexical_prob(self, category: str, function: str, tag: str) -> float:
        """P_Q(G|T) with additive smoothing over the functions seen under Q."""
        table = self.categories[category]
        n_pair = table.lexical.get((tag, function), 0)
        n_tag = table.tag_totals.get(tag, 0)
        denom = n_tag + self.delta * len(table.functions)
        if denom == 0:
            return 0.0
        return (n_pair + self.delta) / denom

    def contextual_prob(self, category: str, tag: str, prev: str, prev2: str) -> float:
        """P_Q(T_i | T_{i-1}=prev, T_{i-2}=prev2), interpolated."""
        table = self.categories[category]
        return _interpolated(
            table.t_trigrams, table.t_tri_ctx, table.t_bigrams,
            table.t_bi_ctx, table.t_unigrams, table.t_total,
            self.lambdas, tag, prev, prev2,
        )

    def transition_prob(self, category: str, function: str, prev: str, prev2: str) -> float:
        """P_Q(G_i | G_{i-1}, G_{i-2}) for the hmm variant."""
        table = self.categories[category]
        return _interpolated(
            table.g_trigrams, table.g_tri_ctx, table.g_bigrams,
            table.g_bi_ctx, table.g_unigrams, table.g_total,
            self.g_lambdas, function, prev, prev2,
        )

    def emission_prob(self, category: str, tag: str, function: str) -> float:
        """P_Q(T|G) for the hmm variant, additive smoothing over child types."""
        table = self.categories[category]
        if tag not in table.tag_totals:
            # novel child type: flat emission, decided upstream to be unreliable
            return 1.0 / len(table.tags) if table.tags else 0.0
        n_pair = table.lexical.get((tag, function), 0)
        n_fn = table.function_totals.get(function, 0)
        denom = n_fn + self.delta * len(table.tags)
        if denom == 0:
            return 0.0
        return (n_pair + self.delta) / denom


def _interpolated(trigrams, tri_ctx, bigrams, bi_ctx, unigrams, total,
                  lambdas, item, prev, prev2) -> float:
    l1, l2, l3 = lambdas
    p = 0.0
    if total:
        p += l1 * unigrams.get(item, 0) / total
    ctx = bi_ctx.get(prev, 0)
    if ctx:
        p += l2 * bigrams.get((prev, item), 0) / ctx
    ctx = tri_ctx.get((prev2, prev), 0)
    if ctx:
        p += l3 * trigrams.get((prev2, prev, item), 0) / ctx
    return p


# --- training ------------------------------------------------------------

def extract_instances(corpus) -> list[PhraseInstance]:
    """One instance per phrase node of every complete sentence, children in
    surface order; incomplete sentences are skipped."""
    complete = [s for s in corpus.sentences if s.status is Status.COMPLETE]
    return instances_from_graphs(complete)


def instances_from_graphs(graphs: list[AnnotationGraph]) -> list[PhraseInstance]:
    out: list[PhraseInstance] = []
    for graph in graphs:
        for node_id in sorted(graph.phrase_nodes):
            children = []
            for child in graph.children_of(node_id):
                if graph.is_token(child):
                    child_type = graph.token(child).pos_tag
                else:
                    child_type = graph.phrase_nodes[child].category
                children.append((child_type, graph.incoming[child].function))
            out.append(
                PhraseInstance(
                    category=graph.phrase_nodes[node_id].category,
                    children=tuple(children),
                )
            )
    return out


def train(instances: list[PhraseInstance], smoothing: Smoothing | None = None) -> TaggerModel:
    """Accumulate counts per category and fit interpolation weights.

    Counts are order-free, so the model is independent of instance order.
    Interpolation weights are fit once, pooled over all categories, by
    deleted interpolation; pass explicit ``Smoothing.lambdas`` to override.
    """
    if not instances:
        raise ValueError("cannot train on an empty instance list")
    smoothing = smoothing or Smoothing()

    lexical: dict[str, dict] = {}
    t_tri: dict[str, dict] = {}
    g_tri: dict[str, dict] = {}
    for inst in instances:
        if inst.category == BOUNDARY or any(
            BOUNDARY in (t, g) for t, g in inst.children
        ):
            raise ValueError(f"label collides with boundary symbol {BOUNDARY!r}")
        lex = lexical.setdefault(inst.category, {})
        for t, g in inst.children:
            lex[(t, g)] = lex.get((t, g), 0) + 1
        for table, seq in (
            (t_tri.setdefault(inst.category, {}), inst.tags()),
            (g_tri.setdefault(inst.category, {}), inst.functions()),
        ):
            padded = (BOUNDARY, BOUNDARY) + seq
            for i in range(2, len(padded)):
                key = (padded[i - 2], padded[i - 1], padded[i])
                table[key] = table.get(key, 0) + 1

    tables = {
        q: CategoryTable(lexical[q], t_tri[q], g_tri[q]) for q in lexical
    }
    ordered = [tables[q] for q in sorted(tables)]
    lambdas = smoothing.lambdas or _fit_lambdas(
        [(t.t_trigrams, t.t_tri_ctx, t.t_bigrams, t.t_bi_ctx, t.t_unigrams, t.t_total)
         for t in ordered]
    )
    g_lambdas = smoothing.g_lambdas or _fit_lambdas(
        [(t.g_trigrams, t.g_tri_ctx, t.g_bigrams, t.g_bi_ctx, t.g_unigrams, t.g_total)
         for t in ordered]
    )
    return TaggerModel(
        categories=tables,
        delta=smoothing.delta,
        lambdas=lambdas,
        g_lambdas=g_lambdas,
    )


def _fit_lambdas(count_sets) -> tuple[float, float, float]:
    """Deleted interpolation: each trigram event votes, with its count, for
    the order whose leave-one-out relative frequency is highest.  Ties split
    the vote evenly.  Votes pool over categories; per-category sparsity is
    too severe to fit three weights from one table."""
    acc = [0.0, 0.0, 0.0]
    for trigrams, tri_ctx, bigrams, bi_ctx, unigrams, total in count_sets:
        # sorted: float accumulation must not depend on insertion order
        for (a2, a1, a), c in sorted(trigrams.items()):
            ctx3 = tri_ctx[(a2, a1)]
            d3 = (c - 1) / (ctx3 - 1) if ctx3 > 1 else 0.0
            ctx2 = bi_ctx[a1]
            d2 = (bigrams[(a1, a)] - 1) / (ctx2 - 1) if ctx2 > 1 else 0.0
            d1 = (unigrams[a] - 1) / (total - 1) if total > 1 else 0.0
            top = max(d1, d2, d3)
            winners = [i for i, d in enumerate((d1, d2, d3)) if d == top]
            for i in winners:
                acc[i] += c / len(winners)
    s = sum(acc)
    if s == 0:
        return (1 / 3, 1 / 3, 1 / 3)
    return (acc[0] / s, acc[1] / s, acc[2] / s)


# --- decoding ------------------------------------------------------------

@dataclass(frozen=True)
class Suggestion:
    """Decoded label for one child position (1-based), with the strongest
    competitor and the reliability verdict.  ``forced`` marks positions that
    are unreliable regardless of the threshold (novel input)."""

    position: int
    best: tuple[str, float]
    competitor: tuple[str, float] | None
    reliable: bool
    forced: bool = False

    @property
    def quotient(self) -> float | None:
        if self.competitor is None:
            return None
        return self.competitor[1] / self.best[1]


@dataclass(frozen=True)
class FunctionDecoding:
    suggestions: tuple[Suggestion, ...]
    unknown_category: bool = False

    def labels(self) -> tuple[str, ...]:
        return tuple(s.best[0] for s in self.suggestions)


def decode_functions(
    model: TaggerModel, category: str, tags, variant: str = "paper"
) -> FunctionDecoding:
    """Label the children T_1..T_k of a phrase of the given category.

    ``paper`` scores each position by the contextual-times-lexical product
    term and decides positions independently (the joint argmax decomposes).
    ``hmm`` decodes jointly by Viterbi over function trigrams; its
    competitor at position i is the best path forbidden to use the chosen
    label there.  A category never seen in training yields all-unlabeled,
    unreliable output with ``unknown_category`` set.
    """
    tags = tuple(tags)
    if not tags:
        raise ValueError("cannot decode an empty child sequence")
    if variant not in VARIANTS:
        raise ValueError(f"unknown variant {variant!r}")
    if category not in model.categories:
        suggestions = tuple(
            Suggestion(i + 1, (UNLABELED, 0.0), None, reliable=False, forced=True)
            for i in range(len(tags))
        )
        return FunctionDecoding(suggestions, unknown_category=True)
    if variant == "paper":
        return _decode_paper(model, category, tags)
    return _decode_hmm(model, category, tags)


def _context_factor(model: TaggerModel, category: str, tags, i: int) -> float:
    """Contextual term for position i, guaranteed positive for known tags.

    With fitted weights the interpolated probability can only vanish when
    the unigram weight is zero; fall back to the raw unigram frequency then,
    which rescales all of the position's scores equally and cannot change
    the decision."""
    prev = tags[i - 1] if i >= 1 else BOUNDARY
    prev2 = tags[i - 2] if i >= 2 else BOUNDARY
    p = model.contextual_prob(category, tags[i], prev, prev2)
    if p > 0.0:
        return p
    table = model.categories[category]
    if table.t_total:
        return table.t_unigrams.get(tags[i], 0) / table.t_total
    return 0.0


def _decode_paper(model: TaggerModel, category: str, tags) -> FunctionDecoding:
    table = model.categories[category]
    suggestions = []
    for i, tag in enumerate(tags):
        if tag not in table.tag_totals:
            flat = 1.0 / len(table.functions)
            best = (table.functions[0], flat)
            competitor = (table.functions[1], flat) if len(table.functions) > 1 else None
            suggestions.append(
                Suggestion(i + 1, best, competitor, reliable=False, forced=True)
            )
            continue
        ctx = _context_factor(model, category, tags, i)
        scored = sorted(
            ((ctx * model.lexical_prob(category, g, tag), g) for g in table.functions),
            key=lambda sg: (-sg[0], sg[1]),
        )
        scored = [(s, g) for s, g in scored if s > 0.0]
        if not scored:
            # only reachable with delta=0 on degenerate tables
            flat = 1.0 / len(table.functions)
            suggestions.append(
                Suggestion(i + 1, (table.functions[0], flat), None,
                           reliable=False, forced=True)
            )
            continue
        best = (scored[0][1], scored[0][0])
        competitor = (scored[1][1], scored[1][0]) if len(scored) > 1 else None
        reliable = competitor is None or competitor[1] / best[1] <= model.threshold
        suggestions.append(Suggestion(i + 1, best, competitor, reliable))
    return FunctionDecoding(tuple(suggestions))


def _decode_hmm(model: TaggerModel, category: str, tags) -> FunctionDecoding:
    table = model.categories[category]
    best_score, best_path = _viterbi(model, category, tags, banned=None)
    suggestions = []
    for i, tag in enumerate(tags):
        forced = tag not in table.tag_totals
        if len(table.functions) < 2:
            suggestions.append(
                Suggestion(i + 1, (best_path[i], best_score), None,
                           reliable=not forced, forced=forced)
            )
            continue
        alt_score, alt_path = _viterbi(model, category, tags, banned=(i, best_path[i]))
        if alt_score <= 0.0:
            competitor = None
            reliable = not forced
        else:
            competitor = (alt_path[i], alt_score)
            reliable = not forced and alt_score / best_score <= model.threshold
        suggestions.append(
            Suggestion(i + 1, (best_path[i], best_score), competitor, reliable, forced)
        )
    return FunctionDecoding(tuple(suggestions))


def _viterbi(model: TaggerModel, category: str, tags, banned):
    """Trigram Viterbi over functions; exact lexicographic-first tie-break.

    Each cell keys on the last two labels and stores (score, prefix); on a
    score tie the lexicographically smaller prefix wins, which matches a
    first-hit argmax over all label sequences enumerated in sorted order.
    ``banned`` = (position, label) excludes one label at one position.
    """
    functions = model.categories[category].functions

    def allowed(i):
        if banned is not None and banned[0] == i:
            return [g for g in functions if g != banned[1]]
        return list(functions)

    cells: dict[tuple[str, str], tuple[float, tuple[str, ...]]] = {}
    for g in allowed(0):
        s = (1.0 * model.transition_prob(category, g, BOUNDARY, BOUNDARY))
        s = s * model.emission_prob(category, tags[0], g)
        cells[(BOUNDARY, g)] = (s, (g,))
    for i in range(1, len(tags)):
        new: dict[tuple[str, str], tuple[float, tuple[str, ...]]] = {}
        for key in sorted(cells):
            prev2, prev = key
            score, prefix = cells[key]
            for g in allowed(i):
                s = (score * model.transition_prob(category, g, prev, prev2))
                s = s * model.emission_prob(category, tags[i], g)
                candidate = (s, prefix + (g,))
                incumbent = new.get((prev, g))
                if (
                    incumbent is None
                    or s > incumbent[0]
                    or (s == incumbent[0] and candidate[1] < incumbent[1])
                ):
                    new[(prev, g)] = candidate
        cells = new
    if not cells:
        return 0.0, tuple()
    best_score = max(s for s, _ in cells.values())
    best_path = min(p for s, p in cells.values() if s == best_score)
    return best_score, best_path


def decode_category(
    model: TaggerModel, tags, variant: str = "paper"
) -> tuple[str, FunctionDecoding]:
    """Choose the best category for an unlabeled child sequence, then label
    it.  Categories are scored by the same product objective with the
    lexical term maximized over functions; here the contextual factor does
    discriminate, because it differs per category.  A category that has
    never seen one of the child types scores zero for that sequence."""
    if not model.categories:
        raise errors.NoModel("no trained categories")
    tags = tuple(tags)
    if not tags:
        raise ValueError("cannot decode an empty child sequence")
    best_q = None
    best_score = -1.0
    for q in sorted(model.categories):
        table = model.categories[q]
        score = 1.0
        for i, tag in enumerate(tags):
            if tag not in table.tag_totals:
                score = 0.0
                break
            ctx = _context_factor(model, q, tags, i)
            score = (score * ctx) * max(
                model.lexical_prob(q, g, tag) for g in table.functions
            )
        if score > best_score:
            best_q, best_score = q, score
    return best_q, decode_functions(model, best_q, tags, variant)


# --- threshold calibration -----------------------------------------------

def calibrate_threshold(
    model: TaggerModel,
    heldout: list[PhraseInstance],
    target: float,
    variant: str = "paper",
) -> tuple[float, TaggerModel]:
    """Pick the threshold whose held-out reliable fraction is the largest
    value not exceeding ``target``; returns it plus a model copy carrying it.

    The reliable fraction is a step function of the threshold: positions
    without a competitor are reliable at any threshold, forced-unreliable
    positions at none, and the rest flip exactly at their quotient.  When
    no step lands at or below the target (degenerate held-out data), the
    threshold defaults to 1.0 with a warning.
    """
    if not heldout:
        raise ValueError("cannot calibrate on an empty held-out set")
    if not 0.0 < target < 1.0:
        raise ValueError(f"target must be in (0, 1), got {target}")
    always = 0
    quotients: list[float] = []
    for inst in heldout:
        decoding = decode_functions(model, inst.category, inst.tags(), variant)
        for s in decoding.suggestions:
            if s.forced:
                quotients.append(math.inf)
            elif s.competitor is None:
                always += 1
            else:
                quotients.append(s.competitor[1] / s.best[1])
    total = always + len(quotients)
    best_theta = None
    best_fraction = -1.0
    for q in sorted(set(q for q in quotients if math.isfinite(q))):
        fraction = (always + sum(1 for x in quotients if x <= q)) / total
        if best_fraction < fraction <= target:
            best_theta, best_fraction = q, fraction
    if best_theta is None:
        warnings.warn(
            "no threshold reaches the target reliable fraction; defaulting to 1.0",
            RuntimeWarning,
            stacklevel=2,
        )
        best_theta = 1.0
    return best_theta, replace(model, threshold=best_theta)


# --- evaluation ----------------------------------------------------------

@dataclass(frozen=True)
class RepetitionResult:
    """Counts for one train/test split; the metrics derive from them."""

    repetition: int
    train_sentences: int
    test_sentences: int
    positions: int
    reliable: int
    reliable_correct: int
    unreliable_correct: int

    @property
    def unreliable(self) -> int:
        return self.positions - self.reliable

    @property
    def fraction_reliable(self) -> float:
        return self.reliable / self.positions if self.positions else 0.0

    @property
    def acc_reliable(self) -> float:
        return self.reliable_correct / self.reliable if self.reliable else 0.0

    @property
    def acc_unreliable(self) -> float:
        return self.unreliable_correct / self.unreliable if self.unreliable else 0.0

    @property
    def acc_overall(self) -> float:
        if not self.positions:
            return 0.0
        return (self.reliable_correct + self.unreliable_correct) / self.positions


@dataclass(frozen=True)
class EvalReport:
    repetitions: int
    train_fraction: float
    seed: int
    variant: str
    theta: float
    rows: tuple[RepetitionResult, ...]
    confusion: tuple[tuple[tuple[str, str], int], ...]

    def _mean(self, attribute: str) -> float:
        return sum(getattr(r, attribute) for r in self.rows) / len(self.rows)

    @property
    def fraction_reliable(self) -> float:
        return self._mean("fraction_reliable")

    @property
    def acc_reliable(self) -> float:
        return self._mean("acc_reliable")

    @property
    def acc_unreliable(self) -> float:
        return self._mean("acc_unreliable")

    @property
    def acc_overall(self) -> float:
        return self._mean("acc_overall")

    def summary(self) -> str:
        return (
            f"reliable fraction {self.fraction_reliable:.4f}  "
            f"reliable acc {self.acc_reliable:.4f}  "
            f"unreliable acc {self.acc_unreliable:.4f}  "
            f"overall acc {self.acc_overall:.4f}"
        )

    def table(self) -> str:
        """Machine-readable tabular text: one row per repetition plus an
        aggregate row, tab-separated."""
        lines = [
            "rep\ttrain\ttest\tpositions\treliable\treliable_correct"
            "\tunreliable_correct\tfrac_rel\tacc_rel\tacc_unrel\tacc_overall"
        ]
        for r in self.rows:
            lines.append(
                f"{r.repetition}\t{r.train_sentences}\t{r.test_sentences}"
                f"\t{r.positions}\t{r.reliable}\t{r.reliable_correct}"
                f"\t{r.unreliable_correct}\t{r.fraction_reliable:.6f}"
                f"\t{r.acc_reliable:.6f}\t{r.acc_unreliable:.6f}"
                f"\t{r.acc_overall:.6f}"
            )
        lines.append(
            f"mean\t\t\t\t\t\t\t{self.fraction_reliable:.6f}"
            f"\t{self.acc_reliable:.6f}\t{self.acc_unreliable:.6f}"
            f"\t{self.acc_overall:.6f}"
        )
        return "\n".join(lines) + "\n"


def evaluate(
    corpus,
    repetitions: int = 10,
    train_fraction: float = 0.9,
    seed: int = 0,
    smoothing: Smoothing | None = None,
    theta: float | None = None,
    variant: str = "paper",
) -> EvalReport:
    """Repeated random-split evaluation.

    Each repetition draws a fresh sentence-level partition from one seeded
    generator, trains on the larger side, and decodes every phrase of the
    test side given its true category and child types.  Partitioning at the
    sentence level keeps phrases of one sentence out of both sides at once.
    Same seed, same corpus: identical report.
    """
    if not 0.0 < train_fraction < 1.0:
        raise ValueError(f"train_fraction must be in (0, 1), got {train_fraction}")
    complete = [s for s in corpus.sentences if s.status is Status.COMPLETE]
    if len(complete) < 10:
        raise ValueError(
            f"corpus too small: {len(complete)} complete sentences, need at least 10"
        )
    rng = random.Random(seed)
    n = len(complete)
    n_train = max(1, min(n - 1, round(n * train_fraction)))
    rows = []
    confusion: Counter = Counter()
    for rep in range(repetitions):
        order = list(range(n))
        rng.shuffle(order)
        train_graphs = [complete[i] for i in order[:n_train]]
        test_graphs = [complete[i] for i in order[n_train:]]
        model = train(instances_from_graphs(train_graphs), smoothing)
        if theta is not None:
            model = replace(model, threshold=theta)
        positions = reliable = reliable_correct = unreliable_correct = 0
        for inst in instances_from_graphs(test_graphs):
            decoding = decode_functions(model, inst.category, inst.tags(), variant)
            for s, gold in zip(decoding.suggestions, inst.functions(), strict=True):
                positions += 1
                predicted = s.best[0]
                confusion[(gold, predicted)] += 1
                if s.reliable:
                    reliable += 1
                    reliable_correct += predicted == gold
                else:
                    unreliable_correct += predicted == gold
        rows.append(
            RepetitionResult(
                repetition=rep + 1,
                train_sentences=len(train_graphs),
                test_sentences=len(test_graphs),
                positions=positions,
                reliable=reliable,
                reliable_correct=reliable_correct,
                unreliable_correct=unreliable_correct,
            )
        )
    return EvalReport(
        repetitions=repetitions,
        train_fraction=train_fraction,
        seed=seed,
        variant=variant,
        theta=theta if theta is not None else DEFAULT_THRESHOLD,
        rows=tuple(rows),
        confusion=tuple(sorted(confusion.items())),
    )


# --- model persistence ---------------------------------------------------

def model_to_json(model: TaggerModel) -> str:
    """Versioned, deterministic JSON dump of all counts and parameters."""

    def pack(counts: dict) -> dict:
        out = {}
        for key, c in counts.items():
            for part in key:
                if "\t" in part:
                    raise ValueError(f"label {part!r} contains a tab")
            out["\t".join(key)] = c
        return out

    payload = {
        "format": MODEL_FORMAT,
        "delta": model.delta,
        "lambdas": list(model.lambdas),
        "g_lambdas": list(model.g_lambdas),
        "threshold": model.threshold,
        "categories": {
            q: {
                "lexical": pack(t.lexical),
                "t_trigrams": pack(t.t_trigrams),
                "g_trigrams": pack(t.g_trigrams),
            }
            for q, t in model.categories.items()
        },
    }
    return json.dumps(payload, sort_keys=True, indent=1)


def model_from_json(text: str) -> TaggerModel:
    payload = json.loads(text)
    if payload.get("format") != MODEL_FORMAT:
        raise errors.NoModel(f"unsupported model format {payload.get('format')!r}")

    def unpack(packed: dict, width: int) -> dict:
        out = {}
        for key, c in packed.items():
            parts = tuple(key.split("\t"))
            if len(parts) != width:
                raise errors.NoModel(f"malformed model key {key!r}")
            out[parts] = c
        return out

    categories = {
        q: CategoryTable(
            lexical=unpack(t["lexical"], 2),
            t_trigrams=unpack(t["t_trigrams"], 3),
            g_trigrams=unpack(t["g_trigrams"], 3),
        )
        for q, t in payload["categories"].items()
    }
    return TaggerModel(
        categories=categories,
        delta=payload["delta"],
        lambdas=tuple(payload["lambdas"]),
        g_lambdas=tuple(payload["g_lambdas"]),
        threshold=payload["threshold"],
    )


def save_model(model: TaggerModel, path: str) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        handle.write(model_to_json(model))


def load_model(path: str) -> TaggerModel:
    with open(path, encoding="utf-8") as handle:
        return model_from_json(handle.read())
