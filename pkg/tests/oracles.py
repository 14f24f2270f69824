"""Independent reference implementations used to cross-check the decoders.

The enumeration oracles walk every label sequence in lexicographic order and
keep the first strict maximum, multiplying factors in exactly the same order
as the production code so that scores compare bitwise, not just
approximately.  Nothing here imports decoding internals.
"""

import itertools
from dataclasses import replace

from graphbank.tagger import BOUNDARY, PhraseInstance, Smoothing, train


def _labels(prefix, n):
    return tuple(f"{prefix}{i}" for i in range(n))


def _draw_lambdas(rng):
    raw = [rng.randint(1, 10) for _ in range(3)]
    s = sum(raw)
    return (raw[0] / s, raw[1] / s, raw[2] / s)


def random_trained_model(rng, max_functions=8):
    """Train a model on randomly drawn instances; random smoothing knobs."""
    tags = _labels("T", rng.randint(1, 5))
    functions = _labels("G", rng.randint(1, max_functions))
    categories = _labels("Q", rng.randint(1, 3))
    instances = []
    for _ in range(rng.randint(3, 30)):
        instances.append(
            PhraseInstance(
                rng.choice(categories),
                tuple(
                    (rng.choice(tags), rng.choice(functions))
                    for _ in range(rng.randint(1, 6))
                ),
            )
        )
    if rng.random() < 0.5:
        smoothing = Smoothing(
            delta=rng.choice([0.0, 0.1, 0.5, 1.0]),
            lambdas=_draw_lambdas(rng),
            g_lambdas=_draw_lambdas(rng),
        )
    else:
        smoothing = Smoothing(delta=rng.choice([0.0, 0.1, 0.5, 1.0]))
    return replace(train(instances, smoothing), threshold=rng.random())


def random_decode_case(rng, max_sequences=2048):
    """(model, category, tags) with the enumeration size kept tractable:
    tags are drawn from the category's seen inventory, k <= 6, |G| <= 8."""
    model = random_trained_model(rng)
    category = rng.choice(sorted(model.categories))
    table = model.categories[category]
    n_fn = len(table.functions)
    k_max = 1
    while k_max < 6 and n_fn ** (k_max + 1) <= max_sequences:
        k_max += 1
    k = rng.randint(1, k_max)
    tags = tuple(rng.choice(table.tags) for _ in range(k))
    return model, category, tags


def context_factor(model, category, tags, i):
    """Contextual term with the same positive-fallback rule the decoders
    apply (an all-zero interpolation falls back to the raw unigram)."""
    prev = tags[i - 1] if i >= 1 else BOUNDARY
    prev2 = tags[i - 2] if i >= 2 else BOUNDARY
    p = model.contextual_prob(category, tags[i], prev, prev2)
    if p > 0.0:
        return p
    table = model.categories[category]
    if table.t_total:
        return table.t_unigrams.get(tags[i], 0) / table.t_total
    return 0.0


def position_scores(model, category, tags, i):
    """Per-position candidate list [(score, function)], positives only,
    best first, ties by label."""
    table = model.categories[category]
    ctx = context_factor(model, category, tags, i)
    scored = sorted(
        (
            (ctx * model.lexical_prob(category, g, tags[i]), g)
            for g in table.functions
        ),
        key=lambda sg: (-sg[0], sg[1]),
    )
    return [(s, g) for s, g in scored if s > 0.0]


def brute_force_paper(model, category, tags):
    """Exhaustive argmax of the product objective; first maximum in
    lexicographic sequence order wins."""
    functions = model.categories[category].functions
    best_score, best_seq = -1.0, None
    for seq in itertools.product(functions, repeat=len(tags)):
        s = 1.0
        for i, g in enumerate(seq):
            s = s * (
                context_factor(model, category, tags, i)
                * model.lexical_prob(category, g, tags[i])
            )
        if s > best_score:
            best_score, best_seq = s, seq
    return best_score, best_seq


def brute_force_hmm(model, category, tags, banned=None):
    """Exhaustive argmax of the joint transition-times-emission objective,
    multiplied left to right exactly like the Viterbi cells."""
    functions = model.categories[category].functions
    best_score, best_seq, found = 0.0, tuple(), False
    for seq in itertools.product(functions, repeat=len(tags)):
        if banned is not None and seq[banned[0]] == banned[1]:
            continue
        s = 1.0
        prev2, prev = BOUNDARY, BOUNDARY
        for tag, g in zip(tags, seq):
            s = s * model.transition_prob(category, g, prev, prev2)
            s = s * model.emission_prob(category, tag, g)
            prev2, prev = prev, g
        if not found or s > best_score:
            best_score, best_seq, found = s, seq, True
    return best_score, best_seq


def reference_lambdas(trigram_tables):
    """Straight-line deleted interpolation over pooled trigram tables, written
    independently of the trainer."""
    votes = [0.0, 0.0, 0.0]
    for trigrams in trigram_tables:
        tri_ctx = {}
        bigrams = {}
        bi_ctx = {}
        unigrams = {}
        for (a2, a1, a), c in trigrams.items():
            tri_ctx[(a2, a1)] = tri_ctx.get((a2, a1), 0) + c
            bigrams[(a1, a)] = bigrams.get((a1, a), 0) + c
            bi_ctx[a1] = bi_ctx.get(a1, 0) + c
            unigrams[a] = unigrams.get(a, 0) + c
        total = sum(unigrams.values())
        for (a2, a1, a), c in trigrams.items():
            ds = [
                (unigrams[a] - 1) / (total - 1) if total > 1 else 0.0,
                (bigrams[(a1, a)] - 1) / (bi_ctx[a1] - 1) if bi_ctx[a1] > 1 else 0.0,
                (c - 1) / (tri_ctx[(a2, a1)] - 1) if tri_ctx[(a2, a1)] > 1 else 0.0,
            ]
            top = max(ds)
            winners = [i for i, d in enumerate(ds) if d == top]
            for i in winners:
                votes[i] += c / len(winners)
    s = sum(votes)
    if s == 0:
        return (1 / 3, 1 / 3, 1 / 3)
    return tuple(v / s for v in votes)
