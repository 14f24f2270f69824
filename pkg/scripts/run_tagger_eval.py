"""Measure the function tagger against a known optimum.

Generates a corpus from the built-in template grammar, runs the repeated
random-split evaluation, and prints the headline numbers next to the
analytically best achievable accuracy for that grammar.  With enough data
the overall accuracy should sit within a couple of points of the optimum.

Example:
    python3 scripts/run_tagger_eval.py --sentences 2400 --repetitions 5
"""

from __future__ import annotations

import argparse

from graphbank.synthetic import bayes_accuracy, generate_corpus
from graphbank.tagger import evaluate


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sentences", type=int, default=2400)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--repetitions", type=int, default=5)
    ap.add_argument("--train-fraction", type=float, default=0.9)
    ap.add_argument("--theta", type=float, default=None)
    ap.add_argument("--variant", choices=("paper", "hmm"), default="paper")
    args = ap.parse_args()

    corpus = generate_corpus(args.sentences, seed=args.seed)
    report = evaluate(
        corpus,
        repetitions=args.repetitions,
        train_fraction=args.train_fraction,
        seed=args.seed,
        theta=args.theta,
        variant=args.variant,
    )
    print(report.table(), end="")
    print(report.summary())
    optimum = bayes_accuracy()
    print(f"analytic optimum {optimum:.4f}")
    print(f"gap to optimum   {optimum - report.acc_overall:+.4f}")


if __name__ == "__main__":
    main()
