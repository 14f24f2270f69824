"""Regenerate the golden files under tests/goldens/.

Run after an intentional change to the corpus text format or the SVG
renderer, then review the diff before committing.
"""

from __future__ import annotations

import pathlib

from graphbank.corpus import serialize
from graphbank.layout import render_graph
from graphbank.samples import sample_corpus

GOLDENS = pathlib.Path(__file__).resolve().parent.parent / "tests" / "goldens"


def main() -> None:
    GOLDENS.mkdir(parents=True, exist_ok=True)
    corpus = sample_corpus()
    (GOLDENS / "demo.asc").write_bytes(serialize(corpus).encode("utf-8"))
    for sentence in corpus.sentences:
        path = GOLDENS / f"{sentence.sentence_id}.svg"
        path.write_bytes(render_graph(sentence).encode("utf-8"))
    print(f"wrote {1 + len(corpus.sentences)} files to {GOLDENS}")


if __name__ == "__main__":
    main()
