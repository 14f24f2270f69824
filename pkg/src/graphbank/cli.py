"""Command-line batch entry points.

Everything here is deterministic given its flags: seeds are explicit, no
output depends on the clock, and `import` followed by `export` reproduces
a canonical file byte for byte.
"""

from __future__ import annotations

import random
import sys
from dataclasses import replace

import click

from . import corpus as corpus_io
from . import errors
from .automation import suggest as automation_suggest
from .graph import Status, to_constituency, validate
from .layout import render_graph
from .tagger import (
    Smoothing,
    calibrate_threshold,
    evaluate,
    instances_from_graphs,
    load_model,
    save_model,
    train,
)


def _load(path: str) -> corpus_io.Corpus:
    try:
        return corpus_io.load(path)
    except errors.AnnotationError as exc:
        raise click.ClickException(str(exc)) from exc


@click.group()
def main():
    """Treebank annotation workbench for structures with crossing branches."""


@main.command("import")
@click.argument("source", type=click.Path(exists=True, dir_okay=False))
@click.option("--out", type=click.Path(dir_okay=False), default=None,
              help="Canonical output path (default: rewrite SOURCE in place).")
def import_(source: str, out: str | None):
    """Parse a corpus file, check it, and write it back in canonical form."""
    corpus = _load(source)
    corpus_io.save(corpus, out or source)
    complete = sum(s.status is Status.COMPLETE for s in corpus.sentences)
    click.echo(
        f"imported {len(corpus.sentences)} sentences ({complete} complete) "
        f"from {source}"
    )


@main.command()
@click.argument("source", type=click.Path(exists=True, dir_okay=False))
@click.option("--out", type=click.Path(dir_okay=False), default=None,
              help="Write here instead of stdout.")
def export(source: str, out: str | None):
    """Serialize a corpus file canonically to stdout or --out."""
    text = corpus_io.serialize(_load(source))
    if out:
        with open(out, "w", encoding="utf-8", newline="\n") as handle:
            handle.write(text)
    else:
        click.echo(text, nl=False)


@main.command("validate")
@click.argument("source", type=click.Path(exists=True, dir_okay=False))
def validate_(source: str):
    """Check every sentence; exit nonzero when hard errors exist."""
    corpus = _load(source)
    n_errors = n_warnings = 0
    for sentence in corpus.sentences:
        for violation in validate(sentence, corpus.tagsets):
            if violation.severity == "error":
                n_errors += 1
            else:
                n_warnings += 1
            click.echo(
                f"{sentence.sentence_id}\t{violation.severity}\t"
                f"{violation.rule}\t{violation.message}"
            )
    click.echo(f"{n_errors} errors, {n_warnings} warnings")
    if n_errors:
        sys.exit(1)


@main.command("train")
@click.argument("source", type=click.Path(exists=True, dir_okay=False))
@click.option("--model-out", required=True, type=click.Path(dir_okay=False))
@click.option("--delta", default=0.5, show_default=True,
              help="Additive smoothing for the lexical model.")
@click.option("--theta", default=None, type=float,
              help="Fixed reliability threshold.")
@click.option("--calibrate-target", default=None, type=float,
              help="Pick the threshold hitting this reliable fraction on a held-out slice.")
@click.option("--calibrate-fraction", default=0.1, show_default=True,
              help="Sentence fraction held out for calibration.")
@click.option("--seed", default=0, show_default=True)
def train_(source, model_out, delta, theta, calibrate_target, calibrate_fraction, seed):
    """Train the function tagger on all complete sentences of a corpus."""
    if theta is not None and calibrate_target is not None:
        raise click.ClickException("--theta and --calibrate-target are exclusive")
    corpus = _load(source)
    complete = [s for s in corpus.sentences if s.status is Status.COMPLETE]
    if not complete:
        raise click.ClickException("no complete sentences to train on")
    if calibrate_target is not None:
        rng = random.Random(seed)
        order = list(range(len(complete)))
        rng.shuffle(order)
        n_held = max(1, round(len(complete) * calibrate_fraction))
        if n_held >= len(complete):
            raise click.ClickException("calibration slice leaves no training data")
        held = [complete[i] for i in order[:n_held]]
        rest = [complete[i] for i in order[n_held:]]
        model = train(instances_from_graphs(rest), Smoothing(delta=delta))
        theta, model = calibrate_threshold(
            model, instances_from_graphs(held), calibrate_target
        )
        click.echo(f"calibrated threshold: {theta:.6f}")
    else:
        model = train(instances_from_graphs(complete), Smoothing(delta=delta))
        if theta is not None:
            model = replace(model, threshold=theta)
    save_model(model, model_out)
    click.echo(
        f"trained on {len(complete)} sentences; categories: "
        f"{', '.join(sorted(model.categories))}; threshold {model.threshold}"
    )


@main.command("eval")
@click.argument("source", type=click.Path(exists=True, dir_okay=False))
@click.option("--repetitions", default=10, show_default=True)
@click.option("--train-fraction", default=0.9, show_default=True)
@click.option("--seed", default=0, show_default=True)
@click.option("--theta", default=None, type=float)
@click.option("--variant", default="paper", show_default=True,
              type=click.Choice(["paper", "hmm"]))
@click.option("--report-out", default=None, type=click.Path(dir_okay=False),
              help="Also write the tabular report here.")
def eval_(source, repetitions, train_fraction, seed, theta, variant, report_out):
    """Repeated random-split evaluation; prints per-repetition rows and the
    four headline numbers."""
    corpus = _load(source)
    try:
        report = evaluate(
            corpus,
            repetitions=repetitions,
            train_fraction=train_fraction,
            seed=seed,
            theta=theta,
            variant=variant,
        )
    except ValueError as exc:
        raise click.ClickException(str(exc)) from exc
    click.echo(report.table(), nl=False)
    click.echo(report.summary())
    if report_out:
        with open(report_out, "w", encoding="utf-8", newline="\n") as handle:
            handle.write(report.table())


@main.command("suggest")
@click.argument("source", type=click.Path(exists=True, dir_okay=False))
@click.argument("sentence_id")
@click.option("--model", "model_path", required=True, type=click.Path(exists=True))
@click.option("--level", default=1, show_default=True, type=click.IntRange(0, 3))
@click.option("--children", default=None,
              help="Comma-separated child ids (levels 1 and 2).")
@click.option("--category", default=None, help="Phrase category (level 1).")
@click.option("--variant", default="paper", type=click.Choice(["paper", "hmm"]))
def suggest_(source, sentence_id, model_path, level, children, category, variant):
    """Print tagger proposals for one sentence without changing anything."""
    corpus = _load(source)
    try:
        graph = corpus.sentence(sentence_id)
    except errors.UnknownSentence as exc:
        raise click.ClickException(str(exc)) from exc
    model = load_model(model_path)
    ids = [int(c) for c in children.split(",")] if children else []
    if level == 1:
        selection = (ids, category or "")
    elif level == 2:
        selection = ids
    else:
        selection = None
    try:
        proposals = automation_suggest(graph, model, level, selection, variant=variant)
    except (errors.AnnotationError, ValueError) as exc:
        raise click.ClickException(str(exc)) from exc
    if not proposals:
        click.echo("no proposals")
        return
    for p in proposals:
        click.echo(f"{p.category}\t{','.join(map(str, p.children))}")
        for s in p.suggestions:
            flag = "reliable" if s.reliable else "confirm"
            competitor = s.competitor[0] if s.competitor else "-"
            click.echo(
                f"  {s.position}\t{s.best[0]}\t{flag}\tcompetitor {competitor}"
            )


@main.command("render")
@click.argument("source", type=click.Path(exists=True, dir_okay=False))
@click.argument("sentence_id")
@click.option("--out", default=None, type=click.Path(dir_okay=False))
def render_(source, sentence_id, out):
    """Write the SVG drawing of one sentence to stdout or --out."""
    corpus = _load(source)
    try:
        graph = corpus.sentence(sentence_id)
    except errors.UnknownSentence as exc:
        raise click.ClickException(str(exc)) from exc
    svg = render_graph(graph)
    if out:
        with open(out, "w", encoding="utf-8", newline="\n") as handle:
            handle.write(svg)
    else:
        click.echo(svg, nl=False)


@main.command("convert")
@click.argument("source", type=click.Path(exists=True, dir_okay=False))
@click.option("--out", required=True, type=click.Path(dir_okay=False))
@click.option("--traces", "traces_out", default=None, type=click.Path(dir_okay=False),
              help="Trace table path (default: OUT + '.traces').")
def convert_(source, out, traces_out):
    """Flatten crossing branches: write projective trees plus a trace table
    recording every (moved child, original parent) pair."""
    corpus = _load(source)
    trees = []
    trace_rows = ["sentence\tchild\torigin"]
    skipped = 0
    for sentence in corpus.sentences:
        if sentence.status is not Status.COMPLETE:
            skipped += 1
            continue
        tree, traces = to_constituency(sentence)
        trees.append(tree)
        for t in traces:
            trace_rows.append(f"{sentence.sentence_id}\t{t.child}\t{t.origin}")
    converted = corpus_io.Corpus(
        name=corpus.name, tagsets=corpus.tagsets, sentences=trees,
        metadata=corpus.metadata,
    )
    corpus_io.save(converted, out)
    traces_path = traces_out or out + ".traces"
    with open(traces_path, "w", encoding="utf-8", newline="\n") as handle:
        handle.write("\n".join(trace_rows) + "\n")
    click.echo(
        f"converted {len(trees)} sentences ({skipped} skipped), "
        f"{len(trace_rows) - 1} traces"
    )


@main.command("serve")
@click.argument("source", type=click.Path(exists=True, dir_okay=False))
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8077, show_default=True)
@click.option("--model", "model_path", default=None, type=click.Path(exists=True))
@click.option("--no-autosave", is_flag=True, default=False,
              help="Do not write commands back to SOURCE.")
def serve_(source, host, port, model_path, no_autosave):
    """Serve the corpus over HTTP for interactive annotation."""
    import uvicorn

    from .service import create_app

    corpus = _load(source)
    model = load_model(model_path) if model_path else None
    app = create_app(
        corpus,
        corpus_path=None if no_autosave else source,
        model=model,
    )
    uvicorn.run(app, host=host, port=port, log_level="warning")


if __name__ == "__main__":
    main()
