"""HTTP editing service: browse, edit, suggest, train, render.

The service owns one corpus and an optional tagger model.  Editing runs
through a single command endpoint guarded by optimistic concurrency: every
sentence carries a revision number, every command names the revision it
was computed against, and a mismatch is rejected with 409 so no edit can
silently overwrite another.  Commands apply to a copy and swap in only on
success, so a refused command leaves the graph untouched; every success
response carries the validator's findings for the new state, which is how
clients show live error checking.

Suggestion endpoints are strictly read-only.  When the service was given
a corpus path, every successful command autosaves atomically.
"""

from __future__ import annotations

import threading
from dataclasses import asdict
from typing import Any

from fastapi import FastAPI, Request, Response
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field

from . import automation, errors, tagger
from .corpus import Corpus, save, serialize, _sentence_lines
from .graph import AnnotationGraph, Status, validate
from .layout import layout, render
from .tagger import Smoothing, TaggerModel

SCHEMA_VERSION = "1"


class CommandEnvelope(BaseModel):
    base_revision: int
    command: str
    params: dict[str, Any] = Field(default_factory=dict)


class SuggestRequest(BaseModel):
    level: int
    children: list[int] | None = None
    category: str | None = None
    variant: str = "paper"


class TrainRequest(BaseModel):
    delta: float = tagger.DEFAULT_DELTA
    theta: float | None = None


class Workbench:
    """Mutable service state: corpus, per-sentence revisions, model slot."""

    def __init__(
        self,
        corpus: Corpus,
        corpus_path: str | None = None,
        model: TaggerModel | None = None,
    ):
        self.corpus = corpus
        self.corpus_path = corpus_path
        self.model = model
        self.revisions: dict[str, int] = {s.sentence_id: 0 for s in corpus.sentences}
        self._sentence_locks: dict[str, threading.Lock] = {
            s.sentence_id: threading.Lock() for s in corpus.sentences
        }
        self.model_lock = threading.Lock()

    def sentence(self, sentence_id: str) -> AnnotationGraph:
        return self.corpus.sentence(sentence_id)

    def lock_for(self, sentence_id: str) -> threading.Lock:
        return self._sentence_locks[sentence_id]

    def replace_sentence(self, updated: AnnotationGraph) -> int:
        for i, s in enumerate(self.corpus.sentences):
            if s.sentence_id == updated.sentence_id:
                self.corpus.sentences[i] = updated
                self.revisions[updated.sentence_id] += 1
                return self.revisions[updated.sentence_id]
        raise errors.UnknownSentence(updated.sentence_id)


def graph_view(graph: AnnotationGraph, registry, revision: int) -> dict:
    """Everything a client needs to draw and edit one sentence."""
    return {
        "id": graph.sentence_id,
        "status": graph.status.value,
        "revision": revision,
        "tokens": [
            {"position": t.position, "form": t.form, "pos": t.pos_tag}
            for t in graph.tokens
        ],
        "nodes": [
            {"id": n, "category": graph.phrase_nodes[n].category}
            for n in sorted(graph.phrase_nodes)
        ],
        "edges": [
            {
                "parent": graph.incoming[c].parent,
                "child": c,
                "function": graph.incoming[c].function,
            }
            for c in sorted(graph.incoming)
        ],
        "links": [
            {"source": l.source, "target": l.target, "function": l.function}
            for l in graph.secondary_links
        ],
        "comments": list(graph.comments),
        "violations": [asdict(v) for v in validate(graph, registry)],
        "geometry": asdict(layout(graph)),
        "tagsets": {
            kind: {
                "version": registry.get(kind).version,
                "labels": list(registry.get(kind).labels),
            }
            for kind in ("pos", "node", "edge")
        },
    }


def _apply_command(
    graph: AnnotationGraph, registry, command: str, params: dict
) -> dict:
    """Run one editing command against ``graph`` (a scratch copy)."""
    from . import graph as ops

    extra: dict = {}
    if command == "group":
        node_id = ops.group(graph, list(params["children"]), params["category"], registry)
        extra["node"] = node_id
    elif command == "ungroup":
        ops.ungroup(graph, int(params["node"]), force=bool(params.get("force", False)))
    elif command == "relabel":
        if params["target"] == "node":
            ops.relabel_node(graph, int(params["id"]), params["label"], registry)
        elif params["target"] == "edge":
            ops.relabel_edge(graph, int(params["id"]), params["label"], registry)
        else:
            raise ValueError(f"relabel target must be node or edge, got {params['target']!r}")
    elif command == "reattach":
        parent = int(params["parent"])
        if parent == 0:
            ops.detach(graph, int(params["child"]))
        else:
            ops.reattach(graph, int(params["child"]), parent)
    elif command == "set_secondary":
        ops.set_secondary(
            graph,
            int(params["source"]),
            int(params["target"]),
            params.get("function"),
            params.get("action", "add"),
            registry,
        )
    elif command == "comment":
        ops.add_comment(graph, params["text"])
    elif command == "set_status":
        ops.set_status(graph, Status(params["status"]), registry)
    else:
        raise ValueError(f"unknown command {command!r}")
    return extra


def sentence_block(graph: AnnotationGraph) -> str:
    """Canonical per-sentence text, exactly as the corpus file would hold it."""
    return "\n".join(_sentence_lines(graph)) + "\n"


def create_app(
    corpus: Corpus,
    corpus_path: str | None = None,
    model: TaggerModel | None = None,
) -> FastAPI:
    app = FastAPI(title="annotation workbench", docs_url=None, redoc_url=None)
    state = Workbench(corpus, corpus_path=corpus_path, model=model)
    app.state.workbench = state

    @app.middleware("http")
    async def schema_header(request: Request, call_next):
        response = await call_next(request)
        response.headers["X-Schema-Version"] = SCHEMA_VERSION
        return response

    def not_found(sentence_id: str) -> JSONResponse:
        return JSONResponse(
            {"error": "UnknownSentence", "message": f"no sentence {sentence_id!r}"},
            status_code=404,
        )

    @app.get("/")
    def info():
        return {
            "service": "graphbank",
            "schema": SCHEMA_VERSION,
            "corpus": state.corpus.name,
            "sentences": len(state.corpus.sentences),
            "model": state.model is not None,
        }

    @app.get("/sentences")
    def list_sentences():
        out = []
        for s in state.corpus.sentences:
            forms = [t.form for t in s.tokens]
            preview = " ".join(forms[:8]) + (" ..." if len(forms) > 8 else "")
            out.append(
                {
                    "id": s.sentence_id,
                    "status": s.status.value,
                    "tokens": len(s.tokens),
                    "preview": preview,
                    "revision": state.revisions[s.sentence_id],
                }
            )
        return {"sentences": out}

    @app.get("/sentences/{sentence_id}")
    def get_sentence(sentence_id: str):
        try:
            graph = state.sentence(sentence_id)
        except errors.UnknownSentence:
            return not_found(sentence_id)
        return graph_view(graph, state.corpus.tagsets, state.revisions[sentence_id])

    @app.get("/sentences/{sentence_id}/export")
    def export_sentence(sentence_id: str):
        try:
            graph = state.sentence(sentence_id)
        except errors.UnknownSentence:
            return not_found(sentence_id)
        return Response(sentence_block(graph), media_type="text/plain; charset=utf-8")

    @app.post("/sentences/{sentence_id}/command")
    def apply_command(sentence_id: str, envelope: CommandEnvelope):
        try:
            current = state.sentence(sentence_id)
        except errors.UnknownSentence:
            return not_found(sentence_id)
        with state.lock_for(sentence_id):
            revision = state.revisions[sentence_id]
            if envelope.base_revision != revision:
                return JSONResponse(
                    {
                        "error": "StaleRevision",
                        "message": "sentence changed since this command was prepared",
                        "expected": revision,
                        "got": envelope.base_revision,
                    },
                    status_code=409,
                )
            scratch = current.copy()
            try:
                extra = _apply_command(
                    scratch, state.corpus.tagsets, envelope.command, envelope.params
                )
            except errors.CompletionBlocked as exc:
                return JSONResponse(
                    {
                        "error": "CompletionBlocked",
                        "message": str(exc),
                        "violations": [asdict(v) for v in exc.violations],
                    },
                    status_code=422,
                )
            except (errors.AnnotationError, ValueError, KeyError, TypeError) as exc:
                return JSONResponse(
                    {"error": type(exc).__name__, "message": str(exc)},
                    status_code=422,
                )
            new_revision = state.replace_sentence(scratch)
            if state.corpus_path:
                save(state.corpus, state.corpus_path)
            view = graph_view(scratch, state.corpus.tagsets, new_revision)
            return {"revision": new_revision, "result": extra, "view": view}

    @app.post("/sentences/{sentence_id}/suggest")
    def suggest(sentence_id: str, request: SuggestRequest):
        try:
            graph = state.sentence(sentence_id)
        except errors.UnknownSentence:
            return not_found(sentence_id)
        if request.level < 0 or request.level > 3:
            return JSONResponse(
                {"error": "ValueError", "message": f"bad level {request.level}"},
                status_code=422,
            )
        if request.level == 1:
            selection = (request.children or [], request.category or "")
        elif request.level == 2:
            selection = request.children or []
        else:
            selection = None
        try:
            proposals = automation.suggest(
                graph, state.model, request.level, selection, variant=request.variant
            )
        except (errors.AnnotationError, ValueError) as exc:
            return JSONResponse(
                {"error": type(exc).__name__, "message": str(exc)},
                status_code=422,
            )
        return {
            "proposals": [
                {
                    "children": list(p.children),
                    "category": p.category,
                    "functions": list(p.functions),
                    "level": int(p.level),
                    "suggestions": [
                        {
                            "position": s.position,
                            "best": {"label": s.best[0], "score": s.best[1]},
                            "competitor": None
                            if s.competitor is None
                            else {"label": s.competitor[0], "score": s.competitor[1]},
                            "reliable": s.reliable,
                            "must_confirm": not s.reliable,
                        }
                        for s in p.suggestions
                    ],
                }
                for p in proposals
            ]
        }

    @app.post("/train")
    def train_model(request: TrainRequest):
        instances = tagger.extract_instances(state.corpus)
        if not instances:
            return JSONResponse(
                {"error": "NoModel", "message": "no complete sentences to train on"},
                status_code=422,
            )
        with state.model_lock:
            model = tagger.train(instances, Smoothing(delta=request.delta))
            if request.theta is not None:
                from dataclasses import replace

                model = replace(model, threshold=request.theta)
            state.model = model
        return {
            "instances": len(instances),
            "categories": sorted(model.categories),
            "threshold": model.threshold,
        }

    @app.get("/eval-report")
    def eval_report(
        repetitions: int = 10,
        train_fraction: float = 0.9,
        seed: int = 0,
        variant: str = "paper",
    ):
        try:
            report = tagger.evaluate(
                state.corpus,
                repetitions=repetitions,
                train_fraction=train_fraction,
                seed=seed,
                variant=variant,
            )
        except ValueError as exc:
            return JSONResponse(
                {"error": "ValueError", "message": str(exc)}, status_code=422
            )
        return {
            "repetitions": report.repetitions,
            "train_fraction": report.train_fraction,
            "seed": report.seed,
            "variant": report.variant,
            "rows": [
                {
                    "repetition": r.repetition,
                    "positions": r.positions,
                    "reliable": r.reliable,
                    "reliable_correct": r.reliable_correct,
                    "unreliable_correct": r.unreliable_correct,
                    "fraction_reliable": r.fraction_reliable,
                    "acc_reliable": r.acc_reliable,
                    "acc_unreliable": r.acc_unreliable,
                    "acc_overall": r.acc_overall,
                }
                for r in report.rows
            ],
            "aggregate": {
                "fraction_reliable": report.fraction_reliable,
                "acc_reliable": report.acc_reliable,
                "acc_unreliable": report.acc_unreliable,
                "acc_overall": report.acc_overall,
            },
            "confusion": [
                {"gold": g, "predicted": p, "count": c}
                for (g, p), c in report.confusion
            ],
        }

    @app.get("/render/{sentence_id}")
    def render_sentence(sentence_id: str):
        try:
            graph = state.sentence(sentence_id)
        except errors.UnknownSentence:
            return not_found(sentence_id)
        svg = render(layout(graph))
        return Response(svg, media_type="image/svg+xml")

    @app.get("/export")
    def export_corpus():
        return Response(
            serialize(state.corpus), media_type="text/plain; charset=utf-8"
        )

    return app
