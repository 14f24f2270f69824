/**
 * Minimal browser shell: sentence list on the left, drawing and
 * suggestion panel on the right.  All state lives in the core modules;
 * this file only moves DOM.
 */

import { Client, StaleRevisionError } from "./api.js";
import { SentenceSession } from "./controller.js";
import {
  awaitingConfirmation,
  confirmDecision,
  LabelDecision,
  planFromProposal,
} from "./gate.js";
import { renderSvg } from "./render.js";
import type { Proposal } from "./schema.js";

const client = new Client(
  new URLSearchParams(location.search).get("api") ?? "http://127.0.0.1:8077",
);

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  text?: string,
  cls?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (text !== undefined) node.textContent = text;
  if (cls !== undefined) node.className = cls;
  return node;
}

function byId(id: string): HTMLElement {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing #${id}`);
  return node;
}

let session: SentenceSession | null = null;
let proposal: Proposal | null = null;
let plan: LabelDecision[] = [];

async function showSentence(id: string): Promise<void> {
  session = await SentenceSession.open(client, id);
  proposal = null;
  plan = [];
  redraw();
}

function redraw(): void {
  if (!session) return;
  const view = session.view;
  byId("drawing").innerHTML = renderSvg(view.geometry);
  byId("status").textContent =
    `${view.id} (${view.status}, revision ${view.revision})`;

  const findings = byId("violations");
  findings.replaceChildren();
  for (const v of view.violations) {
    findings.append(el("li", `${v.severity}: ${v.message}`, v.severity));
  }

  const panel = byId("suggestions");
  panel.replaceChildren();
  for (const d of plan) {
    const row = el("li");
    row.append(el("span", `child ${d.child}: ${d.label} `));
    if (!d.requiresConfirmation) {
      row.append(el("em", "auto"));
    } else if (d.confirmed) {
      row.append(el("em", "confirmed"));
    } else {
      const button = el("button", "confirm");
      button.addEventListener("click", () => {
        plan = confirmDecision(plan, d.position);
        redraw();
      });
      row.append(button);
    }
    panel.append(row);
  }
  const apply = byId("apply") as HTMLButtonElement;
  apply.disabled = proposal === null;
  apply.textContent = proposal
    ? `apply (${plan.length - awaitingConfirmation(plan).length} of ${plan.length})`
    : "apply";
}

async function loadList(): Promise<void> {
  const list = byId("sentences");
  list.replaceChildren();
  for (const row of await client.listSentences()) {
    const item = el("li", `${row.id} — ${row.preview}`);
    item.addEventListener("click", () => void showSentence(row.id));
    list.append(item);
  }
}

async function requestSuggestions(): Promise<void> {
  if (!session) return;
  const proposals = await client.suggest(session.id, { level: 3 });
  proposal = proposals[0] ?? null;
  plan = proposal ? planFromProposal(proposal) : [];
  redraw();
}

async function applyPlan(): Promise<void> {
  if (!session || !proposal) return;
  try {
    const { applied, held } = await session.applyProposal(proposal, plan);
    byId("message").textContent =
      `applied ${applied} labels` + (held ? `, ${held} awaiting confirmation` : "");
    proposal = null;
    plan = [];
  } catch (error) {
    if (error instanceof StaleRevisionError) {
      byId("message").textContent =
        "sentence changed under you; review the refreshed state and retry";
    } else {
      throw error;
    }
  }
  redraw();
}

export function start(): void {
  byId("suggest").addEventListener("click", () => void requestSuggestions());
  byId("apply").addEventListener("click", () => void applyPlan());
  void loadList();
}

start();
