/**
 * Confirmation gating for tagger proposals.
 *
 * A proposal arrives with one suggestion per child.  Suggestions the
 * model marks reliable may be applied as they are; anything flagged
 * must_confirm (an uncertain competitor or input the model never saw)
 * is held back until a person confirms that exact label.  The gate is
 * the only path from proposal to command list, so an unconfirmed flagged
 * label can never reach the server.
 */

import type { Proposal } from "./schema.js";

export interface LabelDecision {
  /** One-based position within the proposal's children, as the tagger numbers them. */
  position: number;
  /** Graph id of the child whose incoming edge gets the label. */
  child: number;
  label: string;
  requiresConfirmation: boolean;
  confirmed: boolean;
}

export interface CommandSpec {
  command: "group" | "relabel";
  params: Record<string, unknown>;
}

export function planFromProposal(proposal: Proposal): LabelDecision[] {
  return proposal.suggestions.map((s) => {
    const child = proposal.children[s.position - 1];
    if (child === undefined) {
      throw new Error(`suggestion position ${s.position} outside proposal`);
    }
    return {
      position: s.position,
      child,
      label: s.best.label,
      requiresConfirmation: s.must_confirm,
      confirmed: !s.must_confirm,
    };
  });
}

/** Confirm one flagged decision, optionally overriding the label. */
export function confirmDecision(
  plan: LabelDecision[],
  position: number,
  label?: string,
): LabelDecision[] {
  return plan.map((d) =>
    d.position === position
      ? { ...d, confirmed: true, label: label ?? d.label }
      : d,
  );
}

export function applicable(plan: LabelDecision[]): LabelDecision[] {
  return plan.filter((d) => d.confirmed);
}

export function awaitingConfirmation(plan: LabelDecision[]): LabelDecision[] {
  return plan.filter((d) => !d.confirmed);
}

/**
 * Commands realizing a proposal under the current plan.  Levels 2 and 3
 * propose a phrase that does not exist yet, so those start with a group
 * command; the relabel commands then name the children directly, which
 * stays valid whatever node id the group step allocates.  Only confirmed
 * decisions produce relabels.
 */
export function commandsFor(
  proposal: Proposal,
  plan: LabelDecision[],
): CommandSpec[] {
  for (const d of plan) {
    if (d.confirmed === false && d.requiresConfirmation === false) {
      throw new Error("auto-approved decision cannot be unconfirmed");
    }
  }
  const out: CommandSpec[] = [];
  if (proposal.level >= 2) {
    out.push({
      command: "group",
      params: { children: proposal.children, category: proposal.category },
    });
  }
  for (const d of applicable(plan)) {
    out.push({
      command: "relabel",
      params: { target: "edge", id: d.child, label: d.label },
    });
  }
  return out;
}
