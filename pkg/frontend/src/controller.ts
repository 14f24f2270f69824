/**
 * Editing session for one sentence: tracks the server revision, applies
 * commands optimistically, and recovers from concurrent edits by
 * refetching.  The session's view is always the last state the server
 * confirmed.
 */

import { Client, CommandName, StaleRevisionError } from "./api.js";
import { commandsFor, LabelDecision } from "./gate.js";
import type { Proposal, SentenceView } from "./schema.js";

export class SentenceSession {
  private constructor(
    private readonly client: Client,
    public view: SentenceView,
  ) {}

  static async open(client: Client, id: string): Promise<SentenceSession> {
    return new SentenceSession(client, await client.getSentence(id));
  }

  get id(): string {
    return this.view.id;
  }

  get revision(): number {
    return this.view.revision;
  }

  async refresh(): Promise<void> {
    this.view = await this.client.getSentence(this.id);
  }

  /**
   * Apply one command against the session's revision.  On a stale
   * revision the session refreshes; with retryOnStale the command is
   * tried once more against the fresh state, otherwise the conflict is
   * rethrown for the caller to surface.
   */
  async apply(
    command: CommandName,
    params: Record<string, unknown>,
    options: { retryOnStale?: boolean } = {},
  ): Promise<void> {
    try {
      const response = await this.client.applyCommand(
        this.id,
        this.revision,
        command,
        params,
      );
      this.view = response.view;
    } catch (error) {
      if (error instanceof StaleRevisionError) {
        await this.refresh();
        if (options.retryOnStale) {
          const response = await this.client.applyCommand(
            this.id,
            this.revision,
            command,
            params,
          );
          this.view = response.view;
          return;
        }
      }
      throw error;
    }
  }

  /**
   * Send a proposal through the confirmation gate.  Returns how many
   * labels were applied and how many are still waiting on a person.
   */
  async applyProposal(
    proposal: Proposal,
    plan: LabelDecision[],
  ): Promise<{ applied: number; held: number }> {
    const commands = commandsFor(proposal, plan);
    for (const spec of commands) {
      await this.apply(spec.command, spec.params);
    }
    const applied = commands.filter((c) => c.command === "relabel").length;
    return { applied, held: plan.length - applied };
  }
}
