/**
 * HTTP client for the annotation service.  Every response body is parsed
 * through the zod schemas; the schema version header is checked on every
 * call so a client never silently talks to an incompatible server.
 */

import {
  CommandResponse,
  ErrorBody,
  Proposal,
  SCHEMA_VERSION,
  SentenceList,
  SentenceSummary,
  SentenceView,
  ServiceInfo,
  StaleBody,
  SuggestResponse,
  TrainResponse,
  Violation,
} from "./schema.js";

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    message: string,
  ) {
    super(message);
  }
}

export class StaleRevisionError extends ApiError {
  constructor(
    readonly expected: number,
    readonly got: number,
    message: string,
  ) {
    super(409, "StaleRevision", message);
  }
}

export class CommandRejected extends ApiError {
  constructor(
    code: string,
    message: string,
    readonly violations: Violation[] = [],
  ) {
    super(422, code, message);
  }
}

export type CommandName =
  | "group"
  | "ungroup"
  | "relabel"
  | "reattach"
  | "set_secondary"
  | "comment"
  | "set_status";

export interface SuggestRequest {
  level: number;
  children?: number[];
  category?: string;
  variant?: "paper" | "hmm";
}

export class Client {
  constructor(readonly base: string) {}

  private async request(path: string, init?: RequestInit): Promise<Response> {
    const response = await fetch(this.base + path, init);
    const version = response.headers.get("x-schema-version");
    if (version !== SCHEMA_VERSION) {
      throw new ApiError(
        response.status,
        "SchemaMismatch",
        `server speaks schema ${version ?? "<none>"}, client expects ${SCHEMA_VERSION}`,
      );
    }
    return response;
  }

  private async readError(response: Response): Promise<never> {
    const body: unknown = await response.json();
    if (response.status === 409) {
      const stale = StaleBody.parse(body);
      throw new StaleRevisionError(stale.expected, stale.got, stale.message);
    }
    const error = ErrorBody.parse(body);
    if (response.status === 422) {
      throw new CommandRejected(error.error, error.message, error.violations ?? []);
    }
    throw new ApiError(response.status, error.error, error.message);
  }

  private async getJson(path: string): Promise<unknown> {
    const response = await this.request(path);
    if (!response.ok) await this.readError(response);
    return response.json();
  }

  private async postJson(path: string, payload: unknown): Promise<unknown> {
    const response = await this.request(path, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(payload),
    });
    if (!response.ok) await this.readError(response);
    return response.json();
  }

  async info(): Promise<ServiceInfo> {
    return ServiceInfo.parse(await this.getJson("/"));
  }

  async listSentences(): Promise<SentenceSummary[]> {
    return SentenceList.parse(await this.getJson("/sentences")).sentences;
  }

  async getSentence(id: string): Promise<SentenceView> {
    return SentenceView.parse(await this.getJson(`/sentences/${id}`));
  }

  async renderSentence(id: string): Promise<string> {
    const response = await this.request(`/render/${id}`);
    if (!response.ok) await this.readError(response);
    return response.text();
  }

  async exportSentence(id: string): Promise<string> {
    const response = await this.request(`/sentences/${id}/export`);
    if (!response.ok) await this.readError(response);
    return response.text();
  }

  async exportCorpus(): Promise<string> {
    const response = await this.request("/export");
    if (!response.ok) await this.readError(response);
    return response.text();
  }

  async applyCommand(
    id: string,
    baseRevision: number,
    command: CommandName,
    params: Record<string, unknown>,
  ): Promise<CommandResponse> {
    const body = { base_revision: baseRevision, command, params };
    return CommandResponse.parse(
      await this.postJson(`/sentences/${id}/command`, body),
    );
  }

  async suggest(id: string, request: SuggestRequest): Promise<Proposal[]> {
    return SuggestResponse.parse(
      await this.postJson(`/sentences/${id}/suggest`, request),
    ).proposals;
  }

  async train(options: { delta?: number; theta?: number } = {}): Promise<TrainResponse> {
    return TrainResponse.parse(await this.postJson("/train", options));
  }
}
