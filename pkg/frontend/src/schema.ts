/**
 * Wire types for the annotation service, as zod schemas so every payload
 * is validated at the boundary.  Field names mirror the server exactly.
 */

import { z } from "zod";

export const SCHEMA_VERSION = "1";

export const TokenGlyph = z.object({
  position: z.number().int(),
  form: z.string(),
  pos_tag: z.string(),
  x: z.number(),
  y: z.number(),
});

export const NodeGlyph = z.object({
  node_id: z.number().int(),
  category: z.string(),
  x: z.number(),
  y: z.number(),
  depth: z.number().int(),
  childless: z.boolean(),
});

export const EdgeGlyph = z.object({
  parent: z.number().int(),
  child: z.number().int(),
  function: z.string(),
  x1: z.number(),
  y1: z.number(),
  x2: z.number(),
  y2: z.number(),
});

export const LinkGlyph = z.object({
  source: z.number().int(),
  target: z.number().int(),
  function: z.string().nullable(),
  x1: z.number(),
  y1: z.number(),
  x2: z.number(),
  y2: z.number(),
});

export const Geometry = z.object({
  width: z.number(),
  height: z.number(),
  baseline: z.number(),
  tokens: z.array(TokenGlyph),
  nodes: z.array(NodeGlyph),
  edges: z.array(EdgeGlyph),
  links: z.array(LinkGlyph),
});

export const Violation = z.object({
  severity: z.enum(["error", "warning"]),
  rule: z.string(),
  message: z.string(),
  ids: z.array(z.number().int()),
});

export const Tagset = z.object({
  version: z.number().int(),
  labels: z.array(z.string()),
});

export const SentenceView = z.object({
  id: z.string(),
  status: z.string(),
  revision: z.number().int(),
  tokens: z.array(
    z.object({ position: z.number().int(), form: z.string(), pos: z.string() }),
  ),
  nodes: z.array(z.object({ id: z.number().int(), category: z.string() })),
  edges: z.array(
    z.object({
      parent: z.number().int(),
      child: z.number().int(),
      function: z.string(),
    }),
  ),
  links: z.array(
    z.object({
      source: z.number().int(),
      target: z.number().int(),
      function: z.string().nullable(),
    }),
  ),
  comments: z.array(z.string()),
  violations: z.array(Violation),
  geometry: Geometry,
  tagsets: z.record(z.string(), Tagset),
});

export const SentenceSummary = z.object({
  id: z.string(),
  status: z.string(),
  tokens: z.number().int(),
  preview: z.string(),
  revision: z.number().int(),
});

export const SentenceList = z.object({
  sentences: z.array(SentenceSummary),
});

export const ServiceInfo = z.object({
  service: z.string(),
  schema: z.string(),
  corpus: z.string(),
  sentences: z.number().int(),
  model: z.boolean(),
});

export const Scored = z.object({ label: z.string(), score: z.number() });

export const Suggestion = z.object({
  position: z.number().int(),
  best: Scored,
  competitor: Scored.nullable(),
  reliable: z.boolean(),
  must_confirm: z.boolean(),
});

export const Proposal = z.object({
  children: z.array(z.number().int()),
  category: z.string(),
  functions: z.array(z.string()),
  level: z.number().int(),
  suggestions: z.array(Suggestion),
});

export const SuggestResponse = z.object({
  proposals: z.array(Proposal),
});

export const CommandResponse = z.object({
  revision: z.number().int(),
  result: z.record(z.string(), z.unknown()),
  view: SentenceView,
});

export const TrainResponse = z.object({
  instances: z.number().int(),
  categories: z.array(z.string()),
  threshold: z.number(),
});

export const StaleBody = z.object({
  error: z.literal("StaleRevision"),
  message: z.string(),
  expected: z.number().int(),
  got: z.number().int(),
});

export const ErrorBody = z.object({
  error: z.string(),
  message: z.string(),
  violations: z.array(Violation).optional(),
});

export type TokenGlyph = z.infer<typeof TokenGlyph>;
export type NodeGlyph = z.infer<typeof NodeGlyph>;
export type EdgeGlyph = z.infer<typeof EdgeGlyph>;
export type LinkGlyph = z.infer<typeof LinkGlyph>;
export type Geometry = z.infer<typeof Geometry>;
export type Violation = z.infer<typeof Violation>;
export type SentenceView = z.infer<typeof SentenceView>;
export type SentenceSummary = z.infer<typeof SentenceSummary>;
export type ServiceInfo = z.infer<typeof ServiceInfo>;
export type Suggestion = z.infer<typeof Suggestion>;
export type Proposal = z.infer<typeof Proposal>;
export type CommandResponse = z.infer<typeof CommandResponse>;
export type TrainResponse = z.infer<typeof TrainResponse>;
