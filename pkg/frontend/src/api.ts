/** HTTP client for the qmut service.
 *
 * The explorer keeps at most one request in flight: each call takes a
 * ticket from a monotone sequence, and a response whose ticket is no
 * longer the newest is discarded (`StaleResponseError`) so a slow reply
 * can never overwrite the result of a later action.
 */

import type {
  ErrorJson,
  GradedDocument,
  GradedMove,
  QuiverDocument,
  RecoveryResultJson,
  SeqMove,
  SequenceDocument,
} from "./types.js";

export class StaleResponseError extends Error {
  constructor() {
    super("response superseded by a newer request");
    this.name = "StaleResponseError";
  }
}

export class ServiceError extends Error {
  readonly code: string;
  readonly details: Record<string, unknown>;
  readonly status: number;

  constructor(status: number, payload: ErrorJson["error"]) {
    super(payload.message);
    this.name = "ServiceError";
    this.status = status;
    this.code = payload.code;
    this.details = payload.details;
  }
}

export type Fetcher = (url: string, init?: RequestInit) => Promise<Response>;

export interface VerifyReport {
  ok: boolean;
  kind: string;
  checks: Record<string, string>;
}

export class QmutClient {
  private seq = 0;

  constructor(
    readonly base: string,
    private readonly fetcher: Fetcher = (url, init) => fetch(url, init),
  ) {}

  private async request<T>(
    method: "GET" | "POST",
    path: string,
    body?: unknown,
  ): Promise<T> {
    const ticket = ++this.seq;
    const init: RequestInit = { method };
    if (body !== undefined) {
      init.headers = { "Content-Type": "application/json" };
      init.body = JSON.stringify(body);
    }
    const response = await this.fetcher(this.base + path, init);
    const payload = (await response.json()) as T | ErrorJson;
    if (ticket !== this.seq) {
      throw new StaleResponseError();
    }
    if (!response.ok) {
      const failure = payload as ErrorJson;
      throw new ServiceError(response.status, failure.error);
    }
    return payload as T;
  }

  generate(
    type: "canonical" | "squid",
    weights: number[],
    as: "graded" | "sequence" = "graded",
  ): Promise<QuiverDocument> {
    const query = `type=${type}&weights=${weights.join(",")}&as=${as}`;
    return this.request("GET", `/api/generate?${query}`);
  }

  mutate(
    doc: GradedDocument,
    vertex: number,
    graded = true,
  ): Promise<{ doc: GradedDocument; move: GradedMove }> {
    return this.request("POST", "/api/mutate", { doc, vertex, graded });
  }

  exmutate(
    doc: SequenceDocument,
    position: number,
    side: "left" | "right",
    kind?: SeqMove["kind"],
  ): Promise<{ doc: SequenceDocument; move: SeqMove }> {
    const body: Record<string, unknown> = { doc, position, side };
    if (kind) body.kind = kind;
    return this.request("POST", "/api/exmutate", body);
  }

  ranksSolve(
    doc: GradedDocument,
  ): Promise<{ doc: GradedDocument; solved: Record<string, number> }> {
    return this.request("POST", "/api/ranks/solve", { doc });
  }

  tags(
    doc: GradedDocument,
  ): Promise<{ doc: GradedDocument; tags: Record<string, string> }> {
    return this.request("POST", "/api/tags", { doc });
  }

  verify(doc: QuiverDocument): Promise<VerifyReport> {
    return this.request("POST", "/api/verify", { doc });
  }

  recover(
    doc: QuiverDocument,
    maxStates = 500,
  ): Promise<RecoveryResultJson> {
    return this.request("POST", "/api/recover", {
      doc,
      max_states: maxStates,
    });
  }
}
