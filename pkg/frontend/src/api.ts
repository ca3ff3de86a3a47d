/**
 * Thin fetch client for the selection service. One method per endpoint,
 * no response reshaping: handlers receive the server's JSON as-is.
 */

import type {
  ClusterDetailResponse,
  ClustersResponse,
  CountResponse,
  DecisionResponse,
  Envelope,
  LogResponse,
  MetaResponse,
  Mode,
  SelectionResponse,
  Status,
} from "./types";

export class ApiError extends Error {
  constructor(
    public readonly status: number,
    message: string,
  ) {
    super(message);
    this.name = "ApiError";
  }

  /** Mutation raced a corpus change; the page must reload. */
  get isStaleCorpus(): boolean {
    return this.status === 409;
  }
}

async function parseError(response: Response): Promise<ApiError> {
  let detail = response.statusText;
  try {
    const body = await response.json();
    if (typeof body.detail === "string") detail = body.detail;
  } catch {
    // non-JSON error body; keep the status text
  }
  return new ApiError(response.status, detail);
}

export class Client {
  constructor(private readonly base: string = "") {}

  private async get<T>(path: string): Promise<T> {
    const response = await fetch(this.base + path);
    if (!response.ok) throw await parseError(response);
    return (await response.json()) as T;
  }

  private async post<T>(path: string, body: unknown): Promise<T> {
    const response = await fetch(this.base + path, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(body),
    });
    if (!response.ok) throw await parseError(response);
    return (await response.json()) as T;
  }

  meta(): Promise<MetaResponse> {
    return this.get("/api/meta");
  }

  clusters(): Promise<ClustersResponse> {
    return this.get("/api/clusters");
  }

  cluster(id: number): Promise<ClusterDetailResponse> {
    return this.get(`/api/clusters/${id}`);
  }

  decide(id: number, verdict: Status, corpusHash: string): Promise<DecisionResponse> {
    return this.post(`/api/clusters/${id}/decision`, {
      verdict,
      corpus_hash: corpusHash,
    });
  }

  decideAll(verdict: Status, corpusHash: string): Promise<CountResponse> {
    return this.post("/api/decide-all", { verdict, corpus_hash: corpusHash });
  }

  setMode(mode: Mode, corpusHash: string): Promise<Envelope> {
    return this.post("/api/mode", { mode, corpus_hash: corpusHash });
  }

  setCutoff(cutoff: number, corpusHash: string): Promise<Envelope> {
    return this.post("/api/cutoff", { cutoff, corpus_hash: corpusHash });
  }

  previewAutoReject(cutoff?: number): Promise<CountResponse> {
    const query = cutoff === undefined ? "" : `?cutoff=${cutoff}`;
    return this.get(`/api/auto-reject/preview${query}`);
  }

  autoReject(corpusHash: string): Promise<CountResponse> {
    return this.post("/api/auto-reject", { corpus_hash: corpusHash });
  }

  selection(): Promise<SelectionResponse> {
    return this.get("/api/selection");
  }

  async exportText(): Promise<string> {
    const response = await fetch(this.base + "/api/export");
    if (!response.ok) throw await parseError(response);
    return response.text();
  }

  sessionLog(): Promise<LogResponse> {
    return this.get("/api/session/log");
  }
}
