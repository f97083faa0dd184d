// Thin client for the spinhalf JSON API. All physics happens server-side;
// this module only moves envelopes around.

import type {
  BasisResult,
  BlochResult,
  ChainSpecJson,
  ChainStatisticsJson,
  Envelope,
} from "./types.js";

export type FetchLike = (
  input: string,
  init?: RequestInit,
) => Promise<Response>;

export class ApiClient {
  constructor(
    private readonly base: string,
    private readonly fetchImpl: FetchLike = (...args) => fetch(...args),
  ) {}

  private async request<T>(
    method: "GET" | "POST",
    path: string,
    body?: unknown,
  ): Promise<Envelope<T>> {
    try {
      const response = await this.fetchImpl(this.base + path, {
        method,
        headers: body === undefined ? {} : { "Content-Type": "application/json" },
        body: body === undefined ? undefined : JSON.stringify(body),
      });
      // error statuses still carry a well-formed envelope
      return (await response.json()) as Envelope<T>;
    } catch (problem) {
      return {
        ok: false,
        version: "unknown",
        error: {
          code: "Network",
          message: problem instanceof Error ? problem.message : String(problem),
        },
      };
    }
  }

  version(): Promise<Envelope<{ name: string; version: string }>> {
    return this.request("GET", "/api/version");
  }

  basis(): Promise<Envelope<BasisResult>> {
    return this.request("GET", "/api/basis");
  }

  bloch(state: string): Promise<Envelope<BlochResult>> {
    return this.request("POST", "/api/bloch", { state });
  }

  runChain(spec: ChainSpecJson): Promise<Envelope<ChainStatisticsJson>> {
    return this.request("POST", "/api/chain", spec);
  }
}

export function describeError(envelope: Envelope<unknown>): string {
  if (envelope.error === undefined) return "unknown error";
  return `[${envelope.error.code}] ${envelope.error.message}`;
}
