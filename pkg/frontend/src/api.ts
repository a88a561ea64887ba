// Service client with stale-response suppression: every mutation of the
// explorer state aborts the in-flight fetch pair, and only the newest
// response generation is delivered (last write wins).

import type {
  DecideRequest,
  DecisionReport,
  DecisionSpaceRequest,
  DecisionSpaceResponse,
  ExperimentInfo,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    message: string,
  ) {
    super(message);
  }
}

async function parseOrThrow<T>(resp: Response): Promise<T> {
  if (resp.ok) return (await resp.json()) as T;
  let code = "http_error";
  let message = `${resp.status}`;
  try {
    const body = await resp.json();
    code = body.code ?? code;
    message = body.message ?? message;
  } catch {
    // non-JSON error body; keep defaults
  }
  throw new ApiError(resp.status, code, message);
}

export class ApiClient {
  constructor(readonly baseUrl: string) {}

  private async post<T>(path: string, body: unknown, signal?: AbortSignal): Promise<T> {
    const resp = await fetch(`${this.baseUrl}${path}`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(body),
      signal,
    });
    return parseOrThrow<T>(resp);
  }

  listExperiments(signal?: AbortSignal): Promise<ExperimentInfo[]> {
    return fetch(`${this.baseUrl}/experiments`, { signal }).then((r) =>
      parseOrThrow<ExperimentInfo[]>(r),
    );
  }

  decisionSpace(req: DecisionSpaceRequest, signal?: AbortSignal): Promise<DecisionSpaceResponse> {
    return this.post<DecisionSpaceResponse>("/decision-space", req, signal);
  }

  decide(req: DecideRequest, signal?: AbortSignal): Promise<DecisionReport> {
    return this.post<DecisionReport>("/decide", req, signal);
  }
}

export interface QueryOutcome {
  grid: DecisionSpaceResponse;
  report: DecisionReport;
}

/**
 * Debounced what-if querier. Calls collapse within the debounce window;
 * a newer call aborts the previous request, and resolutions from
 * superseded generations are dropped instead of rendered.
 */
export class DebouncedQuerier {
  private timer: ReturnType<typeof setTimeout> | null = null;
  private controller: AbortController | null = null;
  private generation = 0;

  constructor(
    private readonly client: ApiClient,
    private readonly applyBoth: (outcome: QueryOutcome) => void,
    private readonly onError: (err: unknown) => void,
    readonly debounceMs = 250,
  ) {}

  request(grid: DecisionSpaceRequest, decide: DecideRequest): void {
    if (this.timer !== null) clearTimeout(this.timer);
    this.timer = setTimeout(() => {
      this.timer = null;
      void this.fire(grid, decide);
    }, this.debounceMs);
  }

  /** Issue immediately (initial load); still participates in generations. */
  async fire(grid: DecisionSpaceRequest, decide: DecideRequest): Promise<void> {
    this.controller?.abort();
    const controller = new AbortController();
    this.controller = controller;
    const generation = ++this.generation;
    try {
      const [gridResp, reportResp] = await Promise.all([
        this.client.decisionSpace(grid, controller.signal),
        this.client.decide(decide, controller.signal),
      ]);
      if (generation === this.generation) {
        // heatmap and report panel update atomically, from one generation
        this.applyBoth({ grid: gridResp, report: reportResp });
      }
    } catch (err) {
      if (controller.signal.aborted) return; // superseded: stay quiet
      if (generation === this.generation) this.onError(err);
    }
  }
}
