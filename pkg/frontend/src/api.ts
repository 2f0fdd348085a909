import type {
  CostDoc,
  CoverageDoc,
  Finding,
  MetricsPage,
  RunHandle,
  ScenarioDoc,
  ScenarioEnvelope,
  WriteResult,
} from "./types.js";

/** Error envelope from the service, surfaced with its code and any findings. */
export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    message: string,
    readonly findings: Finding[] = []
  ) {
    super(message);
    this.name = "ApiError";
  }
}

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

async function unwrap<T>(resp: Response): Promise<T> {
  const body = await resp.json().catch(() => null);
  if (!resp.ok) {
    const code = body?.code ?? `HTTP_${resp.status}`;
    const message = body?.message ?? resp.statusText;
    throw new ApiError(resp.status, code, message, body?.findings ?? []);
  }
  return body as T;
}

/**
 * Thin client for the /v1 API. The fetch implementation is injectable so
 * contract tests can stub the whole service.
 */
export function createClient(baseUrl: string, fetchImpl?: FetchLike) {
  const doFetch: FetchLike = fetchImpl ?? ((url, init) => fetch(url, init));
  const json = (body: unknown): RequestInit => ({
    headers: { "content-type": "application/json" },
    body: JSON.stringify(body),
  });

  return {
    async createScenario(doc: ScenarioDoc): Promise<WriteResult> {
      return unwrap(await doFetch(`${baseUrl}/v1/scenarios`, { method: "POST", ...json(doc) }));
    },

    async getScenario(id: string): Promise<ScenarioEnvelope> {
      return unwrap(await doFetch(`${baseUrl}/v1/scenarios/${id}`));
    },

    async putScenario(id: string, doc: ScenarioDoc, revision: number): Promise<WriteResult> {
      return unwrap(
        await doFetch(`${baseUrl}/v1/scenarios/${id}`, {
          method: "PUT",
          ...json({ ...doc, revision }),
        })
      );
    },

    async getCoverage(id: string, resolutionM: number): Promise<CoverageDoc> {
      return unwrap(
        await doFetch(`${baseUrl}/v1/scenarios/${id}/coverage?resolution=${resolutionM}`)
      );
    },

    async getCost(id: string): Promise<CostDoc> {
      return unwrap(await doFetch(`${baseUrl}/v1/scenarios/${id}/cost`));
    },

    async startRun(
      id: string,
      overrides: { duration_s?: number; seed?: number; dt_s?: number; terminals?: unknown[] }
    ): Promise<RunHandle> {
      return unwrap(
        await doFetch(`${baseUrl}/v1/scenarios/${id}/simulate`, { method: "POST", ...json(overrides) })
      );
    },

    async getRun(runId: string): Promise<RunHandle> {
      return unwrap(await doFetch(`${baseUrl}/v1/runs/${runId}`));
    },

    async getMetricsPage(runId: string, fromT: number, limit: number): Promise<MetricsPage> {
      return unwrap(
        await doFetch(`${baseUrl}/v1/runs/${runId}/metrics?from_t=${fromT}&limit=${limit}`)
      );
    },
  };
}

export type PlannerApi = ReturnType<typeof createClient>;
