import type {
  EditDoc,
  FrameworkDoc,
  SessionView,
  VerifyRequest,
  VerifyResponse,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    readonly status: number,
    message: string,
  ) {
    super(message);
    this.name = "ApiError";
  }
}

export type FetchLike = (
  url: string,
  init?: { method?: string; headers?: Record<string, string>; body?: string },
) => Promise<{ ok: boolean; status: number; json(): Promise<unknown> }>;

/** Thin typed client over the verification service's JSON API. */
export class ApiClient {
  constructor(
    private readonly baseUrl: string,
    private readonly fetchImpl: FetchLike = (url, init) => fetch(url, init),
  ) {}

  semantics(): Promise<{ semantics: string[] }> {
    return this.request("GET", "/semantics");
  }

  verify(body: VerifyRequest): Promise<VerifyResponse> {
    return this.request("POST", "/verify", body);
  }

  openSession(qbaf: FrameworkDoc, semantics?: string): Promise<SessionView> {
    return this.request("POST", "/sessions", { qbaf, semantics });
  }

  getSession(sessionId: string): Promise<SessionView> {
    return this.request("GET", `/sessions/${encodeURIComponent(sessionId)}`);
  }

  contest(sessionId: string, edit: EditDoc): Promise<SessionView> {
    return this.request(
      "POST",
      `/sessions/${encodeURIComponent(sessionId)}/contest`,
      edit,
    );
  }

  private async request<T>(
    method: string,
    path: string,
    body?: unknown,
  ): Promise<T> {
    const response = await this.fetchImpl(this.baseUrl + path, {
      method,
      headers: body === undefined ? undefined : { "Content-Type": "application/json" },
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    const payload = (await response.json()) as Record<string, unknown>;
    if (!response.ok) {
      const detail =
        typeof payload?.error === "string" ? payload.error : `HTTP ${response.status}`;
      throw new ApiError(response.status, detail);
    }
    return payload as T;
  }
}
