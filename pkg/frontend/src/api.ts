/** Thin typed client for the courseware service; every decision the UI shows
 * comes back from these endpoints, never from local logic. */

import type {
  AttemptResult,
  CourseEntry,
  EventBody,
  Keyframe,
  Manifest,
  SessionMetrics,
  SessionSnapshot,
} from "./types";

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly detail: string,
  ) {
    super(`HTTP ${status}: ${detail}`);
  }
}

export class ApiClient {
  private readonly fetchImpl: FetchLike;

  constructor(
    readonly baseUrl: string = "",
    fetchImpl?: FetchLike,
  ) {
    this.fetchImpl = fetchImpl ?? ((input, init) => fetch(input, init));
  }

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const init: RequestInit = { method, headers: { "content-type": "application/json" } };
    if (body !== undefined) init.body = JSON.stringify(body);
    const response = await this.fetchImpl(this.baseUrl + path, init);
    if (!response.ok) {
      let detail = response.statusText;
      try {
        const parsed = (await response.json()) as { detail?: string };
        if (parsed.detail) detail = parsed.detail;
      } catch {
        // non-JSON error body; keep the status text
      }
      throw new ApiError(response.status, detail);
    }
    return (await response.json()) as T;
  }

  listCourses(): Promise<CourseEntry[]> {
    return this.request("GET", "/courses");
  }

  getManifest(courseId: string): Promise<Manifest> {
    return this.request("GET", `/courses/${encodeURIComponent(courseId)}/package`);
  }

  assetUrl(courseId: string, assetPath: string): string {
    return `${this.baseUrl}/courses/${encodeURIComponent(courseId)}/assets/${assetPath}`;
  }

  async getAnimation(courseId: string, assetPath: string): Promise<Keyframe[]> {
    const response = await this.fetchImpl(this.assetUrl(courseId, assetPath));
    if (!response.ok) throw new ApiError(response.status, `asset ${assetPath}`);
    return (await response.json()) as Keyframe[];
  }

  async createSession(
    traineeId: string,
    courseId: string,
    procedureId: string,
  ): Promise<string> {
    const made = await this.request<{ session_id: string }>("POST", "/sessions", {
      trainee_id: traineeId,
      course_id: courseId,
      procedure_id: procedureId,
    });
    return made.session_id;
  }

  getSession(sessionId: string): Promise<SessionSnapshot> {
    return this.request("GET", `/sessions/${encodeURIComponent(sessionId)}`);
  }

  postEvent(sessionId: string, event: EventBody): Promise<SessionSnapshot> {
    return this.request("POST", `/sessions/${encodeURIComponent(sessionId)}/events`, event);
  }

  postAttempt(
    sessionId: string,
    partNumber: string,
    timestampMs?: number,
  ): Promise<AttemptResult> {
    return this.request(
      "POST",
      `/sessions/${encodeURIComponent(sessionId)}/practice/attempts`,
      { part_number: partNumber, timestamp_ms: timestampMs },
    );
  }

  setContextView(sessionId: string, enabled: boolean): Promise<SessionSnapshot> {
    return this.request(
      "POST",
      `/sessions/${encodeURIComponent(sessionId)}/familiarization/context`,
      { enabled },
    );
  }

  getMetrics(sessionId: string): Promise<SessionMetrics> {
    return this.request("GET", `/sessions/${encodeURIComponent(sessionId)}/metrics`);
  }
}
