/** Client-side session view model.
 *
 * A thin mirror of the server's authoritative session state: every mutation
 * goes through the API and replaces the snapshot with what the server
 * returned. The store refuses to enter modules the server reports locked and
 * serializes practice attempts (one in flight, later drags queue up).
 */

import { ApiClient } from "./api";
import type {
  AttemptResult,
  Manifest,
  ManifestProcedure,
  ModuleName,
  SessionMetrics,
  SessionSnapshot,
} from "./types";

export type SnapshotListener = (snapshot: SessionSnapshot) => void;

export class SessionStore {
  private current: SessionSnapshot;
  private readonly listeners = new Set<SnapshotListener>();
  private attemptQueue: Promise<unknown> = Promise.resolve();
  private readonly clockBaseMs: number;
  private readonly openedAtMs: number;
  private lastSentMs: number;

  private constructor(
    readonly api: ApiClient,
    readonly manifest: Manifest,
    snapshot: SessionSnapshot,
  ) {
    this.current = snapshot;
    this.clockBaseMs = snapshot.last_timestamp_ms;
    this.lastSentMs = snapshot.last_timestamp_ms;
    this.openedAtMs = Date.now();
  }

  /** Start a brand-new session on one procedure. */
  static async create(
    api: ApiClient,
    traineeId: string,
    courseId: string,
    procedureId: string,
  ): Promise<SessionStore> {
    const sessionId = await api.createSession(traineeId, courseId, procedureId);
    const snapshot = await api.getSession(sessionId);
    const manifest = await api.getManifest(snapshot.course_id);
    return new SessionStore(api, manifest, snapshot);
  }

  /** Rebuild the view of an existing session purely from GET endpoints. */
  static async resume(api: ApiClient, sessionId: string): Promise<SessionStore> {
    const snapshot = await api.getSession(sessionId);
    const manifest = await api.getManifest(snapshot.course_id);
    return new SessionStore(api, manifest, snapshot);
  }

  get snapshot(): SessionSnapshot {
    return this.current;
  }

  get sessionId(): string {
    return this.current.session_id;
  }

  procedure(): ManifestProcedure {
    const proc = this.manifest.procedures.find(
      (p) => p.procedure_id === this.current.procedure_id,
    );
    if (!proc) throw new Error(`procedure ${this.current.procedure_id} not in manifest`);
    return proc;
  }

  subscribe(listener: SnapshotListener): () => void {
    this.listeners.add(listener);
    return () => this.listeners.delete(listener);
  }

  private publish(snapshot: SessionSnapshot): SessionSnapshot {
    this.current = snapshot;
    for (const listener of this.listeners) listener(snapshot);
    return snapshot;
  }

  /** Milliseconds since session start, never going backwards. */
  now(): number {
    const elapsed = this.clockBaseMs + Math.round(Date.now() - this.openedAtMs);
    this.lastSentMs = Math.max(this.lastSentMs, elapsed);
    return this.lastSentMs;
  }

  canEnter(module: ModuleName): boolean {
    return this.current.accessible.includes(module);
  }

  isCompleted(module: ModuleName): boolean {
    return this.current.completed.includes(module);
  }

  /** Enter a module; a locked module is refused locally, without a request. */
  async enterModule(module: ModuleName): Promise<boolean> {
    if (!this.canEnter(module)) return false;
    this.publish(
      await this.api.postEvent(this.sessionId, {
        kind: "MODULE_ENTER",
        module,
        timestamp_ms: this.now(),
      }),
    );
    return true;
  }

  async completeModule(module: ModuleName): Promise<SessionSnapshot> {
    return this.publish(
      await this.api.postEvent(this.sessionId, {
        kind: "MODULE_COMPLETE",
        module,
        timestamp_ms: this.now(),
      }),
    );
  }

  async selectPart(partNumber: string): Promise<SessionSnapshot> {
    return this.publish(
      await this.api.postEvent(this.sessionId, {
        kind: "PART_SELECTED",
        part_number: partNumber,
        timestamp_ms: this.now(),
      }),
    );
  }

  async setContextView(enabled: boolean): Promise<SessionSnapshot> {
    return this.publish(await this.api.setContextView(this.sessionId, enabled));
  }

  /** The current step's animation finished and the trainee moved on. */
  async stepViewed(stepIndex: number): Promise<SessionSnapshot> {
    return this.publish(
      await this.api.postEvent(this.sessionId, {
        kind: "STEP_VIEWED",
        step_index: stepIndex,
        timestamp_ms: this.now(),
      }),
    );
  }

  async replayStep(stepIndex: number): Promise<SessionSnapshot> {
    return this.publish(
      await this.api.postEvent(this.sessionId, {
        kind: "STEP_REPLAYED",
        step_index: stepIndex,
        timestamp_ms: this.now(),
      }),
    );
  }

  /** Adjudicate one drag. Attempts are strictly serialized. */
  attempt(partNumber: string): Promise<AttemptResult> {
    const run = this.attemptQueue.then(async () => {
      const result = await this.api.postAttempt(this.sessionId, partNumber, this.now());
      this.publish(await this.api.getSession(this.sessionId));
      return result;
    });
    this.attemptQueue = run.catch(() => undefined);
    return run;
  }

  async acknowledgeAlert(): Promise<SessionSnapshot> {
    return this.publish(
      await this.api.postEvent(this.sessionId, {
        kind: "ALERT_ACKNOWLEDGED",
        timestamp_ms: this.now(),
      }),
    );
  }

  metrics(): Promise<SessionMetrics> {
    return this.api.getMetrics(this.sessionId);
  }
}
