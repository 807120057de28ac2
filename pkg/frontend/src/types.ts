/** Wire types for the courseware service API. */

export type ModuleName = "FAMILIARIZATION" | "PROCEDURE" | "PRACTICE";
export type Direction = "REMOVAL" | "INSTALLATION";
export type NoticeKind = "WARNING" | "CAUTION";

export const MODULE_ORDER: ModuleName[] = ["FAMILIARIZATION", "PROCEDURE", "PRACTICE"];

export interface ProcedureSummary {
  procedure_id: string;
  direction: Direction;
  step_count: number;
}

export interface CourseEntry {
  course_id: string;
  title: string;
  procedures: ProcedureSummary[];
}

export interface Pose {
  position: [number, number, number];
  rotation: [number, number, number, number];
}

export interface ManifestPart {
  part_number: string;
  nomenclature: string;
  mesh_ref: string;
  default_transform: Pose;
}

export interface SafetyNotice {
  kind: NoticeKind;
  text: string;
}

export interface ManifestStep {
  index: number;
  action: "INSTALL" | "REMOVE";
  part_number: string;
  callout_text: string;
  tool?: string;
  torque?: number;
  notices: SafetyNotice[];
  animation_ref?: string;
  narration_ref?: string;
}

export interface ManifestProcedure {
  procedure_id: string;
  direction: Direction;
  pre_steps: string[];
  post_steps: string[];
  required_tools: string[];
  consumables: string[];
  spares: string[];
  steps: ManifestStep[];
}

export interface Manifest {
  course_id: string;
  title: string;
  dim_opacity: number;
  assembly: {
    assembly_id: string;
    name: string;
    parts: ManifestPart[];
  };
  procedures: ManifestProcedure[];
}

export interface FamiliarizationSnapshot {
  selection: string | null;
  secondary_model: string | null;
  context_view_enabled: boolean;
  opacity_map: Record<string, number>;
  selected_parts: string[];
}

export interface PlaybackSnapshot {
  current_step: number;
  status: "PLAYING" | "PAUSED" | "STEP_DONE" | "FINISHED";
  step_count: number;
  replay_count: number[];
  steps_seen: number[];
  cued_narration: string | null;
}

export interface AlertInfo {
  message: string;
  offending_part: string;
  expected_part: string;
}

export interface PracticeSnapshot {
  direction: Direction;
  bin: string[];
  on_assembly: string[];
  placed: string[];
  steps_done: number;
  steps_total: number;
  wrong_attempts: number;
  per_step_wrong: number[];
  complete: boolean;
  active_alert: AlertInfo | null;
}

export interface SessionSnapshot {
  session_id: string;
  trainee_id: string;
  course_id: string;
  procedure_id: string;
  completed: ModuleName[];
  entered: ModuleName | null;
  accessible: ModuleName[];
  event_count: number;
  last_timestamp_ms: number;
  familiarization: FamiliarizationSnapshot;
  playback: PlaybackSnapshot | null;
  practice: PracticeSnapshot | null;
}

export interface PracticeProgress {
  steps_done: number;
  steps_total: number;
  wrong_attempts: number;
  complete: boolean;
}

export interface AttemptResult {
  result: "accepted" | "rejected";
  alert: AlertInfo | null;
  progress: PracticeProgress;
}

export interface SessionMetrics {
  training_minutes: number;
  task_minutes: number | null;
  wrong_attempts: number;
  replays: number;
}

/** One keyframe of an animation track asset. */
export interface Keyframe {
  time_s: number;
  part_number: string;
  position: [number, number, number];
  rotation: [number, number, number, number];
}

export type EventBody =
  | { kind: "MODULE_ENTER" | "MODULE_COMPLETE"; module: ModuleName; timestamp_ms?: number }
  | { kind: "PART_SELECTED"; part_number: string; timestamp_ms?: number }
  | { kind: "STEP_VIEWED" | "STEP_REPLAYED"; step_index: number; timestamp_ms?: number }
  | { kind: "ALERT_ACKNOWLEDGED"; timestamp_ms?: number };
