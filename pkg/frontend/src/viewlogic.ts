/** Pure presentation rules: everything here is a function of server state and
 * the manifest, so the render layer stays a mechanical DOM projection. */

import type {
  Manifest,
  ManifestProcedure,
  ManifestStep,
  ModuleName,
  PracticeSnapshot,
  SafetyNotice,
  SessionSnapshot,
} from "./types";
import { MODULE_ORDER } from "./types";

export interface TabState {
  module: ModuleName;
  label: string;
  locked: boolean;
  completed: boolean;
  active: boolean;
}

const TAB_LABELS: Record<ModuleName, string> = {
  FAMILIARIZATION: "Part Familiarization",
  PROCEDURE: "Procedure",
  PRACTICE: "Practice",
};

export function activeModule(snapshot: SessionSnapshot): ModuleName {
  return snapshot.entered ?? "FAMILIARIZATION";
}

export function tabStates(snapshot: SessionSnapshot): TabState[] {
  const active = activeModule(snapshot);
  return MODULE_ORDER.map((module) => ({
    module,
    label: TAB_LABELS[module],
    locked: !snapshot.accessible.includes(module),
    completed: snapshot.completed.includes(module),
    active: module === active,
  }));
}

/** Warnings always render before cautions, stable within each kind. */
export function orderNotices(notices: SafetyNotice[]): SafetyNotice[] {
  return [
    ...notices.filter((n) => n.kind === "WARNING"),
    ...notices.filter((n) => n.kind === "CAUTION"),
  ];
}

export interface CalloutView {
  part_number: string;
  nomenclature: string;
  tool: string | null;
  torque: string | null;
}

export function calloutFor(step: ManifestStep, manifest: Manifest): CalloutView {
  const part = manifest.assembly.parts.find((p) => p.part_number === step.part_number);
  return {
    part_number: step.part_number,
    nomenclature: part ? part.nomenclature : step.part_number,
    tool: step.tool ?? null,
    torque: step.torque !== undefined && step.torque !== null ? `${step.torque} N·m` : null,
  };
}

/** Parts attached to the assembly while playing a given step. */
export function playbackVisibleParts(
  proc: ManifestProcedure,
  currentStep: number,
  finished: boolean,
): Set<string> {
  const visible = new Set<string>();
  for (const step of proc.steps) {
    const done = finished || step.index < currentStep;
    const inProgress = !finished && step.index === currentStep;
    if (proc.direction === "INSTALLATION") {
      // parts appear as their install step plays out
      if (done || inProgress) visible.add(step.part_number);
    } else {
      // parts disappear once their removal step is done
      if (!done) visible.add(step.part_number);
    }
  }
  return visible;
}

/** Parts attached to the assembly during practice (pure mirror of the server). */
export function practiceVisibleParts(practice: PracticeSnapshot): Set<string> {
  return new Set(practice.on_assembly);
}

/** Chips the trainee can pick up, in a stable display order. */
export function movableParts(practice: PracticeSnapshot): string[] {
  const movable = practice.direction === "INSTALLATION" ? practice.bin : practice.on_assembly;
  return [...movable].sort();
}

export function dragSourceLabel(practice: PracticeSnapshot): string {
  return practice.direction === "INSTALLATION" ? "Parts bin" : "On assembly";
}

export function dropTargetLabel(practice: PracticeSnapshot): string {
  return practice.direction === "INSTALLATION" ? "Assembly" : "Removal bin";
}

export function selectionProgress(snapshot: SessionSnapshot, manifest: Manifest): string {
  const total = manifest.assembly.parts.length;
  return `${snapshot.familiarization.selected_parts.length} of ${total} parts viewed`;
}
