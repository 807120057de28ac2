import { describe, expect, it } from "vitest";

import type { PracticeSnapshot, SessionSnapshot } from "../src/types";
import {
  activeModule,
  calloutFor,
  movableParts,
  orderNotices,
  playbackVisibleParts,
  tabStates,
} from "../src/viewlogic";
import { FIXTURE_MANIFEST } from "./fixture";

function snapshotWith(partial: Partial<SessionSnapshot>): SessionSnapshot {
  return {
    session_id: "s",
    trainee_id: "t",
    course_id: "gear-box",
    procedure_id: "install-gear-box",
    completed: [],
    entered: "FAMILIARIZATION",
    accessible: ["FAMILIARIZATION"],
    event_count: 1,
    last_timestamp_ms: 0,
    familiarization: {
      selection: null,
      secondary_model: null,
      context_view_enabled: false,
      opacity_map: { "GB-1": 1, "GB-2": 1, "GB-3": 1 },
      selected_parts: [],
    },
    playback: null,
    practice: null,
    ...partial,
  };
}

describe("tab states", () => {
  it("locks modules the server reports inaccessible", () => {
    const tabs = tabStates(snapshotWith({}));
    expect(tabs.map((t) => t.locked)).toEqual([false, true, true]);
    expect(tabs[0].active).toBe(true);
  });

  it("unlocks in server-given order and marks completion", () => {
    const tabs = tabStates(
      snapshotWith({
        completed: ["FAMILIARIZATION"],
        accessible: ["FAMILIARIZATION", "PROCEDURE"],
        entered: "PROCEDURE",
      }),
    );
    expect(tabs.map((t) => t.locked)).toEqual([false, false, true]);
    expect(tabs[0].completed).toBe(true);
    expect(tabs[1].active).toBe(true);
  });

  it("falls back to familiarization when nothing is entered", () => {
    expect(activeModule(snapshotWith({ entered: null }))).toBe("FAMILIARIZATION");
  });
});

describe("notice ordering", () => {
  it("renders warnings before cautions, stable within kinds", () => {
    const ordered = orderNotices([
      { kind: "CAUTION", text: "c1" },
      { kind: "WARNING", text: "w1" },
      { kind: "CAUTION", text: "c2" },
      { kind: "WARNING", text: "w2" },
    ]);
    expect(ordered.map((n) => n.text)).toEqual(["w1", "w2", "c1", "c2"]);
  });
});

describe("callout", () => {
  it("pairs the step with the part nomenclature and formats torque", () => {
    const step = FIXTURE_MANIFEST.procedures[0].steps[1];
    const callout = calloutFor(step, FIXTURE_MANIFEST);
    expect(callout).toEqual({
      part_number: "GB-2",
      nomenclature: "Gear Train",
      tool: "T-10",
      torque: "12 N·m",
    });
  });

  it("leaves tool and torque empty when the step has none", () => {
    const step = FIXTURE_MANIFEST.procedures[0].steps[0];
    const callout = calloutFor(step, FIXTURE_MANIFEST);
    expect(callout.tool).toBeNull();
    expect(callout.torque).toBeNull();
  });
});

describe("playback visibility", () => {
  const install = FIXTURE_MANIFEST.procedures[0];
  const removal = FIXTURE_MANIFEST.procedures[1];

  it("installation reveals parts step by step", () => {
    expect(playbackVisibleParts(install, 0, false)).toEqual(new Set(["GB-1"]));
    expect(playbackVisibleParts(install, 2, false)).toEqual(
      new Set(["GB-1", "GB-2", "GB-3"]),
    );
    expect(playbackVisibleParts(install, 2, true)).toEqual(
      new Set(["GB-1", "GB-2", "GB-3"]),
    );
  });

  it("removal strips parts step by step", () => {
    expect(playbackVisibleParts(removal, 0, false)).toEqual(
      new Set(["GB-1", "GB-2", "GB-3"]),
    );
    expect(playbackVisibleParts(removal, 1, false)).toEqual(new Set(["GB-1", "GB-2"]));
    expect(playbackVisibleParts(removal, 2, true)).toEqual(new Set());
  });
});

describe("practice chips", () => {
  it("movable parts come from bin for installation", () => {
    const practice: PracticeSnapshot = {
      direction: "INSTALLATION",
      bin: ["GB-3", "GB-2"],
      on_assembly: ["GB-1"],
      placed: ["GB-1"],
      steps_done: 1,
      steps_total: 3,
      wrong_attempts: 0,
      per_step_wrong: [0, 0, 0],
      complete: false,
      active_alert: null,
    };
    expect(movableParts(practice)).toEqual(["GB-2", "GB-3"]);
  });

  it("movable parts come from the assembly for removal", () => {
    const practice: PracticeSnapshot = {
      direction: "REMOVAL",
      bin: ["GB-3"],
      on_assembly: ["GB-1", "GB-2"],
      placed: ["GB-3"],
      steps_done: 1,
      steps_total: 3,
      wrong_attempts: 0,
      per_step_wrong: [0, 0, 0],
      complete: false,
      active_alert: null,
    };
    expect(movableParts(practice)).toEqual(["GB-1", "GB-2"]);
  });
});
