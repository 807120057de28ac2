/** A small three-part course used by the UI tests. */

import type { Keyframe, Manifest } from "../src/types";

export const FIXTURE_MANIFEST: Manifest = {
  course_id: "gear-box",
  title: "Gear Box Installation",
  dim_opacity: 0.2,
  assembly: {
    assembly_id: "gear-box-asm",
    name: "Gear Box",
    parts: [
      {
        part_number: "GB-1",
        nomenclature: "Casing",
        mesh_ref: "meshes/gb-1.glb",
        default_transform: { position: [0, 0, 0], rotation: [0, 0, 0, 1] },
      },
      {
        part_number: "GB-2",
        nomenclature: "Gear Train",
        mesh_ref: "meshes/gb-2.glb",
        default_transform: { position: [0, 0.2, 0], rotation: [0, 0, 0, 1] },
      },
      {
        part_number: "GB-3",
        nomenclature: "End Cover",
        mesh_ref: "meshes/gb-3.glb",
        default_transform: { position: [0, 0.4, 0], rotation: [0, 0, 0, 1] },
      },
    ],
  },
  procedures: [
    {
      procedure_id: "install-gear-box",
      direction: "INSTALLATION",
      pre_steps: ["Lock out the drive."],
      post_steps: ["Run-in test at low speed."],
      required_tools: ["T-10"],
      consumables: ["Gear oil"],
      spares: [],
      steps: [
        {
          index: 0,
          action: "INSTALL",
          part_number: "GB-1",
          callout_text: "Seat the casing.",
          notices: [
            { kind: "CAUTION", text: "Keep the mating face clean." },
            { kind: "WARNING", text: "Heavy part, lift with two hands." },
          ],
          animation_ref: "animations/install-step-0.json",
          narration_ref: "audio/install-step-0.ogg",
        },
        {
          index: 1,
          action: "INSTALL",
          part_number: "GB-2",
          callout_text: "Mesh the gear train.",
          tool: "T-10",
          torque: 12.0,
          notices: [],
          animation_ref: "animations/install-step-1.json",
        },
        {
          index: 2,
          action: "INSTALL",
          part_number: "GB-3",
          callout_text: "Fit the end cover.",
          tool: "T-10",
          torque: 8.0,
          notices: [{ kind: "CAUTION", text: "Do not pinch the gasket." }],
          animation_ref: "animations/install-step-2.json",
        },
      ],
    },
    {
      procedure_id: "remove-gear-box",
      direction: "REMOVAL",
      pre_steps: [],
      post_steps: [],
      required_tools: ["T-10"],
      consumables: [],
      spares: [],
      steps: [
        {
          index: 0,
          action: "REMOVE",
          part_number: "GB-3",
          callout_text: "Free the end cover.",
          tool: "T-10",
          notices: [],
        },
        {
          index: 1,
          action: "REMOVE",
          part_number: "GB-2",
          callout_text: "Lift out the gear train.",
          notices: [],
        },
        {
          index: 2,
          action: "REMOVE",
          part_number: "GB-1",
          callout_text: "Lift the casing clear.",
          notices: [],
        },
      ],
    },
  ],
};

export function fixtureTrack(partNumber: string): Keyframe[] {
  return [
    { time_s: 0, part_number: partNumber, position: [0.9, 0, 0], rotation: [0, 0, 0, 1] },
    { time_s: 2, part_number: partNumber, position: [0, 0, 0], rotation: [0, 0, 0, 1] },
  ];
}
