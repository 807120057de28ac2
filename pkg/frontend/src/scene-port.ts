/** Interface between the screens and the 3D layer, so the UI logic can run
 * (and be tested) without WebGL. */

import type { Keyframe } from "./types";

export interface AssemblyView {
  /** Set per-part opacity exactly as given by the server's opacity map. */
  applyOpacityMap(map: Record<string, number>): void;
  /** Which parts are currently attached to the assembly. */
  setVisibleParts(parts: Set<string>): void;
  /** Animate one part along a keyframe track; onDone fires when it ends. */
  playTrack(track: Keyframe[], onDone: () => void): void;
  stopTrack(): void;
  /** Mirror one part into the secondary window (null clears it). */
  showSecondary(partNumber: string | null): void;
  dispose(): void;
}

/** Call-recording stand-in used in tests and as a no-WebGL fallback. */
export class HeadlessAssemblyView implements AssemblyView {
  opacityMap: Record<string, number> = {};
  visibleParts = new Set<string>();
  secondary: string | null = null;
  playedTracks: Keyframe[][] = [];
  private pendingDone: (() => void) | null = null;
  /** When false, tracks wait for finishPendingTrack() (test control). */
  autoFinishTracks = true;

  applyOpacityMap(map: Record<string, number>): void {
    this.opacityMap = { ...map };
  }

  setVisibleParts(parts: Set<string>): void {
    this.visibleParts = new Set(parts);
  }

  playTrack(track: Keyframe[], onDone: () => void): void {
    this.playedTracks.push(track);
    if (this.autoFinishTracks) {
      onDone();
    } else {
      this.pendingDone = onDone;
    }
  }

  finishPendingTrack(): void {
    const done = this.pendingDone;
    this.pendingDone = null;
    done?.();
  }

  stopTrack(): void {
    this.pendingDone = null;
  }

  showSecondary(partNumber: string | null): void {
    this.secondary = partNumber;
  }

  dispose(): void {
    this.stopTrack();
  }
}
