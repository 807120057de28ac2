/** Application shell: module tabs gated by the server, and one screen per
 * courseware module. The DOM is a projection of the latest server snapshot;
 * no training decision is ever taken locally. */

import { ApiError } from "./api";
import type { AssemblyView } from "./scene-port";
import { SessionStore } from "./state";
import type { ManifestStep, ModuleName, SessionSnapshot } from "./types";
import {
  activeModule,
  calloutFor,
  dragSourceLabel,
  dropTargetLabel,
  movableParts,
  orderNotices,
  playbackVisibleParts,
  practiceVisibleParts,
  selectionProgress,
  tabStates,
} from "./viewlogic";

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

export class TraineeApp {
  private readonly tabs: HTMLElement;
  private readonly panel: HTMLElement;
  private readonly overlay: HTMLElement;
  private readonly modal: HTMLElement;
  private readonly status: HTMLElement;
  private readonly secondaryCaption: HTMLElement;
  private readonly narration: HTMLAudioElement;

  /** Step index whose animation has finished (enables Next). */
  private animationDoneFor: number | null = null;
  /** Step index whose animation is currently loaded/playing. */
  private playingStep: number | null = null;
  private unsubscribe: () => void;
  readonly view: AssemblyView;

  constructor(
    readonly root: HTMLElement,
    readonly store: SessionStore,
    viewFactory: (mainWindow: HTMLElement, secondaryCanvas: HTMLElement) => AssemblyView,
  ) {
    root.innerHTML = "";
    root.classList.add("mtrain-app");

    const header = el("header");
    header.appendChild(el("h1", "course-title", store.manifest.title));
    this.tabs = el("nav", "tabs");
    this.tabs.dataset.testid = "tabs";
    header.appendChild(this.tabs);
    root.appendChild(header);

    const main = el("main");
    this.panel = el("aside", "panel");
    this.panel.dataset.testid = "panel";
    main.appendChild(this.panel);

    const viewport = el("section", "viewport");
    const mainWindow = el("div", "main-window");
    mainWindow.dataset.testid = "main-window";
    viewport.appendChild(mainWindow);
    this.overlay = el("div", "overlay");
    this.overlay.dataset.testid = "overlay";
    viewport.appendChild(this.overlay);
    main.appendChild(viewport);

    const sidebar = el("aside", "sidebar");
    const secondary = el("div", "secondary-window");
    secondary.appendChild(el("h2", undefined, "Secondary window"));
    const secondaryCanvas = el("div", "secondary-canvas");
    secondaryCanvas.dataset.testid = "secondary-canvas";
    secondary.appendChild(secondaryCanvas);
    this.secondaryCaption = el("p", "secondary-caption");
    this.secondaryCaption.dataset.testid = "secondary-caption";
    secondary.appendChild(this.secondaryCaption);
    sidebar.appendChild(secondary);
    main.appendChild(sidebar);
    root.appendChild(main);

    this.modal = el("div", "modal-backdrop hidden");
    this.modal.dataset.testid = "alert-modal";
    root.appendChild(this.modal);

    this.status = el("footer", "status");
    this.status.dataset.testid = "status";
    root.appendChild(this.status);

    this.narration = document.createElement("audio");
    this.narration.autoplay = true;

    this.view = viewFactory(mainWindow, secondaryCanvas);
    this.unsubscribe = store.subscribe((snapshot) => this.render(snapshot));
    this.render(store.snapshot);
  }

  dispose(): void {
    this.unsubscribe();
    this.view.dispose();
  }

  private toast(message: string): void {
    this.status.textContent = message;
  }

  private async guarded(action: () => Promise<unknown>): Promise<void> {
    try {
      this.status.textContent = "";
      await action();
    } catch (error) {
      if (error instanceof ApiError) {
        this.toast(error.detail);
      } else {
        this.toast(String(error));
      }
    }
  }

  // --- rendering -------------------------------------------------------------

  private render(snapshot: SessionSnapshot): void {
    this.renderTabs(snapshot);
    const module = activeModule(snapshot);
    if (module === "FAMILIARIZATION") this.renderFamiliarization(snapshot);
    else if (module === "PROCEDURE") this.renderPlayback(snapshot);
    else this.renderPractice(snapshot);
    this.renderModal(snapshot);
  }

  private renderTabs(snapshot: SessionSnapshot): void {
    this.tabs.innerHTML = "";
    for (const tab of tabStates(snapshot)) {
      const button = el("button", "tab", tab.label);
      button.dataset.module = tab.module;
      if (tab.active) button.classList.add("active");
      if (tab.completed) button.classList.add("completed");
      if (tab.locked) {
        // the server reported this module locked: never request a transition
        button.classList.add("locked");
        button.disabled = true;
        button.title = "Complete the previous module first";
      } else {
        button.addEventListener("click", () =>
          this.guarded(() => this.store.enterModule(tab.module)),
        );
      }
      this.tabs.appendChild(button);
    }
  }

  // --- familiarization ---------------------------------------------------------

  private renderFamiliarization(snapshot: SessionSnapshot): void {
    const fam = snapshot.familiarization;
    this.view.applyOpacityMap(fam.opacity_map);
    this.view.setVisibleParts(
      new Set(this.store.manifest.assembly.parts.map((p) => p.part_number)),
    );
    this.view.showSecondary(fam.secondary_model);
    const part = this.store.manifest.assembly.parts.find(
      (p) => p.part_number === fam.secondary_model,
    );
    this.secondaryCaption.textContent = part
      ? `${part.part_number} — ${part.nomenclature}`
      : "Select a part from the list";

    this.panel.innerHTML = "";
    this.panel.appendChild(el("h2", undefined, "Parts list"));
    const list = el("ul", "parts-list");
    list.dataset.testid = "parts-list";
    for (const p of this.store.manifest.assembly.parts) {
      const row = el("li", "part-row");
      row.dataset.part = p.part_number;
      if (p.part_number === fam.selection) row.classList.add("selected");
      if (fam.selected_parts.includes(p.part_number)) row.classList.add("seen");
      row.appendChild(el("span", "part-number", p.part_number));
      row.appendChild(el("span", "part-name", p.nomenclature));
      row.appendChild(
        el("span", "part-opacity", fam.opacity_map[p.part_number].toFixed(2)),
      );
      row.addEventListener("click", () =>
        this.guarded(() => this.store.selectPart(p.part_number)),
      );
      list.appendChild(row);
    }
    this.panel.appendChild(list);

    const toggleRow = el("label", "context-toggle");
    const toggle = el("input") as HTMLInputElement;
    toggle.type = "checkbox";
    toggle.checked = fam.context_view_enabled;
    toggle.dataset.testid = "context-toggle";
    toggle.addEventListener("change", () =>
      this.guarded(() => this.store.setContextView(toggle.checked)),
    );
    toggleRow.appendChild(toggle);
    toggleRow.appendChild(el("span", undefined, "Context view"));
    this.panel.appendChild(toggleRow);

    this.panel.appendChild(el("p", "progress", selectionProgress(snapshot, this.store.manifest)));
    this.panel.appendChild(
      this.completeButton(snapshot, "FAMILIARIZATION", "Finish familiarization"),
    );
    this.overlay.innerHTML = "";
  }

  private completeButton(
    snapshot: SessionSnapshot,
    module: ModuleName,
    label: string,
  ): HTMLElement {
    const button = el("button", "complete-module", label);
    button.dataset.testid = `complete-${module.toLowerCase()}`;
    if (snapshot.completed.includes(module)) {
      button.disabled = true;
      button.textContent = "Module completed";
    } else {
      button.addEventListener("click", () =>
        this.guarded(() => this.store.completeModule(module)),
      );
    }
    return button;
  }

  // --- procedure playback -------------------------------------------------------

  private currentStep(snapshot: SessionSnapshot): ManifestStep | null {
    const playback = snapshot.playback;
    if (!playback) return null;
    return this.store.procedure().steps[playback.current_step] ?? null;
  }

  private renderPlayback(snapshot: SessionSnapshot): void {
    const playback = snapshot.playback;
    const proc = this.store.procedure();
    if (!playback) return;
    const finished = playback.status === "FINISHED";
    this.view.applyOpacityMap(
      Object.fromEntries(this.store.manifest.assembly.parts.map((p) => [p.part_number, 1.0])),
    );
    this.view.setVisibleParts(playbackVisibleParts(proc, playback.current_step, finished));
    this.view.showSecondary(null);
    this.secondaryCaption.textContent = "";

    this.panel.innerHTML = "";
    this.panel.appendChild(el("h2", undefined, `Procedure: ${proc.direction.toLowerCase()}`));
    const stepLabel = el(
      "p",
      "step-indicator",
      finished
        ? `All ${playback.step_count} steps viewed`
        : `Step ${playback.current_step + 1} of ${playback.step_count}`,
    );
    stepLabel.dataset.testid = "step-indicator";
    this.panel.appendChild(stepLabel);

    if (proc.pre_steps.length) {
      this.panel.appendChild(el("h3", undefined, "Before you start"));
      const pre = el("ul", "pre-steps");
      proc.pre_steps.forEach((s) => pre.appendChild(el("li", undefined, s)));
      this.panel.appendChild(pre);
    }
    const resources = el("ul", "resources");
    if (proc.required_tools.length)
      resources.appendChild(el("li", undefined, `Tools: ${proc.required_tools.join(", ")}`));
    if (proc.consumables.length)
      resources.appendChild(el("li", undefined, `Consumables: ${proc.consumables.join(", ")}`));
    if (proc.spares.length)
      resources.appendChild(el("li", undefined, `Spares: ${proc.spares.join(", ")}`));
    if (resources.childElementCount) {
      this.panel.appendChild(el("h3", undefined, "Resources"));
      this.panel.appendChild(resources);
    }
    if (finished && proc.post_steps.length) {
      this.panel.appendChild(el("h3", undefined, "After completion"));
      const post = el("ul", "post-steps");
      proc.post_steps.forEach((s) => post.appendChild(el("li", undefined, s)));
      this.panel.appendChild(post);
    }

    const controls = el("div", "playback-controls");
    const replay = el("button", "replay", "Replay step");
    replay.dataset.testid = "replay-button";
    replay.disabled = finished;
    replay.addEventListener("click", () =>
      this.guarded(async () => {
        this.animationDoneFor = null;
        this.playingStep = null; // force the track to restart
        await this.store.replayStep(playback.current_step);
      }),
    );
    controls.appendChild(replay);

    const next = el(
      "button",
      "next",
      playback.current_step === playback.step_count - 1 ? "Finish procedure" : "Next step",
    );
    next.dataset.testid = "next-button";
    next.disabled = finished || this.animationDoneFor !== playback.current_step;
    next.addEventListener("click", () =>
      this.guarded(() => this.store.stepViewed(playback.current_step)),
    );
    controls.appendChild(next);
    this.panel.appendChild(controls);

    if (finished) {
      this.panel.appendChild(this.completeButton(snapshot, "PROCEDURE", "Finish procedure module"));
    }

    this.renderCallout(snapshot);
    if (!finished) this.ensureAnimation(snapshot);
  }

  private renderCallout(snapshot: SessionSnapshot): void {
    this.overlay.innerHTML = "";
    const playback = snapshot.playback;
    const step = this.currentStep(snapshot);
    if (!playback || !step || playback.status === "FINISHED") return;
    const callout = calloutFor(step, this.store.manifest);
    const box = el("div", "callout");
    box.dataset.testid = "callout";
    box.appendChild(el("strong", undefined, `${callout.part_number} ${callout.nomenclature}`));
    if (callout.tool) box.appendChild(el("span", "callout-tool", `Tool: ${callout.tool}`));
    if (callout.torque)
      box.appendChild(el("span", "callout-torque", `Torque: ${callout.torque}`));
    box.appendChild(el("p", "callout-text", step.callout_text));
    this.overlay.appendChild(box);

    // warnings are higher-salience and always render above cautions
    for (const notice of orderNotices(step.notices)) {
      const cls = notice.kind === "WARNING" ? "notice warning" : "notice caution";
      const panel = el("div", cls);
      panel.appendChild(el("strong", undefined, notice.kind));
      panel.appendChild(el("span", undefined, notice.text));
      this.overlay.appendChild(panel);
    }
  }

  private ensureAnimation(snapshot: SessionSnapshot): void {
    const playback = snapshot.playback;
    const step = this.currentStep(snapshot);
    if (!playback || !step) return;
    if (this.playingStep === playback.current_step) return;
    this.playingStep = playback.current_step;
    this.animationDoneFor = null;

    if (step.narration_ref) {
      this.narration.src = this.store.api.assetUrl(
        this.store.manifest.course_id,
        step.narration_ref,
      );
      try {
        void this.narration.play()?.catch(() => undefined);
      } catch {
        // narration is best-effort and never blocks the step
      }
    }

    const markDone = () => {
      this.animationDoneFor = step.index;
      this.render(this.store.snapshot);
    };
    if (!step.animation_ref) {
      // static step: show it with its callout and unlock Next immediately
      this.toast("No animation for this step; showing static view");
      markDone();
      return;
    }
    this.store.api
      .getAnimation(this.store.manifest.course_id, step.animation_ref)
      .then((track) => this.view.playTrack(track, markDone))
      .catch(() => {
        this.toast("Animation failed to load; showing static view");
        markDone();
      });
  }

  // --- practice -------------------------------------------------------------------

  private renderPractice(snapshot: SessionSnapshot): void {
    const practice = snapshot.practice;
    if (!practice) return;
    this.view.applyOpacityMap(
      Object.fromEntries(this.store.manifest.assembly.parts.map((p) => [p.part_number, 1.0])),
    );
    this.view.setVisibleParts(practiceVisibleParts(practice));
    this.view.showSecondary(null);
    this.secondaryCaption.textContent = "";
    this.overlay.innerHTML = "";

    this.panel.innerHTML = "";
    this.panel.appendChild(el("h2", undefined, "Practice"));
    const progress = el(
      "p",
      "progress",
      `${practice.steps_done} of ${practice.steps_total} steps · ` +
        `${practice.wrong_attempts} wrong attempts`,
    );
    progress.dataset.testid = "practice-progress";
    this.panel.appendChild(progress);

    const source = el("div", "chip-zone source");
    source.appendChild(el("h3", undefined, dragSourceLabel(practice)));
    const chipBox = el("div", "chips");
    chipBox.dataset.testid = "movable-chips";
    for (const partNumber of movableParts(practice)) {
      const part = this.store.manifest.assembly.parts.find(
        (p) => p.part_number === partNumber,
      );
      const chip = el("div", "chip", `${partNumber} ${part ? part.nomenclature : ""}`.trim());
      chip.dataset.part = partNumber;
      chip.draggable = true;
      chip.addEventListener("dragstart", (event) => {
        event.dataTransfer?.setData("text/plain", partNumber);
      });
      // click-to-move covers keyboard use and environments without native DnD
      chip.addEventListener("click", () => this.guarded(() => this.attemptPart(partNumber)));
      chipBox.appendChild(chip);
    }
    source.appendChild(chipBox);
    this.panel.appendChild(source);

    const target = el("div", "chip-zone target");
    target.dataset.testid = "drop-target";
    target.appendChild(el("h3", undefined, dropTargetLabel(practice)));
    const placedBox = el("div", "chips placed");
    placedBox.dataset.testid = "placed-chips";
    for (const partNumber of practice.placed) {
      placedBox.appendChild(el("div", "chip done", partNumber));
    }
    target.appendChild(placedBox);
    target.addEventListener("dragover", (event) => event.preventDefault());
    target.addEventListener("drop", (event) => {
      event.preventDefault();
      const partNumber = event.dataTransfer?.getData("text/plain");
      if (partNumber) void this.guarded(() => this.attemptPart(partNumber));
    });
    this.panel.appendChild(target);

    if (practice.complete) {
      this.panel.appendChild(el("p", "done-banner", "Procedure practiced successfully."));
      this.panel.appendChild(this.completeButton(snapshot, "PRACTICE", "Finish practice module"));
    }
    if (snapshot.completed.length === 3) {
      void this.renderSummary();
    }
  }

  private async attemptPart(partNumber: string): Promise<void> {
    const practice = this.store.snapshot.practice;
    // a pending modal swallows input until it is acknowledged
    if (!practice || practice.active_alert || practice.complete) return;
    await this.store.attempt(partNumber);
  }

  private renderModal(snapshot: SessionSnapshot): void {
    const alert = snapshot.practice?.active_alert ?? null;
    this.modal.innerHTML = "";
    if (!alert) {
      this.modal.classList.add("hidden");
      return;
    }
    this.modal.classList.remove("hidden");
    const dialog = el("div", "modal");
    dialog.appendChild(el("h3", undefined, "Wrong part"));
    const message = el("p", "alert-message", alert.message);
    message.dataset.testid = "alert-message";
    dialog.appendChild(message);
    const ok = el("button", "acknowledge", "OK");
    ok.dataset.testid = "acknowledge-button";
    ok.addEventListener("click", () => this.guarded(() => this.store.acknowledgeAlert()));
    dialog.appendChild(ok);
    this.modal.appendChild(dialog);
  }

  private async renderSummary(): Promise<void> {
    if (this.panel.querySelector(".metrics-summary")) return;
    try {
      const metrics = await this.store.metrics();
      const summary = el("div", "metrics-summary");
      summary.dataset.testid = "metrics-summary";
      summary.appendChild(el("h3", undefined, "Session complete"));
      const minutes = (v: number | null) => (v === null ? "—" : v.toFixed(1));
      summary.appendChild(
        el("p", undefined, `Training time: ${minutes(metrics.training_minutes)} min`),
      );
      summary.appendChild(el("p", undefined, `Task time: ${minutes(metrics.task_minutes)} min`));
      summary.appendChild(el("p", undefined, `Wrong attempts: ${metrics.wrong_attempts}`));
      summary.appendChild(el("p", undefined, `Replays: ${metrics.replays}`));
      this.panel.appendChild(summary);
    } catch {
      // metrics are best-effort decoration on the completion screen
    }
  }
}
