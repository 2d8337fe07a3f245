// Session state and DOM wiring. The rendering is a pure function of the
// latest snapshot plus the step log (see format.viewModel); this module
// only moves data between the client and the page.

import { ServerError, StepperClient } from "./client.js";
import { isSnapshot, viewModel } from "./format.js";
import type { Direction, Snapshot } from "./types.js";

export interface UiSession {
  id: string;
  snapshot: Snapshot;
  log: string[];
  pending: boolean;
}

export interface Pane {
  termInput: HTMLTextAreaElement;
  newButton: HTMLButtonElement;
  forwardButton: HTMLButtonElement;
  backwardButton: HTMLButtonElement;
  resetButton: HTMLButtonElement;
  active: HTMLElement;
  evaluated: HTMLElement;
  history: HTMLElement;
  readback: HTMLElement;
  counters: HTMLElement;
  badges: HTMLElement;
  log: HTMLElement;
  notice: HTMLElement;
  error: HTMLElement;
}

export class StepperApp {
  session: UiSession | null = null;

  constructor(private client: StepperClient, private pane: Pane) {
    pane.newButton.addEventListener("click", () => void this.newTerm());
    pane.forwardButton.addEventListener("click", () => void this.step("forward"));
    pane.backwardButton.addEventListener("click", () => void this.step("backward"));
    pane.resetButton.addEventListener("click", () => void this.reset());
    this.renderControls();
  }

  async newTerm(): Promise<void> {
    this.clearMessages();
    try {
      const response = await this.withPending(() =>
        this.client.newSession(this.pane.termInput.value),
      );
      this.session = {
        id: response.session,
        snapshot: response.snapshot,
        log: [],
        pending: false,
      };
      this.render();
    } catch (err) {
      this.session = null;
      this.showError(err);
      this.renderControls();
    }
  }

  async step(direction: Direction): Promise<void> {
    if (!this.session || this.session.pending) return;
    this.clearMessages();
    try {
      const response = await this.withPending(() =>
        this.client.step(this.session!.id, direction),
      );
      this.session.snapshot = response.snapshot;
      if (response.at_boundary) {
        this.showNotice(
          direction === "forward" ? "already at the final state" : "already at the initial state",
        );
      } else if (response.rule) {
        this.session.log.push(response.rule);
      }
      this.render();
    } catch (err) {
      this.showError(err);
    }
  }

  async reset(): Promise<void> {
    if (!this.session || this.session.pending) return;
    this.clearMessages();
    try {
      this.session.snapshot = await this.withPending(() =>
        this.client.reset(this.session!.id),
      );
      this.session.log.push("reset");
      this.render();
    } catch (err) {
      this.showError(err);
    }
  }

  // re-fetch after a connection loss, keeping the session id
  async reconnect(): Promise<void> {
    if (!this.session) return;
    this.clearMessages();
    try {
      this.session.snapshot = await this.withPending(() =>
        this.client.snapshot(this.session!.id),
      );
      this.render();
    } catch (err) {
      this.showError(err);
    }
  }

  private async withPending<T>(request: () => Promise<T>): Promise<T> {
    if (this.session) this.session.pending = true;
    this.renderControls();
    try {
      return await request();
    } finally {
      if (this.session) this.session.pending = false;
      this.renderControls();
    }
  }

  private render(): void {
    const pane = this.pane;
    if (!this.session) {
      this.renderControls();
      return;
    }
    const snapshot = this.session.snapshot;
    if (!isSnapshot(snapshot)) {
      this.showError(new Error("malformed snapshot from server"));
      return;
    }
    const vm = viewModel(snapshot);

    pane.active.replaceChildren(
      ...vm.activeCells.map((cell) => {
        const div = document.createElement("div");
        div.className = cell.pointer ? "cell pointer" : "cell";
        div.textContent = cell.text;
        return div;
      }),
    );
    pane.evaluated.replaceChildren(
      ...vm.evaluatedCells.map((cell) => {
        const div = document.createElement("div");
        div.className = "cell";
        div.textContent = cell.text;
        return div;
      }),
    );
    pane.history.replaceChildren(
      ...vm.historyLines.map((line) => {
        const div = document.createElement("div");
        div.className = "cell";
        div.textContent = line;
        return div;
      }),
    );
    pane.readback.textContent = vm.readback;
    pane.counters.textContent = vm.counters;
    pane.badges.textContent = [
      vm.initial ? "initial" : "",
      vm.final ? "final" : "",
    ]
      .filter(Boolean)
      .join(" ");
    pane.log.textContent = this.session.log.join(", ");
    this.renderControls();
  }

  private renderControls(): void {
    const pane = this.pane;
    const session = this.session;
    const busy = session?.pending ?? false;
    pane.newButton.disabled = busy;
    pane.forwardButton.disabled = busy || !session || session.snapshot.final;
    pane.backwardButton.disabled = busy || !session || session.snapshot.initial;
    pane.resetButton.disabled = busy || !session;
  }

  private showNotice(text: string): void {
    this.pane.notice.textContent = text;
  }

  private showError(err: unknown): void {
    if (err instanceof ServerError) {
      const position = err.payload.position;
      this.pane.error.textContent =
        position === undefined
          ? `${err.payload.kind}: ${err.payload.message}`
          : `${err.payload.kind}: ${err.payload.message} (position ${position})`;
    } else if (err instanceof TypeError) {
      // fetch rejects with TypeError on connection loss
      this.pane.error.textContent =
        "connection lost; the session is kept — use Reconnect";
    } else {
      this.pane.error.textContent = String(err);
    }
  }

  private clearMessages(): void {
    this.pane.notice.textContent = "";
    this.pane.error.textContent = "";
  }
}
