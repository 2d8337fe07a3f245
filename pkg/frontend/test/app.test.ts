// @vitest-environment happy-dom
// UI behavior against a stubbed client: pane contents, badges, control
// enablement, boundary notices, error banners.

import { beforeEach, describe, expect, it } from "vitest";

import { StepperApp, type Pane } from "../src/app.js";
import type { StepperClient } from "../src/client.js";
import { ServerError } from "../src/client.js";
import type { Direction, Snapshot } from "../src/types.js";

function snapshot(overrides: Partial<Snapshot> = {}): Snapshot {
  return {
    active: [
      {
        id: "*",
        bite: {
          kind: "lamid",
          param: "x#1",
          ret: { kind: "bound", var: "x#1" },
        },
      },
    ],
    evaluated: [],
    history: [],
    readback: "\\x. x",
    counters: { p: 0, sea: 0, back: 0 },
    final: false,
    initial: true,
    ...overrides,
  };
}

class FakeClient {
  stepResponses: { snapshot: Snapshot; rule: string | null; at_boundary: boolean }[] = [];
  failNext: Error | null = null;

  async newSession(term: string) {
    if (this.failNext) throw this.takeFailure();
    return { session: "s1", snapshot: snapshot({ readback: term }) };
  }

  async step(_session: string, _direction: Direction) {
    if (this.failNext) throw this.takeFailure();
    const next = this.stepResponses.shift();
    if (!next) throw new Error("no scripted response");
    return next;
  }

  async reset() {
    return snapshot();
  }

  async snapshot() {
    return snapshot();
  }

  async close() {}

  private takeFailure() {
    const err = this.failNext!;
    this.failNext = null;
    return err;
  }
}

function makePane(): Pane {
  document.body.innerHTML = `
    <textarea id="term-input"></textarea>
    <button id="new-session"></button>
    <button id="step-forward"></button>
    <button id="step-backward"></button>
    <button id="reset"></button>
    <div id="active-pane"></div>
    <div id="evaluated-pane"></div>
    <div id="history-pane"></div>
    <div id="readback-pane"></div>
    <div id="counters"></div>
    <div id="badges"></div>
    <div id="rule-log"></div>
    <div id="notice"></div>
    <div id="error-banner"></div>`;
  const el = (id: string) => document.getElementById(id)!;
  return {
    termInput: el("term-input") as HTMLTextAreaElement,
    newButton: el("new-session") as HTMLButtonElement,
    forwardButton: el("step-forward") as HTMLButtonElement,
    backwardButton: el("step-backward") as HTMLButtonElement,
    resetButton: el("reset") as HTMLButtonElement,
    active: el("active-pane"),
    evaluated: el("evaluated-pane"),
    history: el("history-pane"),
    readback: el("readback-pane"),
    counters: el("counters"),
    badges: el("badges"),
    log: el("rule-log"),
    notice: el("notice"),
    error: el("error-banner"),
  };
}

let client: FakeClient;
let pane: Pane;
let app: StepperApp;

beforeEach(() => {
  client = new FakeClient();
  pane = makePane();
  app = new StepperApp(client as unknown as StepperClient, pane);
});

describe("session lifecycle", () => {
  it("renders a new session and badges the initial state", async () => {
    pane.termInput.value = "\\x. x";
    await app.newTerm();
    expect(pane.active.children).toHaveLength(1);
    expect(pane.active.children[0].textContent).toBe("[*<-\\x. *<-x]");
    expect(pane.readback.textContent).toBe("\\x. x");
    expect(pane.badges.textContent).toBe("initial");
    expect(pane.backwardButton.disabled).toBe(true);
    expect(pane.forwardButton.disabled).toBe(false);
  });

  it("shows server errors inline and keeps controls sane", async () => {
    client.failNext = new ServerError({ kind: "parse", message: "expected a term", position: 3 });
    await app.newTerm();
    expect(pane.error.textContent).toBe("parse: expected a term (position 3)");
    expect(pane.forwardButton.disabled).toBe(true);
  });
});

describe("stepping", () => {
  beforeEach(async () => {
    pane.termInput.value = "\\x. x";
    await app.newTerm();
  });

  it("appends acknowledged rules to the log", async () => {
    client.stepResponses.push({
      snapshot: snapshot({ final: true, initial: false, history: [{ kind: "search" }] }),
      rule: "sea",
      at_boundary: false,
    });
    await app.step("forward");
    expect(pane.log.textContent).toBe("sea");
    expect(pane.badges.textContent).toBe("final");
    expect(pane.forwardButton.disabled).toBe(true);
    expect(pane.history.children).toHaveLength(1);
  });

  it("boundary responses show a notice and leave the log alone", async () => {
    client.stepResponses.push({ snapshot: snapshot(), rule: null, at_boundary: true });
    await app.step("forward");
    expect(pane.notice.textContent).toContain("final state");
    expect(pane.log.textContent).toBe("");
  });

  it("connection loss points at reconnect and keeps the session", async () => {
    client.failNext = new TypeError("fetch failed");
    await app.step("forward");
    expect(pane.error.textContent).toContain("Reconnect");
    expect(app.session?.id).toBe("s1");
    await app.reconnect();
    expect(pane.error.textContent).toBe("");
    expect(pane.readback.textContent).toBe("\\x. x");
  });
});
