import { StepperApp } from "./app.js";
import { StepperClient } from "./client.js";
import type { Pane } from "./app.js";

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

const pane: Pane = {
  termInput: el("term-input"),
  newButton: el("new-session"),
  forwardButton: el("step-forward"),
  backwardButton: el("step-backward"),
  resetButton: el("reset"),
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

const app = new StepperApp(new StepperClient(""), pane);
el<HTMLButtonElement>("reconnect").addEventListener("click", () => void app.reconnect());
