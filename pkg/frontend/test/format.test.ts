import { describe, expect, it } from "vitest";

import {
  binderName,
  isSnapshot,
  renderEntry,
  renderEnv,
  renderHistoryItem,
  viewModel,
} from "../src/format.js";
import type { Snapshot } from "../src/types.js";

// initial snapshot of (\x. x (x x)) \y. y, as served by the step server
const fig5: Snapshot = {
  active: [
    {
      id: "*",
      bite: {
        kind: "app",
        left: { kind: "env", id: "z1" },
        right: { kind: "env", id: "z2" },
      },
    },
    {
      id: "z1",
      bite: {
        kind: "lam",
        param: "x#1",
        headBite: {
          kind: "app",
          left: { kind: "bound", var: "x#1" },
          right: { kind: "env", id: "z3" },
        },
        tail: [
          {
            id: "z3",
            bite: {
              kind: "app",
              left: { kind: "bound", var: "x#1" },
              right: { kind: "bound", var: "x#1" },
            },
          },
        ],
      },
    },
    {
      id: "z2",
      bite: {
        kind: "lamid",
        param: "y#2",
        ret: { kind: "bound", var: "y#2" },
      },
    },
  ],
  evaluated: [],
  history: [],
  readback: "(\\x. x (x x)) \\y. y",
  counters: { p: 0, sea: 0, back: 0 },
  final: false,
  initial: true,
};

describe("crumble notation", () => {
  it("strips binder ordinals for display", () => {
    expect(binderName("x#12")).toBe("x");
    expect(binderName("*")).toBe("*");
  });

  it("renders entries in the CLI trace notation", () => {
    expect(renderEntry(fig5.active[0])).toBe("[*<-z1 z2]");
    expect(renderEntry(fig5.active[1])).toBe("[z1<-\\x. [*<-x z3][z3<-x x]]");
    expect(renderEntry(fig5.active[2])).toBe("[z2<-\\y. *<-y]");
  });

  it("renders whole environments, with eps for empty", () => {
    expect(renderEnv(fig5.active)).toBe(
      "[*<-z1 z2][z1<-\\x. [*<-x z3][z3<-x x]][z2<-\\y. *<-y]",
    );
    expect(renderEnv([])).toBe("eps");
  });

  it("renders history records", () => {
    expect(renderHistoryItem({ kind: "search" })).toBe("<>");
    expect(renderHistoryItem({ kind: "principal", x: "z1", y: "z2" })).toBe("<z1, z2>");
  });
});

describe("view model", () => {
  it("marks the rightmost active cell as the machine pointer", () => {
    const vm = viewModel(fig5);
    expect(vm.activeCells.map((c) => c.pointer)).toEqual([false, false, true]);
    expect(vm.activeCells[2].text).toBe("[z2<-\\y. *<-y]");
    expect(vm.evaluatedCells).toEqual([]);
    expect(vm.historyLines).toEqual([]);
    expect(vm.readback).toBe("(\\x. x (x x)) \\y. y");
    expect(vm.counters).toBe("p=0 sea=0 back=0");
    expect(vm.initial).toBe(true);
    expect(vm.final).toBe(false);
  });

  it("depth equals the snapshot history length", () => {
    const stepped: Snapshot = {
      ...fig5,
      history: [{ kind: "principal", x: "z1", y: "z2" }, { kind: "search" }],
    };
    expect(viewModel(stepped).historyLines).toEqual(["<z1, z2>", "<>"]);
  });
});

describe("snapshot guard", () => {
  it("accepts server snapshots and rejects junk", () => {
    expect(isSnapshot(fig5)).toBe(true);
    expect(isSnapshot({})).toBe(false);
    expect(isSnapshot(null)).toBe(false);
    expect(isSnapshot({ ...fig5, history: "no" })).toBe(false);
  });
});
