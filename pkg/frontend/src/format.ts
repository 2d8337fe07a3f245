// Crumble notation, matching the CLI trace renderer so environment cells
// can be checked line for line against `rcam trace` output.

import type { Bite, Entry, HistoryItem, Name, Snapshot } from "./types.js";

// binders arrive as "name#ordinal"; display just the name
export function binderName(wire: string): string {
  const hash = wire.lastIndexOf("#");
  return hash === -1 ? wire : wire.slice(0, hash);
}

export function renderName(name: Name): string {
  return name.kind === "bound" ? binderName(name.var) : name.id;
}

export function renderBite(bite: Bite): string {
  switch (bite.kind) {
    case "app":
      return `${renderName(bite.left)} ${renderName(bite.right)}`;
    case "lamid":
      return `\\${binderName(bite.param)}. *<-${renderName(bite.ret)}`;
    case "lam": {
      const body =
        renderEntryCell("*", bite.headBite) + bite.tail.map(renderEntry).join("");
      return `\\${binderName(bite.param)}. ${body}`;
    }
  }
}

function renderEntryCell(id: string, bite: Bite): string {
  return `[${id}<-${renderBite(bite)}]`;
}

export function renderEntry(entry: Entry): string {
  return renderEntryCell(entry.id, entry.bite);
}

export function renderEnv(entries: Entry[]): string {
  return entries.length === 0 ? "eps" : entries.map(renderEntry).join("");
}

export function renderHistoryItem(item: HistoryItem): string {
  return item.kind === "search" ? "<>" : `<${item.x}, ${item.y}>`;
}

// View model: everything the panes show, independent of the DOM.
export interface ViewModel {
  activeCells: { id: string; text: string; pointer: boolean }[];
  evaluatedCells: { id: string; text: string }[];
  historyLines: string[]; // top first
  readback: string;
  counters: string;
  final: boolean;
  initial: boolean;
}

export function viewModel(snapshot: Snapshot): ViewModel {
  const active = snapshot.active.map((entry, i) => ({
    id: entry.id,
    text: renderEntry(entry),
    // the machine pointer sits on the rightmost active entry
    pointer: i === snapshot.active.length - 1,
  }));
  return {
    activeCells: active,
    evaluatedCells: snapshot.evaluated.map((entry) => ({
      id: entry.id,
      text: renderEntry(entry),
    })),
    historyLines: snapshot.history.map(renderHistoryItem),
    readback: snapshot.readback,
    counters: `p=${snapshot.counters.p} sea=${snapshot.counters.sea} back=${snapshot.counters.back}`,
    final: snapshot.final,
    initial: snapshot.initial,
  };
}

export function isSnapshot(doc: unknown): doc is Snapshot {
  if (typeof doc !== "object" || doc === null) return false;
  const d = doc as Record<string, unknown>;
  return (
    Array.isArray(d.active) &&
    Array.isArray(d.evaluated) &&
    Array.isArray(d.history) &&
    typeof d.readback === "string" &&
    typeof d.final === "boolean" &&
    typeof d.initial === "boolean" &&
    typeof d.counters === "object" &&
    d.counters !== null
  );
}
