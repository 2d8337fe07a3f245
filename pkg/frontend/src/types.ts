// Wire format of the step server (consumed verbatim).

export type Name =
  | { kind: "bound"; var: string }
  | { kind: "env"; id: string };

export type Bite =
  | { kind: "app"; left: Name; right: Name }
  | { kind: "lam"; param: string; headBite: Bite; tail: Entry[] }
  | { kind: "lamid"; param: string; ret: Name };

export interface Entry {
  id: string;
  bite: Bite;
}

export type HistoryItem =
  | { kind: "search" }
  | { kind: "principal"; x: string; y: string };

export interface Counters {
  p: number;
  sea: number;
  back: number;
}

export interface Snapshot {
  active: Entry[];
  evaluated: Entry[];
  history: HistoryItem[]; // top (most recent) first
  readback: string;
  counters: Counters;
  final: boolean;
  initial: boolean;
}

export interface NewSessionResponse {
  session: string;
  snapshot: Snapshot;
}

export interface StepResponse {
  snapshot: Snapshot;
  rule: string | null;
  at_boundary: boolean;
}

export interface ErrorPayload {
  kind: string;
  message: string;
  position?: number;
}

export type Direction = "forward" | "backward";
