// Request/response client for the step server. One request at a time per
// session; the caller (app.ts) enforces that with its pending flag.

import type {
  Direction,
  ErrorPayload,
  NewSessionResponse,
  Snapshot,
  StepResponse,
} from "./types.js";

export class ServerError extends Error {
  payload: ErrorPayload;

  constructor(payload: ErrorPayload) {
    super(payload.message);
    this.payload = payload;
  }
}

async function asJson<T>(response: Response): Promise<T> {
  const doc = await response.json();
  if (!response.ok) {
    const payload = (doc as { error?: ErrorPayload }).error;
    throw new ServerError(
      payload ?? { kind: "protocol", message: `unexpected status ${response.status}` },
    );
  }
  return doc as T;
}

export class StepperClient {
  constructor(private baseUrl: string = "") {}

  async newSession(term: string): Promise<NewSessionResponse> {
    const response = await fetch(`${this.baseUrl}/sessions`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ term }),
    });
    return asJson<NewSessionResponse>(response);
  }

  async step(session: string, direction: Direction): Promise<StepResponse> {
    const response = await fetch(`${this.baseUrl}/sessions/${session}/step`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ direction }),
    });
    return asJson<StepResponse>(response);
  }

  async reset(session: string): Promise<Snapshot> {
    const response = await fetch(`${this.baseUrl}/sessions/${session}/reset`, {
      method: "POST",
    });
    return (await asJson<{ snapshot: Snapshot }>(response)).snapshot;
  }

  async snapshot(session: string): Promise<Snapshot> {
    const response = await fetch(`${this.baseUrl}/sessions/${session}/snapshot`);
    return (await asJson<{ snapshot: Snapshot }>(response)).snapshot;
  }

  async close(session: string): Promise<void> {
    await asJson(await fetch(`${this.baseUrl}/sessions/${session}`, { method: "DELETE" }));
  }
}
