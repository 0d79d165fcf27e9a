/**
 * Wire types and the protocol client.
 *
 * The server speaks newline-delimited JSON over a persistent byte stream:
 * one request object per line, one response line per request, in order.
 * The client keeps at most one request in flight and queues the rest.
 */

export interface GridShape {
  rows: number;
  cols: number;
}

export type LayerKind = "vector" | "conjunction" | "term" | "cluster";

export interface WireLayer {
  id: string;
  kind: LayerKind;
  label: string;
  hue: number;
  brightness: number[];
  /** Cluster layers list their member document ids. */
  members?: string[];
}

export interface WireDocument {
  id: string;
  title: string;
  rank: number;
}

export interface MapBundle {
  grid: GridShape;
  query: string;
  documents: WireDocument[];
  layers: WireLayer[];
}

export interface EngineInfo {
  id: string;
  name: string;
  kind: "local" | "replay";
}

export interface OpenSessionBody {
  session: string;
  engines: EngineInfo[];
}

export interface DocumentBody {
  id: string;
  title: string;
  body: string;
}

export interface PressedBody {
  pressed: string[];
}

export interface ExportBody {
  query_id: string;
  order: string[];
  run: string;
}

export interface WireError {
  code: string;
  msg: string;
}

export type WireResponse =
  | { ok: true; body: unknown }
  | { ok: false; error: WireError };

/** A server-reported failure, carrying the protocol error code. */
export class ServerError extends Error {
  readonly code: string;

  constructor(error: WireError) {
    super(`${error.code}: ${error.msg}`);
    this.name = "ServerError";
    this.code = error.code;
  }
}

/**
 * Minimal byte-stream abstraction the client runs on: TCP in Node, a
 * WebSocket bridge in the browser. Implementations deliver raw text chunks
 * in arrival order; framing is the client's job.
 */
export interface ChunkTransport {
  send(text: string): void;
  onChunk(handler: (chunk: string) => void): void;
  onClose(handler: (reason?: Error) => void): void;
  close(): void;
}

/** Reassembles newline-delimited frames from arbitrarily split chunks. */
export class LineSplitter {
  private buffer = "";

  push(chunk: string): string[] {
    this.buffer += chunk;
    const parts = this.buffer.split("\n");
    this.buffer = parts.pop() ?? "";
    return parts.filter((line) => line.length > 0);
  }
}

interface PendingRequest {
  payload: string;
  resolve: (body: unknown) => void;
  reject: (reason: Error) => void;
}

export class ProtocolClient {
  private readonly splitter = new LineSplitter();
  private readonly queue: PendingRequest[] = [];
  private inFlight: PendingRequest | null = null;
  private closed = false;

  constructor(private readonly transport: ChunkTransport) {
    transport.onChunk((chunk) => {
      for (const line of this.splitter.push(chunk)) {
        this.handleLine(line);
      }
    });
    transport.onClose((reason) => {
      this.closed = true;
      this.failAll(reason ?? new Error("connection closed"));
    });
  }

  request<T>(op: string, fields: Record<string, unknown> = {}): Promise<T> {
    if (this.closed) {
      return Promise.reject(new Error("client is closed"));
    }
    return new Promise<T>((resolve, reject) => {
      this.queue.push({
        payload: JSON.stringify({ op, ...fields }),
        resolve: resolve as (body: unknown) => void,
        reject,
      });
      this.pump();
    });
  }

  close(): void {
    this.closed = true;
    this.transport.close();
    this.failAll(new Error("client closed"));
  }

  private pump(): void {
    if (this.inFlight || this.queue.length === 0) {
      return;
    }
    this.inFlight = this.queue.shift()!;
    this.transport.send(this.inFlight.payload + "\n");
  }

  private handleLine(line: string): void {
    const pending = this.inFlight;
    if (!pending) {
      return; // unsolicited line; the protocol never produces these
    }
    this.inFlight = null;
    let response: WireResponse;
    try {
      response = JSON.parse(line) as WireResponse;
    } catch (error) {
      pending.reject(new Error(`unparseable response: ${String(error)}`));
      this.pump();
      return;
    }
    if (response.ok) {
      pending.resolve(response.body);
    } else {
      pending.reject(new ServerError(response.error));
    }
    this.pump();
  }

  private failAll(reason: Error): void {
    const pending = this.inFlight ? [this.inFlight, ...this.queue] : [...this.queue];
    this.inFlight = null;
    this.queue.length = 0;
    for (const request of pending) {
      request.reject(reason);
    }
  }
}
