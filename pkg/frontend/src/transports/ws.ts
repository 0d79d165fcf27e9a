import type { ChunkTransport } from "../protocol.js";

/**
 * Browser transport: a WebSocket whose messages carry the server's raw
 * byte stream (a ws-to-tcp bridge such as websockify on the server side).
 * Message boundaries need not align with protocol lines; the client
 * reframes them.
 */
export class WebSocketTransport implements ChunkTransport {
  private chunkHandler: (chunk: string) => void = () => {};
  private closeHandler: (reason?: Error) => void = () => {};

  private constructor(private readonly socket: WebSocket) {
    socket.onmessage = (event) => {
      const data = event.data;
      if (typeof data === "string") {
        this.chunkHandler(data);
      } else if (data instanceof ArrayBuffer) {
        this.chunkHandler(new TextDecoder().decode(data));
      }
    };
    socket.onerror = () => this.closeHandler(new Error("websocket error"));
    socket.onclose = () => this.closeHandler();
  }

  static connect(url: string): Promise<WebSocketTransport> {
    return new Promise((resolve, reject) => {
      const socket = new WebSocket(url);
      socket.binaryType = "arraybuffer";
      socket.onopen = () => resolve(new WebSocketTransport(socket));
      socket.onerror = () => reject(new Error(`cannot open ${url}`));
    });
  }

  send(text: string): void {
    this.socket.send(text);
  }

  onChunk(handler: (chunk: string) => void): void {
    this.chunkHandler = handler;
  }

  onClose(handler: (reason?: Error) => void): void {
    this.closeHandler = handler;
  }

  close(): void {
    this.socket.close();
  }
}
