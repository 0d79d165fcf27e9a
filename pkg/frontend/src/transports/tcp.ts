import net from "node:net";

import type { ChunkTransport } from "../protocol.js";

/** Direct TCP connection to the server's JSON-line port (Node only). */
export class TcpTransport implements ChunkTransport {
  private chunkHandler: (chunk: string) => void = () => {};
  private closeHandler: (reason?: Error) => void = () => {};

  private constructor(private readonly socket: net.Socket) {
    socket.setEncoding("utf8");
    socket.on("data", (chunk: string) => this.chunkHandler(chunk));
    socket.on("error", (error) => this.closeHandler(error));
    socket.on("close", () => this.closeHandler());
  }

  static connect(host: string, port: number): Promise<TcpTransport> {
    return new Promise((resolve, reject) => {
      const socket = net.createConnection({ host, port });
      socket.once("connect", () => {
        socket.removeListener("error", reject);
        resolve(new TcpTransport(socket));
      });
      socket.once("error", reject);
    });
  }

  send(text: string): void {
    this.socket.write(text);
  }

  onChunk(handler: (chunk: string) => void): void {
    this.chunkHandler = handler;
  }

  onClose(handler: (reason?: Error) => void): void {
    this.closeHandler = handler;
  }

  close(): void {
    this.socket.end();
    this.socket.destroy();
  }
}
