/**
 * End-to-end: spawn the Python presentation server on an ephemeral port,
 * drive it through the real client stack (TCP transport, protocol client,
 * session controller), and check the exported run against both a local
 * reference model and a second raw protocol connection.
 */

import { spawn, execFileSync, type ChildProcess } from "node:child_process";
import { afterAll, beforeAll, describe, expect, test } from "vitest";

import { ProtocolClient, ServerError, type ExportBody } from "../src/protocol.js";
import { TcpTransport } from "../src/transports/tcp.js";
import { DocMapSession } from "../src/controller.js";
import { cellDocument, layerById } from "../src/state.js";

let server: ChildProcess;
let port: number;

function corpusPath(): string {
  return execFileSync(
    "python3",
    ["-c", "from docmap.indexing import toy_corpus_path; print(toy_corpus_path())"],
    { encoding: "utf8" },
  ).trim();
}

beforeAll(async () => {
  server = spawn("python3", [
    "-m", "docmap.server",
    "--port", "0",
    "--corpus", corpusPath(),
  ]);
  port = await new Promise<number>((resolve, reject) => {
    let banner = "";
    server.stdout!.on("data", (chunk: Buffer) => {
      banner += chunk.toString();
      const match = banner.match(/listening on .*:(\d+)/);
      if (match) {
        resolve(Number(match[1]));
      }
    });
    server.on("error", reject);
    server.on("exit", (code) => reject(new Error(`server exited early (${code})`)));
  });
}, 30000);

afterAll(() => {
  server.kill();
});

async function connectSession(): Promise<{ client: ProtocolClient; session: DocMapSession }> {
  const transport = await TcpTransport.connect("127.0.0.1", port);
  const client = new ProtocolClient(transport);
  const session = new DocMapSession(client);
  await session.open();
  return { client, session };
}

function mulberry32(seed: number): () => number {
  let a = seed >>> 0;
  return () => {
    a = (a + 0x6d2b79f5) >>> 0;
    let t = a;
    t = Math.imul(t ^ (t >>> 15), t | 1);
    t ^= t + Math.imul(t ^ (t >>> 7), t | 61);
    return ((t ^ (t >>> 14)) >>> 0) / 4294967296;
  };
}

describe("against the live server", () => {
  test("open advertises engines and search builds the view", async () => {
    const { client, session } = await connectSession();
    expect(session.engines.map((engine) => engine.id)).toEqual(["local"]);

    const state = await session.search("local", "cat dog");
    expect(state.bundle.documents.length).toBeGreaterThan(0);
    const kinds = state.bundle.layers.map((layer) => layer.kind);
    expect(kinds.slice(0, 4)).toEqual(["vector", "conjunction", "term", "term"]);
    expect(kinds.filter((kind) => kind === "cluster").length).toBeGreaterThan(0);
    expect(state.activeQueryTab).toBe("vector");

    for (const layer of state.bundle.layers) {
      expect(layer.brightness.length).toBe(state.bundle.documents.length);
      for (const value of layer.brightness) {
        expect(value).toBeGreaterThanOrEqual(0);
        expect(value).toBeLessThanOrEqual(1);
      }
      if (layer.kind === "cluster") {
        expect(layer.members ?? []).not.toHaveLength(0);
      }
    }
    await session.close();
    client.close();
  }, 20000);

  test("clicks toggle through the server and export matches the model", async () => {
    const { client, session } = await connectSession();
    const state = await session.search("local", "cat dog");
    const docs = state.bundle.documents.map((doc) => doc.id);

    await session.clickCell(0, 0);
    await session.clickCell(1, 2);
    await session.clickCell(0, 0); // un-press the first again
    expect(session.state!.pressed).toEqual([cellDocument(state.bundle, 1, 2)]);

    const run = await session.exportRun();
    const pressed = session.state!.pressed;
    const residual = docs.filter((id) => !pressed.includes(id));
    expect(run.order).toEqual([...pressed, ...residual]);

    // run file text carries the same ordering
    const fileDocs = run.run
      .trim()
      .split("\n")
      .map((line) => line.split(/\s+/)[2]);
    expect(fileDocs).toEqual(run.order);
    await session.close();
    client.close();
  }, 20000);

  test("double-click fetch shades titles and is idempotent", async () => {
    const { client, session } = await connectSession();
    const state = await session.search("local", "cat dog");
    const docId = state.bundle.documents[0]!.id;

    const doc = await session.fetchDocument(docId);
    expect(doc.id).toBe(docId);
    expect(doc.body.length).toBeGreaterThan(0);
    await session.fetchDocument(docId);
    expect([...session.state!.examined]).toEqual([docId]);

    const model = session.render();
    expect(model.titles.find((title) => title.docId === docId)!.examined).toBe(true);
    await session.close();
    client.close();
  }, 20000);

  test("server errors surface with their protocol codes", async () => {
    const { client, session } = await connectSession();
    await expect(session.search("missing-engine", "cat")).rejects.toMatchObject({
      code: "no-such-engine",
    });
    await expect(session.search("local", "the and of")).rejects.toMatchObject({
      code: "empty-query",
    });
    await session.search("local", "cat dog");
    await expect(session.toggleDocument("ghost")).rejects.toMatchObject({
      code: "no-such-document",
    });
    await session.close();
    client.close();
  }, 20000);

  test("generated interaction sequences keep state and export consistent", async () => {
    for (let seed = 1; seed <= 5; seed += 1) {
      const random = mulberry32(seed * 7919);
      const { client, session } = await connectSession();
      const state = await session.search("local", "cat dog");
      const bundle = state.bundle;
      const tabIds = [...bundle.layers.map((layer) => layer.id), "made-up-tab"];
      const modelPressed: string[] = [];
      const modelExamined = new Set<string>();

      for (let step = 0; step < 40; step += 1) {
        const roll = random();
        if (roll < 0.45) {
          session.selectTab(tabIds[Math.floor(random() * tabIds.length)]!);
        } else if (roll < 0.85) {
          const row = Math.floor(random() * bundle.grid.rows);
          const col = Math.floor(random() * bundle.grid.cols);
          const docId = cellDocument(bundle, row, col);
          await session.clickCell(row, col);
          if (docId !== null) {
            const index = modelPressed.indexOf(docId);
            if (index >= 0) {
              modelPressed.splice(index, 1);
            } else {
              modelPressed.push(docId);
            }
          }
        } else {
          const doc = bundle.documents[Math.floor(random() * bundle.documents.length)]!;
          await session.fetchDocument(doc.id);
          modelExamined.add(doc.id);
        }

        const current = session.state!;
        expect(current.pressed).toEqual(modelPressed);
        expect([...current.examined].sort()).toEqual([...modelExamined].sort());
        expect(layerById(bundle, current.activeQueryTab)!.kind).not.toBe("cluster");
        if (current.activeClusterTab !== null) {
          expect(layerById(bundle, current.activeClusterTab)!.kind).toBe("cluster");
        }
      }

      // the controller's exported run equals a raw second connection's export
      const viaController: ExportBody = await session.exportRun();
      const residual = bundle.documents
        .map((doc) => doc.id)
        .filter((id) => !modelPressed.includes(id));
      expect(viaController.order).toEqual([...modelPressed, ...residual]);

      const rawTransport = await TcpTransport.connect("127.0.0.1", port);
      const rawClient = new ProtocolClient(rawTransport);
      const direct = await rawClient.request<ExportBody>("export", {
        session: session.session,
      });
      expect(viaController.run).toBe(direct.run);
      expect(viaController.order).toEqual(direct.order);
      rawClient.close();

      await session.close();
      client.close();
    }
  }, 60000);
});
