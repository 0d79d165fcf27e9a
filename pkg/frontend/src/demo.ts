/**
 * Terminal demo: connect to a running server, search, print each layer as
 * an ASCII map (brightness ramp, cluster members marked), then export the
 * untouched run.
 *
 *   node dist/demo.js [host] [port] [engine] [query words...]
 */

import { ProtocolClient, type WireLayer } from "./protocol.js";
import { TcpTransport } from "./transports/tcp.js";
import { DocMapSession } from "./controller.js";

const SHADES = " .:-=+*#%@";

function shade(brightness: number): string {
  const index = Math.min(SHADES.length - 1, Math.floor(brightness * (SHADES.length - 1)));
  return SHADES[index] ?? " ";
}

function printLayer(layer: WireLayer, rows: number, cols: number, docIds: string[]): void {
  console.log(`[${layer.kind}] ${layer.label}`);
  const members = new Set(layer.members ?? []);
  for (let row = 0; row < rows; row += 1) {
    const line: string[] = [];
    for (let col = 0; col < cols; col += 1) {
      const position = row * cols + col;
      if (position >= layer.brightness.length) {
        line.push("·");
        continue;
      }
      const mark = shade(layer.brightness[position] ?? 0);
      const docId = docIds[position];
      line.push(docId !== undefined && members.has(docId) ? `(${mark})` : ` ${mark} `);
    }
    console.log("  " + line.join(""));
  }
  console.log();
}

async function main(): Promise<void> {
  const [host = "127.0.0.1", portText = "8765", engine = "local", ...queryWords] =
    process.argv.slice(2);
  const query = queryWords.length > 0 ? queryWords.join(" ") : "cat dog";

  const transport = await TcpTransport.connect(host, Number(portText));
  const client = new ProtocolClient(transport);
  const session = new DocMapSession(client);

  const engines = await session.open();
  console.log("engines:", engines.map((e) => `${e.id} (${e.kind})`).join(", "));

  const state = await session.search(engine, query);
  const { rows, cols } = state.bundle.grid;
  const docIds = state.bundle.documents.map((doc) => doc.id);
  console.log(`query "${query}" -> ${docIds.length} documents\n`);
  for (const layer of state.bundle.layers) {
    printLayer(layer, rows, cols, docIds);
  }

  const run = await session.exportRun();
  console.log("export preview:");
  console.log(run.run.split("\n").slice(0, 5).join("\n"));
  await session.close();
  client.close();
}

main().catch((error) => {
  console.error(error);
  process.exit(1);
});
