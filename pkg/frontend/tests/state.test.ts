import { describe, expect, test } from "vitest";

import type { MapBundle } from "../src/protocol.js";
import {
  cellDocument,
  initialViewState,
  layerById,
  renderModel,
  selectTab,
  withExamined,
  withPressed,
  type ViewState,
} from "../src/state.js";

function fixtureBundle(): MapBundle {
  const docs = ["d1", "d2", "d3", "d4", "d5", "d6", "d7"];
  const layer = (id: string, kind: "vector" | "conjunction" | "term" | "cluster",
                 label: string, hue: number, members?: string[]) => ({
    id, kind, label, hue,
    brightness: docs.map((_, index) => index / (docs.length - 1)),
    ...(members ? { members } : {}),
  });
  return {
    grid: { rows: 3, cols: 3 },
    query: "cat dog",
    documents: docs.map((id, index) => ({ id, title: `title ${id}`, rank: index + 1 })),
    layers: [
      layer("vector", "vector", "(cat dog)", 0),
      layer("conjunction", "conjunction", "cat AND dog", 60),
      layer("term-cat", "term", "cat", 120),
      layer("term-dog", "term", "dog", 180),
      layer("cluster-1", "cluster", "pet shelter", 240, ["d2", "d5"]),
      layer("cluster-2", "cluster", "dog park", 300, ["d1", "d7"]),
    ],
  };
}

/** Deterministic PRNG so generated action sequences are reproducible. */
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

function queryTabKind(state: ViewState): string | undefined {
  return layerById(state.bundle, state.activeQueryTab)?.kind;
}

describe("initial state", () => {
  test("first query layer active, no cluster, clean press state", () => {
    const state = initialViewState(fixtureBundle());
    expect(state.activeQueryTab).toBe("vector");
    expect(state.activeClusterTab).toBeNull();
    expect(state.pressed).toEqual([]);
    expect(state.examined.size).toBe(0);
  });

  test("bundle without query layers is rejected", () => {
    const bundle = fixtureBundle();
    bundle.layers = bundle.layers.filter((layer) => layer.kind === "cluster");
    expect(() => initialViewState(bundle)).toThrow();
  });
});

describe("selectTab", () => {
  test("query tab and cluster tab can be active at the same time", () => {
    let state = initialViewState(fixtureBundle());
    state = selectTab(state, "term-cat").state;
    state = selectTab(state, "cluster-1").state;
    expect(state.activeQueryTab).toBe("term-cat");
    expect(state.activeClusterTab).toBe("cluster-1");
  });

  test("re-selecting the active cluster tab clears it", () => {
    let state = initialViewState(fixtureBundle());
    state = selectTab(state, "cluster-1").state;
    state = selectTab(state, "cluster-1").state;
    expect(state.activeClusterTab).toBeNull();
  });

  test("switching query tabs replaces the query tab only", () => {
    let state = initialViewState(fixtureBundle());
    state = selectTab(state, "cluster-2").state;
    state = selectTab(state, "conjunction").state;
    expect(state.activeQueryTab).toBe("conjunction");
    expect(state.activeClusterTab).toBe("cluster-2");
  });

  test("unknown layer leaves state untouched and yields a notice", () => {
    const state = initialViewState(fixtureBundle());
    const selection = selectTab(state, "nope");
    expect(selection.state).toBe(state);
    expect(selection.notice).toContain("nope");
  });

  test("press state survives any tab switch", () => {
    let state = initialViewState(fixtureBundle());
    state = withPressed(state, ["d3", "d1"]);
    state = withExamined(state, "d2");
    for (const id of ["term-dog", "cluster-1", "vector", "cluster-1", "cluster-2"]) {
      state = selectTab(state, id).state;
      expect(state.pressed).toEqual(["d3", "d1"]);
      expect([...state.examined]).toEqual(["d2"]);
    }
  });
});

describe("cellDocument", () => {
  test("row-major mapping", () => {
    const bundle = fixtureBundle();
    expect(cellDocument(bundle, 0, 0)).toBe("d1");
    expect(cellDocument(bundle, 0, 2)).toBe("d3");
    expect(cellDocument(bundle, 2, 0)).toBe("d7");
  });

  test("trailing and out-of-range cells are empty", () => {
    const bundle = fixtureBundle();
    expect(cellDocument(bundle, 2, 1)).toBeNull();
    expect(cellDocument(bundle, 3, 0)).toBeNull();
    expect(cellDocument(bundle, -1, 0)).toBeNull();
  });
});

describe("renderModel", () => {
  test("cells carry the active query hue and brightness", () => {
    let state = initialViewState(fixtureBundle());
    state = selectTab(state, "term-cat").state;
    const model = renderModel(state);
    const first = model.cells[0]!;
    expect(first.hue).toBe(120);
    expect(first.brightness).toBe(0);
    const last = model.cells[6]!;
    expect(last.brightness).toBe(1);
  });

  test("active cluster marks member cells with its hue", () => {
    let state = initialViewState(fixtureBundle());
    state = selectTab(state, "cluster-1").state;
    const model = renderModel(state);
    const byDoc = new Map(model.cells.map((cell) => [cell.docId, cell]));
    expect(byDoc.get("d2")!.clusterMember).toBe(true);
    expect(byDoc.get("d2")!.clusterHue).toBe(240);
    expect(byDoc.get("d3")!.clusterMember).toBe(false);
  });

  test("empty trailing cells render neutral", () => {
    const model = renderModel(initialViewState(fixtureBundle()));
    const empty = model.cells[7]!;
    expect(empty.docId).toBeNull();
    expect(empty.hue).toBeNull();
    expect(empty.pressed).toBe(false);
  });

  test("pressed and examined shading reach cells and titles", () => {
    let state = initialViewState(fixtureBundle());
    state = withPressed(state, ["d4"]);
    state = withExamined(state, "d5");
    const model = renderModel(state);
    expect(model.cells.find((cell) => cell.docId === "d4")!.pressed).toBe(true);
    expect(model.titles.find((title) => title.docId === "d5")!.examined).toBe(true);
    expect(model.titles.find((title) => title.docId === "d4")!.pressed).toBe(true);
  });

  test("exactly the active tabs are flagged", () => {
    let state = initialViewState(fixtureBundle());
    state = selectTab(state, "term-dog").state;
    state = selectTab(state, "cluster-2").state;
    const model = renderModel(state);
    expect(model.tabs.filter((tab) => tab.active).map((tab) => tab.id)).toEqual([
      "term-dog",
      "cluster-2",
    ]);
  });
});

describe("generated action sequences", () => {
  const tabIds = [
    "vector", "conjunction", "term-cat", "term-dog",
    "cluster-1", "cluster-2", "bogus-tab",
  ];

  test("invariants hold across 200 random steps per seed", () => {
    const bundle = fixtureBundle();
    for (let seed = 1; seed <= 20; seed += 1) {
      const random = mulberry32(seed);
      let state = initialViewState(bundle);
      const serverPressed: string[] = []; // reference toggle model

      for (let step = 0; step < 200; step += 1) {
        const roll = random();
        if (roll < 0.5) {
          const id = tabIds[Math.floor(random() * tabIds.length)]!;
          const before = { pressed: state.pressed, examined: state.examined };
          state = selectTab(state, id).state;
          expect(state.pressed).toBe(before.pressed);
          expect(state.examined).toBe(before.examined);
        } else if (roll < 0.85) {
          const row = Math.floor(random() * bundle.grid.rows);
          const col = Math.floor(random() * bundle.grid.cols);
          const docId = cellDocument(bundle, row, col);
          if (docId !== null) {
            const index = serverPressed.indexOf(docId);
            if (index >= 0) {
              serverPressed.splice(index, 1);
            } else {
              serverPressed.push(docId);
            }
            state = withPressed(state, serverPressed);
          }
        } else {
          const doc = bundle.documents[Math.floor(random() * bundle.documents.length)]!;
          state = withExamined(state, doc.id);
        }

        // exactly one query tab active, at most one cluster tab
        const active = layerById(bundle, state.activeQueryTab);
        expect(active).toBeDefined();
        expect(active!.kind).not.toBe("cluster");
        if (state.activeClusterTab !== null) {
          expect(layerById(bundle, state.activeClusterTab)!.kind).toBe("cluster");
        }
        expect(state.pressed).toEqual(serverPressed);

        // the cell->document mapping never depends on the active tabs
        const model = renderModel(state);
        model.cells.forEach((cell, position) => {
          expect(cell.docId).toBe(bundle.documents[position]?.id ?? null);
        });
      }
      expect(queryTabKind(state)).toBeDefined();
    }
  });
});
