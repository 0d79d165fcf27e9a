/**
 * Pure view state for the document map.
 *
 * Exactly one query-kind tab (vector / conjunction / term) is active at all
 * times; at most one cluster tab is active on top of it. Tab switches are
 * pure view changes: pressed cells and examined titles never move. All
 * press mutations round-trip through the server; the state here only
 * mirrors what the server confirmed.
 */

import type { MapBundle, WireLayer } from "./protocol.js";

export interface ViewState {
  readonly bundle: MapBundle;
  readonly activeQueryTab: string;
  readonly activeClusterTab: string | null;
  readonly pressed: readonly string[];
  readonly examined: ReadonlySet<string>;
}

export interface TabSelection {
  state: ViewState;
  /** Set when the selection was refused (unknown layer id). */
  notice?: string;
}

export function isQueryKind(layer: WireLayer): boolean {
  return layer.kind !== "cluster";
}

export function initialViewState(bundle: MapBundle): ViewState {
  const firstQueryLayer = bundle.layers.find(isQueryKind);
  if (!firstQueryLayer) {
    throw new Error("bundle has no query layer");
  }
  return {
    bundle,
    activeQueryTab: firstQueryLayer.id,
    activeClusterTab: null,
    pressed: [],
    examined: new Set(),
  };
}

export function layerById(bundle: MapBundle, layerId: string): WireLayer | undefined {
  return bundle.layers.find((layer) => layer.id === layerId);
}

export function selectTab(state: ViewState, layerId: string): TabSelection {
  const layer = layerById(state.bundle, layerId);
  if (!layer) {
    return { state, notice: `no such tab: ${layerId}` };
  }
  if (isQueryKind(layer)) {
    return { state: { ...state, activeQueryTab: layer.id } };
  }
  // re-selecting the active cluster tab turns the overlay off
  const activeClusterTab = state.activeClusterTab === layer.id ? null : layer.id;
  return { state: { ...state, activeClusterTab } };
}

/** The document shown in a cell, or null for cells past the result list. */
export function cellDocument(bundle: MapBundle, row: number, col: number): string | null {
  if (row < 0 || row >= bundle.grid.rows || col < 0 || col >= bundle.grid.cols) {
    return null;
  }
  const position = row * bundle.grid.cols + col;
  return bundle.documents[position]?.id ?? null;
}

/** Adopt the server-confirmed pressed list (selection order). */
export function withPressed(state: ViewState, pressed: readonly string[]): ViewState {
  return { ...state, pressed: [...pressed] };
}

export function withExamined(state: ViewState, docId: string): ViewState {
  const examined = new Set(state.examined);
  examined.add(docId);
  return { ...state, examined };
}

export interface CellRender {
  row: number;
  col: number;
  docId: string | null;
  title: string | null;
  rank: number | null;
  /** Active query layer's hue, null on empty cells. */
  hue: number | null;
  brightness: number | null;
  pressed: boolean;
  examined: boolean;
  /** Overlay mark: member of the active cluster tab. */
  clusterMember: boolean;
  clusterHue: number | null;
}

export interface TabRender {
  id: string;
  kind: WireLayer["kind"];
  label: string;
  hue: number;
  active: boolean;
}

export interface TitleRender {
  docId: string;
  title: string;
  rank: number;
  pressed: boolean;
  examined: boolean;
}

export interface ColorBarRender {
  hue: number;
  /** Raw-score extremes mapped to brightness 0 and 1 by the server. */
  low: number;
  high: number;
}

export interface RenderModel {
  tabs: TabRender[];
  cells: CellRender[];
  titles: TitleRender[];
  colorBar: ColorBarRender;
}

export function renderModel(state: ViewState): RenderModel {
  const { bundle } = state;
  const queryLayer = layerById(bundle, state.activeQueryTab);
  if (!queryLayer) {
    throw new Error(`active query tab ${state.activeQueryTab} not in bundle`);
  }
  const clusterLayer =
    state.activeClusterTab === null ? undefined : layerById(bundle, state.activeClusterTab);
  const members = new Set(clusterLayer?.members ?? []);
  const pressed = new Set(state.pressed);

  const cells: CellRender[] = [];
  for (let row = 0; row < bundle.grid.rows; row += 1) {
    for (let col = 0; col < bundle.grid.cols; col += 1) {
      const position = row * bundle.grid.cols + col;
      const doc = bundle.documents[position];
      if (!doc) {
        cells.push({
          row, col,
          docId: null, title: null, rank: null,
          hue: null, brightness: null,
          pressed: false, examined: false,
          clusterMember: false, clusterHue: null,
        });
        continue;
      }
      cells.push({
        row, col,
        docId: doc.id,
        title: doc.title,
        rank: doc.rank,
        hue: queryLayer.hue,
        brightness: queryLayer.brightness[position] ?? 0,
        pressed: pressed.has(doc.id),
        examined: state.examined.has(doc.id),
        clusterMember: members.has(doc.id),
        clusterHue: clusterLayer ? clusterLayer.hue : null,
      });
    }
  }

  return {
    tabs: bundle.layers.map((layer) => ({
      id: layer.id,
      kind: layer.kind,
      label: layer.label,
      hue: layer.hue,
      active: layer.id === state.activeQueryTab || layer.id === state.activeClusterTab,
    })),
    cells,
    titles: bundle.documents.map((doc) => ({
      docId: doc.id,
      title: doc.title,
      rank: doc.rank,
      pressed: pressed.has(doc.id),
      examined: state.examined.has(doc.id),
    })),
    colorBar: { hue: queryLayer.hue, low: 0, high: 1 },
  };
}
