/**
 * Session controller: binds the protocol client to the view state.
 * One server session, one in-flight request, all document-state mutations
 * reconciled from server responses.
 */

import type {
  DocumentBody,
  EngineInfo,
  ExportBody,
  MapBundle,
  OpenSessionBody,
  PressedBody,
  ProtocolClient,
} from "./protocol.js";
import {
  cellDocument,
  initialViewState,
  renderModel,
  selectTab,
  withExamined,
  withPressed,
  type RenderModel,
  type ViewState,
} from "./state.js";

export class DocMapSession {
  session: string | null = null;
  engines: EngineInfo[] = [];
  state: ViewState | null = null;
  /** User-visible notices (refused tab selections and the like). */
  notices: string[] = [];
  onChange: (() => void) | null = null;

  constructor(private readonly client: ProtocolClient) {}

  private changed(): void {
    this.onChange?.();
  }

  private get sessionToken(): string {
    if (this.session === null) {
      throw new Error("session not open");
    }
    return this.session;
  }

  private get currentState(): ViewState {
    if (this.state === null) {
      throw new Error("no search yet");
    }
    return this.state;
  }

  async open(): Promise<EngineInfo[]> {
    const body = await this.client.request<OpenSessionBody>("open_session");
    this.session = body.session;
    this.engines = body.engines;
    this.changed();
    return this.engines;
  }

  async search(engineId: string, query: string): Promise<ViewState> {
    const bundle = await this.client.request<MapBundle>("search", {
      session: this.sessionToken,
      engine: engineId,
      query,
    });
    this.state = initialViewState(bundle);
    this.changed();
    return this.state;
  }

  /** Pure view change; pressed and examined state is untouched. */
  selectTab(layerId: string): ViewState {
    const selection = selectTab(this.currentState, layerId);
    if (selection.notice) {
      this.notices.push(selection.notice);
    }
    this.state = selection.state;
    this.changed();
    return this.state;
  }

  /** Toggle the document under a cell; empty cells are a no-op. */
  async clickCell(row: number, col: number): Promise<ViewState> {
    const state = this.currentState;
    const docId = cellDocument(state.bundle, row, col);
    if (docId === null) {
      return state;
    }
    return this.toggleDocument(docId);
  }

  async toggleDocument(docId: string): Promise<ViewState> {
    const body = await this.client.request<PressedBody>("toggle_press", {
      session: this.sessionToken,
      doc: docId,
    });
    this.state = withPressed(this.currentState, body.pressed);
    this.changed();
    return this.state;
  }

  /** Fetch the full text for the reading pane; shades the title as examined. */
  async fetchDocument(docId: string): Promise<DocumentBody> {
    const body = await this.client.request<DocumentBody>("get_document", {
      session: this.sessionToken,
      doc: docId,
    });
    this.state = withExamined(this.currentState, docId);
    this.changed();
    return body;
  }

  /** The session's run file: pressed order first, then remaining rank order. */
  async exportRun(): Promise<ExportBody> {
    return this.client.request<ExportBody>("export", { session: this.sessionToken });
  }

  async close(): Promise<void> {
    if (this.session !== null) {
      await this.client.request("close", { session: this.sessionToken });
      this.session = null;
    }
  }

  render(): RenderModel {
    return renderModel(this.currentState);
  }
}
