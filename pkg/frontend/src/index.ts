export * from "./protocol.js";
export * from "./state.js";
export * from "./colors.js";
export { DocMapSession } from "./controller.js";
export { WebSocketTransport } from "./transports/ws.js";
export { mountDocMap } from "./view.js";
