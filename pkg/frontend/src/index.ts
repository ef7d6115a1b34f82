export * from "./types.js";
export * from "./state.js";
export * from "./preview.js";
export * from "./api.js";
export * from "./controller.js";
