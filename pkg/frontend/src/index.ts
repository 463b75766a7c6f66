export * from "./types.js";
export * from "./schema.js";
export * from "./serialize.js";
export * from "./palette.js";
export * from "./pageview.js";
export * from "./session.js";
export * from "./render.js";
export * from "./stats.js";
export * from "./api.js";
