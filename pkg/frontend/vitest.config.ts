import { defineConfig } from "vitest/config";

export default defineConfig({
  test: {
    environment: "node",
    globalSetup: "./tests/setup/server.ts",
    // tests share one live server and edit its corpus; keep files sequential
    fileParallelism: false,
    testTimeout: 30_000,
    hookTimeout: 60_000,
  },
});
