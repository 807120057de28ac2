import { defineConfig } from "vitest/config";

export default defineConfig({
  server: {
    port: 5173,
    // forward API calls to a locally running `mtrain serve` during development
    proxy: {
      "/courses": "http://127.0.0.1:8000",
      "/sessions": "http://127.0.0.1:8000",
      "/reports": "http://127.0.0.1:8000",
    },
  },
  test: {
    environment: "jsdom",
    include: ["tests/**/*.test.ts"],
    setupFiles: ["tests/setup.ts"],
  },
});
