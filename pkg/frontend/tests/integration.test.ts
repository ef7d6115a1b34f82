/**
 * Round trip against the real Python service over HTTP.
 *
 * Spawns the service on a loopback port and drives the full scripted
 * briefing session through the production client stack (ApiClient →
 * ChatController → reducer → preview renderer): ticker clarification with
 * free-text answer, deck build, parameter edits, rebuild, and a preview
 * refresh pushed over the event stream.
 */

import { spawn, type ChildProcess } from "node:child_process";
import { fileURLToPath } from "node:url";
import { afterAll, beforeAll, describe, expect, it } from "vitest";
import { ApiClient } from "../src/api.js";
import { ChatController } from "../src/controller.js";
import { deckThumbnails } from "../src/preview.js";

const SERVER_SCRIPT = fileURLToPath(new URL("./fixture_server.py", import.meta.url));

let server: ChildProcess;
let baseUrl: string;

beforeAll(async () => {
  server = spawn("python3", ["-u", SERVER_SCRIPT], { stdio: ["ignore", "pipe", "pipe"] });
  let stderr = "";
  server.stderr!.on("data", (chunk: Buffer) => (stderr += chunk.toString()));
  const port = await new Promise<number>((resolve, reject) => {
    let out = "";
    const timer = setTimeout(
      () => reject(new Error(`service did not start\n${out}\n${stderr}`)),
      90_000,
    );
    server.stdout!.on("data", (chunk: Buffer) => {
      out += chunk.toString();
      const m = out.match(/LISTENING (\d+)/);
      if (m) {
        clearTimeout(timer);
        resolve(Number(m[1]));
      }
    });
    server.on("exit", (code) => reject(new Error(`service exited ${code}\n${stderr}`)));
  });
  baseUrl = `http://127.0.0.1:${port}`;
  // wait until the socket actually accepts requests
  for (let i = 0; ; i++) {
    try {
      const res = await fetch(`${baseUrl}/skills`);
      if (res.ok) break;
    } catch {
      if (i > 200) throw new Error("service never became reachable");
    }
    await new Promise((r) => setTimeout(r, 100));
  }
}, 120_000);

afterAll(() => {
  server?.kill("SIGKILL");
});

describe("scripted briefing session through the real service", () => {
  it(
    "builds, edits, and rebuilds the deck with live preview updates",
    async () => {
      const controller = new ChatController(new ApiClient(baseUrl));
      await controller.start();
      expect(controller.getView().sessionId).toBeTruthy();
      // the stream handshake completes asynchronously after start()
      const openDeadline = Date.now() + 5000;
      while (controller.getView().connection !== "open" && Date.now() < openDeadline) {
        await new Promise((r) => setTimeout(r, 25));
      }
      expect(controller.getView().connection).toBe("open");

      // 1. briefing request triggers a free-text ticker clarification
      await controller.send("create a briefing deck about Tesla Motor");
      let view = controller.getView();
      expect(view.pendingClarification?.missing).toBe("ticker");
      expect(controller.quickReplies()).toEqual([]);

      // 2. answer it and run the analysis
      await controller.send("TSLA");
      expect(controller.getView().pendingClarification).toBeNull();
      await controller.send("Run the analysis");
      view = controller.getView();
      expect(view.deckVersion).toBe(1);
      expect(view.deck?.slides).toHaveLength(10);
      expect(view.deck?.parameters.aggregation_metric).toBe("mean");

      // 3. preview renderer produces one thumbnail per slide
      const thumbs = deckThumbnails(view.deck!);
      expect(thumbs).toHaveLength(10);
      for (const svg of thumbs) expect(svg.startsWith("<svg")).toBe(true);

      // 4. parameter edits + rerun rebuild the deck
      await controller.send("Change the time horizon of the analysis to 6 months");
      await controller.send("use the Median");
      await controller.send("Run the analysis");
      view = controller.getView();
      expect(view.deckVersion).toBe(2);
      expect(view.deck?.parameters.horizon_months).toBe(6);
      expect(view.deck?.parameters.aggregation_metric).toBe("median");
      expect(view.deck?.slides).toHaveLength(10);

      // 5. a deck change made outside the controller (raw HTTP POST to the
      //    same session) reaches the preview through the event stream alone,
      //    within 2 seconds
      const versionBefore = controller.getView().deckVersion;
      const raw = await fetch(`${baseUrl}/sessions/${view.sessionId}/messages`, {
        method: "POST",
        headers: { "content-type": "application/json" },
        body: JSON.stringify({ text: "create a piechart using the F data" }),
      });
      expect(raw.ok).toBe(true);
      const deadline = Date.now() + 2000;
      while (controller.getView().deckVersion <= versionBefore && Date.now() < deadline) {
        await new Promise((r) => setTimeout(r, 25));
      }
      expect(controller.getView().deckVersion).toBeGreaterThan(versionBefore);
      expect(controller.getView().deck?.slides.length).toBeGreaterThan(10);

      // 6. transcript is complete and every turn succeeded
      const transcript = controller.getView().transcript;
      expect(transcript.length).toBeGreaterThanOrEqual(6);
      expect(transcript.every((e) => e.status === "ok")).toBe(true);

      controller.stop();
    },
    60_000,
  );
});
