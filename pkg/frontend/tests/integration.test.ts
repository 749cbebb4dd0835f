/**
 * End-to-end checks against the real engine: spawns `luganda-tts serve`
 * with a synthetic voice, then drives the same client modules the page
 * uses.  Skips when the engine CLI is not installed.
 */
import { spawn, spawnSync } from "node:child_process";
import { mkdtempSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { TtsClient } from "../src/api.js";
import { mosPreview, mosResponsesCsv, mrtPercentCorrect, mrtSheetCsv } from "../src/scoring.js";
import { parseMrtSession, TestRun } from "../src/session.js";

const CLI = "luganda-tts";
const available = spawnSync(CLI, ["--version"], { encoding: "utf-8" }).status === 0;
const PORT = 39125;

let serverProc: ReturnType<typeof spawn> | null = null;
let workDir = "";
let client: TtsClient;

describe.skipIf(!available)("against the live engine", () => {
  beforeAll(async () => {
    workDir = mkdtempSync(join(tmpdir(), "lg-client-"));
    const corpus = join(workDir, "corpus.txt");
    writeFileSync(corpus, "butiko\nera ndyerera ddala ennyumba\nabantu bbiri ne ssatu\nmukazi ayita bulungi\nekika kya kabaka\n");
    const build = spawnSync(
      CLI,
      ["voice-build", join(workDir, "session"), join(workDir, "voice"), "--synthetic-corpus", corpus],
      { encoding: "utf-8" },
    );
    expect(build.status).toBe(0);

    serverProc = spawn(CLI, [
      "serve", "--voice", `demo=${join(workDir, "voice")}`, "--port", String(PORT),
    ]);
    client = new TtsClient(`http://127.0.0.1:${PORT}`);
    // session precondition: wait for /version to answer
    let lastError: unknown = null;
    for (let i = 0; i < 50; i++) {
      try {
        await client.version();
        lastError = null;
        break;
      } catch (err) {
        lastError = err;
        await new Promise((r) => setTimeout(r, 200));
      }
    }
    if (lastError) throw lastError;
  }, 60000);

  afterAll(() => {
    serverProc?.kill();
  });

  it("shows `b u t i k o` for butiko + PHONEMES", async () => {
    const body = await client.processText("butiko", "PHONEMES");
    expect(body).toBe("b u t i k o\n");
  });

  it("plays audio through the documented endpoint", async () => {
    const blob = await client.processAudio("butiko", "demo");
    const bytes = new Uint8Array(await blob.arrayBuffer());
    expect(String.fromCharCode(...bytes.slice(0, 4))).toBe("RIFF");
  });

  it("12-item MRT run: exported CSV scores identically via CLI and service", async () => {
    const make = spawnSync(CLI, ["eval-mrt-make", "--items", "12", "--seed", "99"], {
      encoding: "utf-8",
    });
    expect(make.status).toBe(0);
    const sessionJson = make.stdout;
    const run = new TestRun(parseMrtSession(sessionJson));

    // a listener who gets 9 of 12 right
    for (let i = 0; i < run.length; i++) {
      const item = run.currentItem();
      if (i % 4 === 3) {
        const wrong = run.currentChoices().find((w) => w !== item.correct)!;
        run.answerCurrent(wrong);
      } else {
        run.answerCurrent(item.correct);
      }
      run.next();
    }
    expect(run.isComplete()).toBe(true);

    const csv = mrtSheetCsv("webuser", run.completedAnswers());
    const displayed = mrtPercentCorrect(run.correctCount(), run.length);

    // service-side score (what the client displays after submit)
    const report = await client.scoreMrt(sessionJson, csv);
    expect(report.mrt?.percent_correct).toBe(displayed);

    // CLI score of the exported CSV must agree exactly
    const sessionPath = join(workDir, "session.json");
    const sheetPath = join(workDir, "sheet.csv");
    writeFileSync(sessionPath, sessionJson);
    writeFileSync(sheetPath, csv);
    const scored = spawnSync(
      CLI,
      ["eval-mrt-score", "--session", sessionPath, "--sheets", sheetPath, "--json"],
      { encoding: "utf-8" },
    );
    expect(scored.status).toBe(0);
    const cliReport = JSON.parse(scored.stdout);
    expect(cliReport.mrt.percent_correct).toBe(displayed);
  }, 30000);

  it("MOS preview mean matches the CLI score within 0.05", async () => {
    const ratings = [1, 2, 2, 3, 3, 3, 3, 4, 4, 5, 3, 2];
    const entries = ratings.map((rating, i) => ({ sentenceId: `s${i}`, rating }));
    const csv = mosResponsesCsv("webuser", entries);
    const preview = mosPreview(ratings);

    const report = await client.scoreMos(csv);
    expect(Math.abs((report.mos?.mean ?? NaN) - preview.mean)).toBeLessThanOrEqual(0.05);

    const csvPath = join(workDir, "mos.csv");
    writeFileSync(csvPath, csv);
    const scored = spawnSync(CLI, ["eval-mos-score", "--responses", csvPath, "--json"], {
      encoding: "utf-8",
    });
    expect(scored.status).toBe(0);
    const cliReport = JSON.parse(scored.stdout);
    expect(Math.abs(cliReport.mos.mean - preview.mean)).toBeLessThanOrEqual(0.05);
  }, 30000);
});
