import { describe, expect, it } from "vitest";

import { parseMrtSession, TestRun } from "../src/session.js";

const SESSION = JSON.stringify({
  seed: 7,
  rows: [
    ["bbiri", "bibiri", "ebiri", "ekika", "ebika", "muntu"],
    ["abantu", "kirabo", "bitabo", "kintu", "kaalo", "akaalo"],
  ],
  items: [
    { row: 0, correct: "bbiri", stimulus: "mrt_000_bbiri.wav" },
    { row: 1, correct: "kaalo", stimulus: "mrt_001_kaalo.wav" },
    { row: 0, correct: "muntu", stimulus: "mrt_002_muntu.wav" },
  ],
});

describe("parseMrtSession", () => {
  it("accepts the engine's session JSON", () => {
    const session = parseMrtSession(SESSION);
    expect(session.items).toHaveLength(3);
    expect(session.rows[0]).toHaveLength(6);
  });

  it("rejects malformed sessions", () => {
    expect(() => parseMrtSession("{}")).toThrow();
    expect(() =>
      parseMrtSession(JSON.stringify({ rows: [["a", "b"]], items: [] })),
    ).toThrow();
    expect(() =>
      parseMrtSession(
        JSON.stringify({ rows: [["a", "b", "c", "d", "e", "f"]], items: [{ row: 3 }] }),
      ),
    ).toThrow();
  });
});

describe("TestRun", () => {
  it("requires one answer per item before submission", () => {
    const run = new TestRun(parseMrtSession(SESSION));
    expect(run.isComplete()).toBe(false);
    expect(() => run.completedAnswers()).toThrow();
    run.answerCurrent("bbiri");
    run.next();
    run.answerCurrent("kaalo");
    run.next();
    expect(run.isComplete()).toBe(false);
    run.answerCurrent("ekika");
    expect(run.isComplete()).toBe(true);
    expect(run.completedAnswers()).toEqual(["bbiri", "kaalo", "ekika"]);
  });

  it("preserves answers across back navigation", () => {
    const run = new TestRun(parseMrtSession(SESSION));
    run.answerCurrent("muntu");
    run.next();
    run.answerCurrent("kintu");
    run.back();
    expect(run.answerAt(0)).toBe("muntu");
    expect(run.answerAt(1)).toBe("kintu");
    run.answerCurrent("ebika"); // re-answer overwrites
    expect(run.answerAt(0)).toBe("ebika");
  });

  it("rejects answers outside the item's row", () => {
    const run = new TestRun(parseMrtSession(SESSION));
    expect(() => run.answerCurrent("nonsense")).toThrow();
  });

  it("records a timestamp per response", () => {
    let now = 1000;
    const run = new TestRun(parseMrtSession(SESSION), () => now);
    run.answerCurrent("bbiri");
    now = 2000;
    run.next();
    run.answerCurrent("kaalo");
    expect(run.timestampAt(0)).toBe(1000);
    expect(run.timestampAt(1)).toBe(2000);
  });

  it("counts correct answers for the preview", () => {
    const run = new TestRun(parseMrtSession(SESSION));
    run.answerCurrent("bbiri"); // correct
    run.next();
    run.answerCurrent("abantu"); // wrong
    run.next();
    run.answerCurrent("muntu"); // correct
    expect(run.correctCount()).toBe(2);
  });

  it("navigation stays inside bounds", () => {
    const run = new TestRun(parseMrtSession(SESSION));
    expect(run.back()).toBe(false);
    expect(run.next()).toBe(true);
    expect(run.next()).toBe(true);
    expect(run.next()).toBe(false);
    expect(run.index).toBe(2);
  });
});
