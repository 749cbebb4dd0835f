import { describe, expect, it } from "vitest";

import { TtsClient } from "../src/api.js";

function fakeFetch(
  handler: (url: string, init?: RequestInit) => { status?: number; body?: string | Blob },
) {
  const calls: Array<{ url: string; init?: RequestInit }> = [];
  const fetchFn = async (url: string, init?: RequestInit): Promise<Response> => {
    calls.push({ url, init });
    const { status = 200, body = "" } = handler(url, init);
    return new Response(body, { status });
  };
  return { fetchFn, calls };
}

describe("TtsClient", () => {
  it("builds documented /process URLs", () => {
    const client = new TtsClient("http://localhost:59125/");
    const url = client.processUrl("butiko", "PHONEMES");
    expect(url).toBe(
      "http://localhost:59125/process?INPUT_TEXT=butiko&INPUT_TYPE=TEXT&OUTPUT_TYPE=PHONEMES",
    );
    expect(client.processUrl("a b", "AUDIO", "TEXT", "demo")).toContain("INPUT_TEXT=a+b");
    expect(client.processUrl("a", "AUDIO", "TEXT", "demo")).toContain("VOICE=demo");
  });

  it("checks reachability via /version", async () => {
    const { fetchFn, calls } = fakeFetch(() => ({ body: "0.1.0\n" }));
    const client = new TtsClient("http://x", fetchFn);
    expect(await client.version()).toBe("0.1.0");
    expect(calls[0].url).toBe("http://x/version");
  });

  it("surfaces server errors with the body text", async () => {
    const { fetchFn } = fakeFetch(() => ({ status: 500, body: "stage=select: no unit\n" }));
    const client = new TtsClient("http://x", fetchFn);
    await expect(client.processText("zz", "PHONEMES")).rejects.toThrow("stage=select");
  });

  it("de-duplicates in-flight audio requests", async () => {
    let resolve!: (r: Response) => void;
    const gate = new Promise<Response>((r) => (resolve = r));
    let hits = 0;
    const fetchFn = async (): Promise<Response> => {
      hits += 1;
      return gate;
    };
    const client = new TtsClient("http://x", fetchFn);
    const first = client.processAudio("butiko", "demo");
    const second = client.processAudio("butiko", "demo");
    expect(client.pendingAudioCount()).toBe(1);
    resolve(new Response(new Blob([new Uint8Array([1, 2])])));
    const [a, b] = await Promise.all([first, second]);
    expect(hits).toBe(1);
    expect(a).toBe(b);
    expect(client.pendingAudioCount()).toBe(0);
  });

  it("posts score requests as form data", async () => {
    const { fetchFn, calls } = fakeFetch(() => ({
      body: JSON.stringify({ mrt: { percent_correct: 100.0, n_answers: 3 }, mos: null, n_listeners: 1 }),
    }));
    const client = new TtsClient("http://x", fetchFn);
    const report = await client.scoreMrt("{}", "listener,item,answer\n");
    expect(report.mrt?.percent_correct).toBe(100.0);
    expect(calls[0].url).toBe("http://x/score-mrt");
    expect(calls[0].init?.method).toBe("POST");
    expect(String(calls[0].init?.body)).toContain("SESSION=");
    expect(String(calls[0].init?.body)).toContain("SHEETS=");
  });

  it("parses the voices listing", async () => {
    const { fetchFn } = fakeFetch(() => ({ body: "demo\nother\n" }));
    const client = new TtsClient("http://x", fetchFn);
    expect(await client.voices()).toEqual(["demo", "other"]);
  });
});
