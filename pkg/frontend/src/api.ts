/**
 * Thin client for the TTS service's documented HTTP API: /process,
 * /score-mrt, /score-mos, /voices, /version.  Audio requests de-duplicate
 * in flight so mashing Play never stacks downloads.
 */

export type TextOutputType = "TOKENS" | "WORDS" | "PHONEMES" | "ALLOPHONES" | "ACOUSTPARAMS";
export type InputType = "TEXT" | "SSML";

export interface EvalReportJson {
  mrt: { percent_correct: number; n_answers: number } | null;
  mos: { mean: number; distribution: Record<string, number>; n_responses: number } | null;
  n_listeners: number;
}

type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class TtsClient {
  readonly baseUrl: string;
  private fetchFn: FetchLike;
  private inFlightAudio = new Map<string, Promise<Blob>>();

  constructor(baseUrl: string, fetchFn?: FetchLike) {
    this.baseUrl = baseUrl.replace(/\/+$/, "");
    this.fetchFn = fetchFn ?? ((url, init) => fetch(url, init));
  }

  processUrl(text: string, outputType: string, inputType: InputType = "TEXT", voice?: string): string {
    const params = new URLSearchParams({
      INPUT_TEXT: text,
      INPUT_TYPE: inputType,
      OUTPUT_TYPE: outputType,
    });
    if (voice) params.set("VOICE", voice);
    return `${this.baseUrl}/process?${params.toString()}`;
  }

  /** Reachability probe; resolves to the server version string. */
  async version(): Promise<string> {
    const r = await this.fetchFn(`${this.baseUrl}/version`);
    if (!r.ok) throw new Error(`server answered ${r.status}`);
    return (await r.text()).trim();
  }

  async voices(): Promise<string[]> {
    const r = await this.fetchFn(`${this.baseUrl}/voices`);
    if (!r.ok) throw new Error(`server answered ${r.status}`);
    const text = await r.text();
    return text.split("\n").filter((line) => line.length > 0);
  }

  async processText(
    text: string,
    outputType: TextOutputType,
    inputType: InputType = "TEXT",
  ): Promise<string> {
    const r = await this.fetchFn(this.processUrl(text, outputType, inputType));
    if (!r.ok) throw new Error(await errorText(r));
    return r.text();
  }

  async processAudio(text: string, voice: string, inputType: InputType = "TEXT"): Promise<Blob> {
    const url = this.processUrl(text, "AUDIO", inputType, voice);
    const pending = this.inFlightAudio.get(url);
    if (pending) return pending;
    const request = (async () => {
      try {
        const r = await this.fetchFn(url);
        if (!r.ok) throw new Error(await errorText(r));
        return await r.blob();
      } finally {
        this.inFlightAudio.delete(url);
      }
    })();
    this.inFlightAudio.set(url, request);
    return request;
  }

  pendingAudioCount(): number {
    return this.inFlightAudio.size;
  }

  async scoreMrt(sessionJson: string, sheetsCsv: string): Promise<EvalReportJson> {
    return this.postForm("/score-mrt", { SESSION: sessionJson, SHEETS: sheetsCsv });
  }

  async scoreMos(responsesCsv: string): Promise<EvalReportJson> {
    return this.postForm("/score-mos", { RESPONSES: responsesCsv });
  }

  private async postForm(path: string, fields: Record<string, string>): Promise<EvalReportJson> {
    const body = new URLSearchParams(fields).toString();
    const r = await this.fetchFn(`${this.baseUrl}${path}`, {
      method: "POST",
      headers: { "Content-Type": "application/x-www-form-urlencoded" },
      body,
    });
    if (!r.ok) throw new Error(await errorText(r));
    return (await r.json()) as EvalReportJson;
  }
}

async function errorText(r: Response): Promise<string> {
  try {
    const text = (await r.text()).trim();
    return text || `server answered ${r.status}`;
  } catch {
    return `server answered ${r.status}`;
  }
}
