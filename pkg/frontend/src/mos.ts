/** MOS rating view: play synthesized sentences, rate 1-5 on the standard
 * naturalness scale, export the response CSV, submit to the scorer. */
import { TtsClient } from "./api.js";
import { mosPreview, mosResponsesCsv } from "./scoring.js";

export const MOS_SCALE: Array<[number, string, string]> = [
  [1, "Bad", "No meaning understood"],
  [2, "Poor", "Considerable effort required"],
  [3, "Fair", "Moderate effort required"],
  [4, "Good", "Attention necessary"],
  [5, "Excellent", "No effort required"],
];

export function mountMosView(
  root: HTMLElement,
  client: TtsClient,
  voice: () => string,
  showError: (message: string) => void,
): void {
  root.innerHTML = `
    <p>Paste test sentences (one per line), play each, and rate its
    naturalness.</p>
    <textarea id="mos-sentences" rows="4" placeholder="one sentence per line"></textarea>
    <div class="row">
      <button id="mos-start">Start</button>
      <input type="text" id="mos-listener" placeholder="listener id" value="listener01">
    </div>
    <div id="mos-run" hidden>
      <div class="row">
        <button id="mos-play">Play sentence</button>
        <span id="mos-progress"></span>
      </div>
      <div id="mos-scale" class="choices"></div>
      <div class="row">
        <button id="mos-back">Back</button>
        <button id="mos-next">Next</button>
        <button id="mos-submit" disabled>Submit</button>
        <a id="mos-export" download="mos_responses.csv" hidden>Download CSV</a>
      </div>
      <pre id="mos-score" class="result"></pre>
    </div>
  `;
  const sentencesArea = root.querySelector<HTMLTextAreaElement>("#mos-sentences")!;
  const startBtn = root.querySelector<HTMLButtonElement>("#mos-start")!;
  const listenerInput = root.querySelector<HTMLInputElement>("#mos-listener")!;
  const runDiv = root.querySelector<HTMLElement>("#mos-run")!;
  const playBtn = root.querySelector<HTMLButtonElement>("#mos-play")!;
  const progress = root.querySelector<HTMLElement>("#mos-progress")!;
  const scaleDiv = root.querySelector<HTMLElement>("#mos-scale")!;
  const backBtn = root.querySelector<HTMLButtonElement>("#mos-back")!;
  const nextBtn = root.querySelector<HTMLButtonElement>("#mos-next")!;
  const submitBtn = root.querySelector<HTMLButtonElement>("#mos-submit")!;
  const exportLink = root.querySelector<HTMLAnchorElement>("#mos-export")!;
  const scorePre = root.querySelector<HTMLPreElement>("#mos-score")!;

  let sentences: string[] = [];
  let ratings: (number | null)[] = [];
  let cursor = 0;

  startBtn.addEventListener("click", () => {
    sentences = sentencesArea.value
      .split("\n")
      .map((s) => s.trim())
      .filter((s) => s.length > 0);
    if (sentences.length === 0) {
      showError("enter at least one sentence");
      return;
    }
    ratings = sentences.map(() => null);
    cursor = 0;
    runDiv.hidden = false;
    scorePre.textContent = "";
    render();
  });

  function render(): void {
    progress.textContent = `sentence ${cursor + 1} / ${sentences.length}: ${sentences[cursor]}`;
    scaleDiv.innerHTML = "";
    for (const [rating, label, effort] of MOS_SCALE) {
      const btn = document.createElement("button");
      btn.textContent = `${rating} ${label}`;
      btn.title = effort;
      btn.className = ratings[cursor] === rating ? "choice chosen" : "choice";
      btn.addEventListener("click", () => {
        ratings[cursor] = rating; // the UI offers nothing outside 1..5
        render();
      });
      scaleDiv.appendChild(btn);
    }
    submitBtn.disabled = ratings.some((r) => r === null); // missing rating blocks submission
    const given = ratings.filter((r): r is number => r !== null);
    if (given.length) {
      scorePre.textContent = `preview mean so far: ${mosPreview(given).mean.toFixed(2)}`;
    }
  }

  playBtn.addEventListener("click", async () => {
    try {
      const blob = await client.processAudio(sentences[cursor], voice());
      await new Audio(URL.createObjectURL(blob)).play();
    } catch (err) {
      showError(String(err));
    }
  });

  backBtn.addEventListener("click", () => {
    if (cursor > 0) cursor -= 1;
    render();
  });
  nextBtn.addEventListener("click", () => {
    if (cursor + 1 < sentences.length) cursor += 1;
    render();
  });

  submitBtn.addEventListener("click", async () => {
    const given = ratings.map((r, i) => ({ sentenceId: `s${i}`, rating: r as number }));
    if (ratings.some((r) => r === null)) return;
    const csv = mosResponsesCsv(listenerInput.value || "listener01", given);
    exportLink.href = URL.createObjectURL(new Blob([csv], { type: "text/csv" }));
    exportLink.hidden = false;
    const preview = mosPreview(given.map((g) => g.rating));
    try {
      const report = await client.scoreMos(csv);
      scorePre.textContent =
        `MOS mean: ${report.mos?.mean}\n(client preview ${preview.mean.toFixed(2)} — must agree within 0.05)`;
    } catch (err) {
      scorePre.textContent = `client preview mean: ${preview.mean.toFixed(2)} (scorer unreachable)`;
      showError(String(err));
    }
  });
}
