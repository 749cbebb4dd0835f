/** MRT listening-test view: play each stimulus, pick one of six words,
 * export the sheet CSV, and submit it to the server-side scorer. */
import { TtsClient } from "./api.js";
import { mrtPercentCorrect, mrtSheetCsv } from "./scoring.js";
import { parseMrtSession, TestRun } from "./session.js";

export function mountMrtView(
  root: HTMLElement,
  client: TtsClient,
  voice: () => string,
  showError: (message: string) => void,
): void {
  root.innerHTML = `
    <p>Load a session file made with <code>luganda-tts eval-mrt-make</code>, then
    listen to each item and pick the word you heard.</p>
    <div class="row">
      <input type="file" id="mrt-file" accept=".json,application/json">
      <input type="text" id="mrt-listener" placeholder="listener id" value="listener01">
    </div>
    <div id="mrt-run" hidden>
      <div class="row">
        <button id="mrt-play">Play item</button>
        <span id="mrt-progress"></span>
      </div>
      <div id="mrt-choices" class="choices"></div>
      <div class="row">
        <button id="mrt-back">Back</button>
        <button id="mrt-next">Next</button>
        <button id="mrt-submit" disabled>Submit</button>
        <a id="mrt-export" download="mrt_sheet.csv" hidden>Download CSV</a>
      </div>
      <pre id="mrt-score" class="result"></pre>
    </div>
  `;
  const fileInput = root.querySelector<HTMLInputElement>("#mrt-file")!;
  const listenerInput = root.querySelector<HTMLInputElement>("#mrt-listener")!;
  const runDiv = root.querySelector<HTMLElement>("#mrt-run")!;
  const playBtn = root.querySelector<HTMLButtonElement>("#mrt-play")!;
  const progress = root.querySelector<HTMLElement>("#mrt-progress")!;
  const choicesDiv = root.querySelector<HTMLElement>("#mrt-choices")!;
  const backBtn = root.querySelector<HTMLButtonElement>("#mrt-back")!;
  const nextBtn = root.querySelector<HTMLButtonElement>("#mrt-next")!;
  const submitBtn = root.querySelector<HTMLButtonElement>("#mrt-submit")!;
  const exportLink = root.querySelector<HTMLAnchorElement>("#mrt-export")!;
  const scorePre = root.querySelector<HTMLPreElement>("#mrt-score")!;

  let run: TestRun | null = null;
  let sessionJson = "";

  fileInput.addEventListener("change", async () => {
    const file = fileInput.files?.[0];
    if (!file) return;
    try {
      sessionJson = await file.text();
      run = new TestRun(parseMrtSession(sessionJson));
      runDiv.hidden = false;
      scorePre.textContent = "";
      render();
    } catch (err) {
      showError(String(err));
    }
  });

  function render(): void {
    if (!run) return;
    progress.textContent = `item ${run.index + 1} / ${run.length}`;
    choicesDiv.innerHTML = "";
    const chosen = run.answerAt(run.index);
    for (const word of run.currentChoices()) {
      const btn = document.createElement("button");
      btn.textContent = word;
      btn.className = word === chosen ? "choice chosen" : "choice";
      btn.addEventListener("click", () => {
        run!.answerCurrent(word);
        render();
      });
      choicesDiv.appendChild(btn);
    }
    submitBtn.disabled = !run.isComplete(); // incomplete runs cannot submit
  }

  playBtn.addEventListener("click", async () => {
    if (!run) return;
    try {
      // the stimulus is the item's word, synthesized by the service
      const blob = await client.processAudio(run.currentItem().correct, voice());
      await new Audio(URL.createObjectURL(blob)).play();
    } catch (err) {
      showError(String(err));
    }
  });

  backBtn.addEventListener("click", () => {
    run?.back(); // answers persist across navigation
    render();
  });
  nextBtn.addEventListener("click", () => {
    run?.next();
    render();
  });

  submitBtn.addEventListener("click", async () => {
    if (!run || !run.isComplete()) return;
    const answers = run.completedAnswers();
    const csv = mrtSheetCsv(listenerInput.value || "listener01", answers);
    exportLink.href = URL.createObjectURL(new Blob([csv], { type: "text/csv" }));
    exportLink.hidden = false;
    const preview = mrtPercentCorrect(run.correctCount(), run.length);
    try {
      const report = await client.scoreMrt(sessionJson, csv);
      const official = report.mrt?.percent_correct;
      scorePre.textContent =
        `score: ${official}%\n(client preview ${preview}% — same rounding, must agree)`;
    } catch (err) {
      scorePre.textContent = `client preview: ${preview}% (scorer unreachable)`;
      showError(String(err));
    }
  });
}
