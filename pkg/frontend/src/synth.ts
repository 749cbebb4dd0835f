/** Interactive synthesis view: text in, stage output or playable audio out. */
import { TextOutputType, TtsClient } from "./api.js";

const STAGE_OUTPUTS: TextOutputType[] = [
  "TOKENS",
  "WORDS",
  "PHONEMES",
  "ALLOPHONES",
  "ACOUSTPARAMS",
];

export function mountSynthView(
  root: HTMLElement,
  client: TtsClient,
  voice: () => string,
  showError: (message: string) => void,
): void {
  root.innerHTML = `
    <textarea id="synth-text" rows="4" placeholder="Wandika ekigambo wano... (type Luganda text)"></textarea>
    <div class="row">
      <select id="synth-output">
        ${STAGE_OUTPUTS.map((o) => `<option value="${o}">${o}</option>`).join("")}
        <option value="AUDIO">AUDIO</option>
      </select>
      <label><input type="checkbox" id="synth-ssml"> SSML</label>
      <button id="synth-run">Process</button>
      <button id="synth-play">Play</button>
      <a id="synth-download" download="synthesis.wav" hidden>Download wav</a>
    </div>
    <pre id="synth-result" class="result"></pre>
    <audio id="synth-audio" controls hidden></audio>
  `;
  const textArea = root.querySelector<HTMLTextAreaElement>("#synth-text")!;
  const outputSel = root.querySelector<HTMLSelectElement>("#synth-output")!;
  const ssmlBox = root.querySelector<HTMLInputElement>("#synth-ssml")!;
  const runBtn = root.querySelector<HTMLButtonElement>("#synth-run")!;
  const playBtn = root.querySelector<HTMLButtonElement>("#synth-play")!;
  const download = root.querySelector<HTMLAnchorElement>("#synth-download")!;
  const result = root.querySelector<HTMLPreElement>("#synth-result")!;
  const audio = root.querySelector<HTMLAudioElement>("#synth-audio")!;

  const refreshButtons = () => {
    const empty = textArea.value.trim().length === 0;
    runBtn.disabled = empty;
    playBtn.disabled = empty; // empty text cannot be played
  };
  textArea.addEventListener("input", refreshButtons);
  refreshButtons();

  const inputType = () => (ssmlBox.checked ? "SSML" : "TEXT");

  runBtn.addEventListener("click", async () => {
    const choice = outputSel.value;
    try {
      if (choice === "AUDIO") {
        await playAudio();
        return;
      }
      const body = await client.processText(
        textArea.value,
        choice as TextOutputType,
        inputType(),
      );
      result.textContent = body;
    } catch (err) {
      showError(String(err));
    }
  });

  async function playAudio(): Promise<void> {
    const blob = await client.processAudio(textArea.value, voice(), inputType());
    const url = URL.createObjectURL(blob);
    audio.src = url;
    audio.hidden = false;
    download.href = url;
    download.hidden = false;
    await audio.play(); // the browser decodes the wav natively
  }

  playBtn.addEventListener("click", async () => {
    try {
      await playAudio();
    } catch (err) {
      showError(String(err));
    }
  });
}
