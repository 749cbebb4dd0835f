/** Single-page client bootstrap: connect to the service, pick a voice,
 * switch between the synthesis, MRT, and MOS modes. */
import { TtsClient } from "./api.js";
import { mountMosView } from "./mos.js";
import { mountMrtView } from "./mrt.js";
import { mountSynthView } from "./synth.js";

type Mode = "SYNTH" | "MRT" | "MOS";

const state = {
  client: null as TtsClient | null,
  voice: "",
  mode: "SYNTH" as Mode,
};

const serverInput = document.querySelector<HTMLInputElement>("#server-url")!;
const connectBtn = document.querySelector<HTMLButtonElement>("#connect")!;
const statusSpan = document.querySelector<HTMLElement>("#status")!;
const voiceSel = document.querySelector<HTMLSelectElement>("#voice")!;
const banner = document.querySelector<HTMLElement>("#banner")!;
const tabs = document.querySelectorAll<HTMLButtonElement>("nav button");
const view = document.querySelector<HTMLElement>("#view")!;

function showError(message: string): void {
  banner.textContent = message;
  banner.hidden = false;
  window.setTimeout(() => {
    banner.hidden = true;
  }, 6000);
}

function currentVoice(): string {
  return state.voice;
}

function renderMode(): void {
  if (!state.client) {
    view.innerHTML = "<p>Connect to a server first.</p>";
    return;
  }
  for (const tab of tabs) {
    tab.classList.toggle("active", tab.dataset.mode === state.mode);
  }
  if (state.mode === "SYNTH") mountSynthView(view, state.client, currentVoice, showError);
  else if (state.mode === "MRT") mountMrtView(view, state.client, currentVoice, showError);
  else mountMosView(view, state.client, currentVoice, showError);
}

connectBtn.addEventListener("click", async () => {
  const client = new TtsClient(serverInput.value);
  try {
    // a session starts only once /version answers
    const version = await client.version();
    const voices = await client.voices();
    state.client = client;
    state.voice = voices[0] ?? "";
    voiceSel.innerHTML = voices.map((v) => `<option>${v}</option>`).join("");
    voiceSel.addEventListener("change", () => {
      state.voice = voiceSel.value;
    });
    statusSpan.textContent = `connected (engine ${version}, ${voices.length} voice(s))`;
    renderMode();
  } catch (err) {
    statusSpan.textContent = "not connected";
    showError(`cannot reach server: ${err}`);
  }
});

for (const tab of tabs) {
  tab.addEventListener("click", () => {
    state.mode = tab.dataset.mode as Mode;
    renderMode();
  });
}

renderMode();
