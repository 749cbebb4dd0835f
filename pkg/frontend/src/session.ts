/**
 * MRT test-run state: answers, navigation, completion.
 *
 * The session file is the JSON the engine's `eval-mrt-make` command emits.
 * A run records one answer per item (re-answering overwrites) plus a
 * timestamp per response; submission requires every item answered.
 */

export interface MrtItem {
  row: number;
  correct: string;
  stimulus: string;
}

export interface MrtSessionData {
  seed: number;
  rows: string[][];
  items: MrtItem[];
}

export function parseMrtSession(jsonText: string): MrtSessionData {
  const blob = JSON.parse(jsonText);
  if (!Array.isArray(blob.rows) || !Array.isArray(blob.items)) {
    throw new Error("not a session file: expected rows and items");
  }
  for (const row of blob.rows) {
    if (!Array.isArray(row) || row.length !== 6) {
      throw new Error("every answer row must have 6 words");
    }
  }
  for (const item of blob.items) {
    if (typeof item.row !== "number" || item.row < 0 || item.row >= blob.rows.length) {
      throw new Error(`item row ${item.row} out of range`);
    }
  }
  return { seed: blob.seed ?? 0, rows: blob.rows, items: blob.items };
}

export class TestRun {
  readonly session: MrtSessionData;
  private answers: (string | null)[];
  private timestamps: (number | null)[];
  private cursor = 0;
  private clock: () => number;

  constructor(session: MrtSessionData, clock: () => number = () => Date.now()) {
    this.session = session;
    this.answers = session.items.map(() => null);
    this.timestamps = session.items.map(() => null);
    this.clock = clock;
  }

  get index(): number {
    return this.cursor;
  }

  get length(): number {
    return this.session.items.length;
  }

  currentItem(): MrtItem {
    return this.session.items[this.cursor];
  }

  /** The 6 answer choices for the current item. */
  currentChoices(): string[] {
    return this.session.rows[this.currentItem().row];
  }

  answerCurrent(word: string): void {
    if (!this.currentChoices().includes(word)) {
      throw new Error(`"${word}" is not among the current item's choices`);
    }
    this.answers[this.cursor] = word;
    this.timestamps[this.cursor] = this.clock();
  }

  answerAt(index: number): string | null {
    return this.answers[index];
  }

  timestampAt(index: number): number | null {
    return this.timestamps[index];
  }

  next(): boolean {
    if (this.cursor + 1 >= this.length) return false;
    this.cursor += 1;
    return true;
  }

  back(): boolean {
    if (this.cursor === 0) return false;
    this.cursor -= 1;
    return true;
  }

  isComplete(): boolean {
    return this.answers.every((a) => a !== null);
  }

  /** Answers for export; throws while any item is unanswered. */
  completedAnswers(): string[] {
    if (!this.isComplete()) throw new Error("run is incomplete; answer every item first");
    return this.answers.map((a) => a as string);
  }

  correctCount(): number {
    let n = 0;
    this.session.items.forEach((item, i) => {
      if (this.answers[i] === item.correct) n += 1;
    });
    return n;
  }
}
