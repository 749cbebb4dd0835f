/**
 * Client-side score previews and CSV export.
 *
 * The arithmetic mirrors the engine's documented rounding exactly
 * (round half up to one decimal; mean as the plain weighted average), so a
 * preview never drifts from the authoritative score of the exported CSV.
 */

export function round1HalfUp(x: number): number {
  if (x < 0) throw new Error("scores are never negative");
  return Math.floor(x * 10 + 0.5) / 10;
}

export function mrtPercentCorrect(correct: number, total: number): number {
  if (total === 0) return 0.0;
  return round1HalfUp((100 * correct) / total);
}

export interface MosPreview {
  mean: number;
  distribution: Record<number, number>; // rating -> percent, 1 decimal
  n: number;
}

export function mosPreview(ratings: number[]): MosPreview {
  const counts: Record<number, number> = { 1: 0, 2: 0, 3: 0, 4: 0, 5: 0 };
  for (const r of ratings) {
    if (!Number.isInteger(r) || r < 1 || r > 5) throw new Error(`rating out of scale: ${r}`);
    counts[r] += 1;
  }
  const n = ratings.length;
  const distribution: Record<number, number> = {};
  let weighted = 0;
  for (let r = 1; r <= 5; r++) {
    distribution[r] = n ? round1HalfUp((100 * counts[r]) / n) : 0;
    weighted += r * counts[r];
  }
  return { mean: n ? weighted / n : 0, distribution, n };
}

function csvField(value: string): string {
  return /[",\n]/.test(value) ? `"${value.replace(/"/g, '""')}"` : value;
}

/** Sheet schema of the engine's eval module: `listener,item,answer`. */
export function mrtSheetCsv(listener: string, answers: string[]): string {
  const lines = ["listener,item,answer"];
  answers.forEach((answer, i) => {
    lines.push(`${csvField(listener)},${i},${csvField(answer)}`);
  });
  return lines.join("\n") + "\n";
}

/** Response schema of the engine's eval module: `listener,sentence,rating`. */
export function mosResponsesCsv(
  listener: string,
  entries: Array<{ sentenceId: string; rating: number }>,
): string {
  const lines = ["listener,sentence,rating"];
  for (const { sentenceId, rating } of entries) {
    lines.push(`${csvField(listener)},${csvField(sentenceId)},${rating}`);
  }
  return lines.join("\n") + "\n";
}
