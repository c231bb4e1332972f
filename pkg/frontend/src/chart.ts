/** Per-day post-frequency chart as deterministic inline SVG. */

export interface DailyCount {
  date: string;
  count: number;
}

export interface Bar {
  x: number;
  y: number;
  width: number;
  height: number;
  date: string;
  count: number;
}

/** Bars over the full date range (gap days get zero-height entries). */
export function frequencyBars(
  counts: DailyCount[],
  width: number,
  height: number,
): Bar[] {
  if (counts.length === 0) return [];
  const byDate = new Map(counts.map((c) => [c.date, c.count]));
  const dates = allDatesBetween(counts[0].date, counts[counts.length - 1].date);
  const max = Math.max(...counts.map((c) => c.count));
  const barWidth = width / dates.length;
  return dates.map((date, i) => {
    const count = byDate.get(date) ?? 0;
    const h = max > 0 ? (count / max) * (height - 2) : 0;
    return {
      x: i * barWidth,
      y: height - h,
      width: Math.max(barWidth - 1, 0.5),
      height: h,
      date,
      count,
    };
  });
}

function allDatesBetween(first: string, last: string): string[] {
  const out: string[] = [];
  const start = new Date(first + "T00:00:00Z").getTime();
  const end = new Date(last + "T00:00:00Z").getTime();
  const day = 86_400_000;
  for (let t = start; t <= end; t += day) {
    out.push(new Date(t).toISOString().slice(0, 10));
  }
  return out;
}

export function frequencySvg(counts: DailyCount[], width = 640, height = 80): string {
  const bars = frequencyBars(counts, width, height);
  const rects = bars
    .filter((b) => b.count > 0)
    .map(
      (b) =>
        `<rect x="${b.x.toFixed(2)}" y="${b.y.toFixed(2)}" width="${b.width.toFixed(2)}" ` +
        `height="${b.height.toFixed(2)}" class="freq-bar"><title>${b.date}: ${b.count}</title></rect>`,
    )
    .join("");
  return (
    `<svg viewBox="0 0 ${width} ${height}" width="${width}" height="${height}" ` +
    `class="freq-chart" role="img">${rects}</svg>`
  );
}
