/**
 * Wire types shared with the report-generation service.
 *
 * The deck-JSON layout is documented in ../../docs/deck-json.md; the
 * parse functions below validate payloads at the trust boundary so the
 * rest of the client can rely on the shapes.
 */

export interface ChartSeries {
  label: string;
  values: number[];
}

export interface ChartObject {
  kind: "chart";
  chart_kind: "piechart" | "barchart" | "linechart" | "table";
  title: string;
  series: ChartSeries[];
  x_labels: string[];
}

export interface InsightObject {
  kind: "insight";
  lines: string[];
}

export interface TableObject {
  kind: "table";
  headers: string[];
  rows: string[][];
}

export type SlideObject = ChartObject | InsightObject | TableObject;

export interface Slide {
  title: string;
  date: string;
  objects: SlideObject[];
}

export interface DeckParameters {
  comparable_firms: string[];
  horizon_months: number;
  aggregation_metric: "mean" | "median";
}

export interface Deck {
  name: string;
  parameters: DeckParameters;
  slides: Slide[];
}

export interface Clarification {
  missing: string;
  unknown_word: string | null;
  candidates: string[];
}

export interface ChatTurn {
  session_id: string;
  user_text: string;
  reply_text: string;
  clarification: Clarification | null;
  deck_version: number;
  deck_name: string | null;
}

export interface DeckEvent {
  deck_version: number;
  deck_name: string;
}

export class SchemaError extends Error {}

function fail(path: string, expected: string): never {
  throw new SchemaError(`${path}: expected ${expected}`);
}

function str(v: unknown, path: string): string {
  if (typeof v !== "string") fail(path, "string");
  return v;
}

function num(v: unknown, path: string): number {
  if (typeof v !== "number" || !Number.isFinite(v)) fail(path, "finite number");
  return v;
}

function arr(v: unknown, path: string): unknown[] {
  if (!Array.isArray(v)) fail(path, "array");
  return v;
}

function obj(v: unknown, path: string): Record<string, unknown> {
  if (typeof v !== "object" || v === null || Array.isArray(v)) fail(path, "object");
  return v as Record<string, unknown>;
}

const CHART_KINDS = new Set(["piechart", "barchart", "linechart", "table"]);

function parseSlideObject(v: unknown, path: string): SlideObject {
  const o = obj(v, path);
  const kind = str(o.kind, `${path}.kind`);
  if (kind === "chart") {
    const chartKind = str(o.chart_kind, `${path}.chart_kind`);
    if (!CHART_KINDS.has(chartKind)) fail(`${path}.chart_kind`, "known chart kind");
    const xLabels = arr(o.x_labels, `${path}.x_labels`).map((l, i) =>
      str(l, `${path}.x_labels[${i}]`),
    );
    const series = arr(o.series, `${path}.series`).map((s, i) => {
      const so = obj(s, `${path}.series[${i}]`);
      const values = arr(so.values, `${path}.series[${i}].values`).map((x, j) =>
        num(x, `${path}.series[${i}].values[${j}]`),
      );
      if (values.length !== xLabels.length) {
        fail(`${path}.series[${i}].values`, `length ${xLabels.length}`);
      }
      return { label: str(so.label, `${path}.series[${i}].label`), values };
    });
    return {
      kind: "chart",
      chart_kind: chartKind as ChartObject["chart_kind"],
      title: str(o.title, `${path}.title`),
      series,
      x_labels: xLabels,
    };
  }
  if (kind === "insight") {
    return {
      kind: "insight",
      lines: arr(o.lines, `${path}.lines`).map((l, i) => str(l, `${path}.lines[${i}]`)),
    };
  }
  if (kind === "table") {
    const headers = arr(o.headers, `${path}.headers`).map((h, i) =>
      str(h, `${path}.headers[${i}]`),
    );
    const rows = arr(o.rows, `${path}.rows`).map((r, i) => {
      const cells = arr(r, `${path}.rows[${i}]`).map((c, j) =>
        str(c, `${path}.rows[${i}][${j}]`),
      );
      if (cells.length !== headers.length) fail(`${path}.rows[${i}]`, `width ${headers.length}`);
      return cells;
    });
    return { kind: "table", headers, rows };
  }
  fail(`${path}.kind`, "chart | insight | table");
}

export function parseDeck(v: unknown): Deck {
  const o = obj(v, "deck");
  const p = obj(o.parameters, "deck.parameters");
  const metric = str(p.aggregation_metric, "deck.parameters.aggregation_metric");
  if (metric !== "mean" && metric !== "median") {
    fail("deck.parameters.aggregation_metric", "mean | median");
  }
  return {
    name: str(o.name, "deck.name"),
    parameters: {
      comparable_firms: arr(p.comparable_firms, "deck.parameters.comparable_firms").map(
        (f, i) => str(f, `deck.parameters.comparable_firms[${i}]`),
      ),
      horizon_months: num(p.horizon_months, "deck.parameters.horizon_months"),
      aggregation_metric: metric,
    },
    slides: arr(o.slides, "deck.slides").map((s, i) => {
      const so = obj(s, `deck.slides[${i}]`);
      return {
        title: str(so.title, `deck.slides[${i}].title`),
        date: str(so.date, `deck.slides[${i}].date`),
        objects: arr(so.objects, `deck.slides[${i}].objects`).map((ob, j) =>
          parseSlideObject(ob, `deck.slides[${i}].objects[${j}]`),
        ),
      };
    }),
  };
}

export function parseChatTurn(v: unknown): ChatTurn {
  const o = obj(v, "turn");
  let clarification: Clarification | null = null;
  if (o.clarification !== null && o.clarification !== undefined) {
    const c = obj(o.clarification, "turn.clarification");
    clarification = {
      missing: str(c.missing, "turn.clarification.missing"),
      unknown_word: c.unknown_word === null ? null : str(c.unknown_word, "turn.clarification.unknown_word"),
      candidates: arr(c.candidates, "turn.clarification.candidates").map((x, i) =>
        str(x, `turn.clarification.candidates[${i}]`),
      ),
    };
  }
  return {
    session_id: str(o.session_id, "turn.session_id"),
    user_text: str(o.user_text, "turn.user_text"),
    reply_text: str(o.reply_text, "turn.reply_text"),
    clarification,
    deck_version: num(o.deck_version, "turn.deck_version"),
    deck_name: o.deck_name === null || o.deck_name === undefined ? null : str(o.deck_name, "turn.deck_name"),
  };
}

export function parseDeckEvent(v: unknown): DeckEvent {
  const o = obj(v, "event");
  return {
    deck_version: num(o.deck_version, "event.deck_version"),
    deck_name: str(o.deck_name, "event.deck_name"),
  };
}
