// Client-side check of a plan CSV before it is sent to the service, so a
// malformed row is reported with its line number instead of a generic 400.

export interface ParsedPlans {
  columns: string[];
  rows: { label: string; w: number[] }[];
}

export class CsvError extends Error {
  constructor(message: string, public readonly row: number | null = null) {
    super(message);
  }
}

export function parsePlanCsv(text: string): ParsedPlans {
  const lines = text.split(/\r?\n/).filter((line) => line.trim() !== "");
  if (lines.length === 0) {
    throw new CsvError("the plan file is empty");
  }
  const header = (lines[0] ?? "").split(",").map((cell) => cell.trim());
  if (header[0] !== "plan_id") {
    throw new CsvError("the header row must start with 'plan_id'", 1);
  }
  const columns = header.slice(1);
  if (columns.length === 0) {
    throw new CsvError("the header row names no attributes", 1);
  }
  const rows: { label: string; w: number[] }[] = [];
  for (let i = 1; i < lines.length; i++) {
    const cells = (lines[i] ?? "").split(",");
    if (cells.length !== columns.length + 1) {
      throw new CsvError(
        `row ${i + 1} has ${cells.length} cells, expected ${columns.length + 1}`,
        i + 1,
      );
    }
    const w: number[] = [];
    for (let c = 1; c < cells.length; c++) {
      const value = Number(cells[c]);
      if (!Number.isFinite(value)) {
        throw new CsvError(
          `row ${i + 1}: '${cells[c]}' is not a number`,
          i + 1,
        );
      }
      w.push(value);
    }
    rows.push({ label: (cells[0] ?? "").trim(), w });
  }
  if (rows.length === 0) {
    throw new CsvError("the plan file contains no plans");
  }
  return { columns, rows };
}
