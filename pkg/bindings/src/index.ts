/**
 * Node bindings for the stratkit command line tool.
 *
 * Every algorithm runs in the Python package via its CLI; this module only
 * converts host-side label structures to the label-list file format, shells
 * out, and parses the results back. Identical (data, method, k, seed)
 * therefore produce fold vectors bit-identical to direct CLI runs.
 */

import { execFile } from "node:child_process";
import { mkdtemp, readFile, rm, writeFile } from "node:fs/promises";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { promisify } from "node:util";

const execFileP = promisify(execFile);

/** Sparse multilabel dataset: per-point ascending positive class indices. */
export interface Dataset {
  /** number of classes (columns of the indicator matrix) */
  q: number;
  rows: ReadonlyArray<ReadonlyArray<number>>;
}

export type SplitMethod = "random" | "is" | "pmbsrs" | "optisplit";

export interface SplitOptions {
  method?: SplitMethod;
  k?: number;
  seed?: number;
  /** objective for the optimising method */
  measure?: "rld" | "dcp";
  maxEpochs?: number;
  /** interpreter with the stratkit package installed (default "python3") */
  python?: string;
}

/** Aggregate split-quality scores, one per measure. */
export interface Scores {
  ed: number;
  ld: number;
  dcp: number;
  rld: number;
}

/** Convert a dense 0/1 (or boolean) indicator matrix, one row per point. */
export function fromDense(matrix: ReadonlyArray<ReadonlyArray<number | boolean>>): Dataset {
  if (matrix.length === 0) throw new Error("dataset needs at least one data point");
  const q = matrix[0].length;
  const rows = matrix.map((cells, i) => {
    if (cells.length !== q) {
      throw new Error(`row ${i}: expected ${q} cells, found ${cells.length}`);
    }
    const row: number[] = [];
    cells.forEach((cell, j) => {
      if (cell === 1 || cell === true) row.push(j);
      else if (cell !== 0 && cell !== false) {
        throw new Error(`row ${i}: cell must be 0 or 1, got ${cell}`);
      }
    });
    return row;
  });
  return { q, rows };
}

/** Per-class positive counts; conversion and serialization preserve these. */
export function classSizes(dataset: Dataset): number[] {
  const sizes = new Array<number>(dataset.q).fill(0);
  for (const row of dataset.rows) for (const c of row) sizes[c] += 1;
  return sizes;
}

function checkDataset(dataset: Dataset): void {
  const { q, rows } = dataset;
  if (!Number.isInteger(q) || q < 1) throw new Error("dataset needs at least one class");
  if (rows.length === 0) throw new Error("dataset needs at least one data point");
  rows.forEach((row, i) => {
    let prev = -1;
    for (const c of row) {
      if (!Number.isInteger(c) || c < 0 || c >= q) {
        throw new Error(`row ${i}: class index ${c} out of range [0, ${q})`);
      }
      if (c <= prev) {
        throw new Error(`row ${i}: class indices must be ascending and unique`);
      }
      prev = c;
    }
  });
}

function serializeLabels(dataset: Dataset): string {
  const lines = dataset.rows.map((row) => row.join(" "));
  return `${dataset.rows.length} ${dataset.q}\n` + lines.join("\n") + "\n";
}

async function runCli(python: string, args: string[]): Promise<string> {
  try {
    const { stdout } = await execFileP(python, ["-m", "stratkit", ...args]);
    return stdout;
  } catch (err) {
    const stderr = String((err as { stderr?: string }).stderr ?? "").trim();
    const msg = stderr.replace(/^stratkit: error: /, "");
    throw new Error(msg || (err as Error).message);
  }
}

async function inTempDir<T>(fn: (dir: string) => Promise<T>): Promise<T> {
  const dir = await mkdtemp(join(tmpdir(), "stratkit-"));
  try {
    return await fn(dir);
  } finally {
    await rm(dir, { recursive: true, force: true });
  }
}

/** Compute a k-fold assignment; returns one fold index per data point. */
export async function split(dataset: Dataset, options: SplitOptions = {}): Promise<number[]> {
  checkDataset(dataset);
  const {
    method = "optisplit",
    k = 5,
    seed = 0,
    measure = "rld",
    maxEpochs = 20,
    python = process.env.STRATKIT_PYTHON ?? "python3",
  } = options;
  return inTempDir(async (dir) => {
    const labelsPath = join(dir, "data.labels");
    const foldsPath = join(dir, "out.folds");
    await writeFile(labelsPath, serializeLabels(dataset), "utf-8");
    await runCli(python, [
      "split",
      "--labels", labelsPath,
      "--method", method,
      "--k", String(k),
      "--seed", String(seed),
      "--measure", measure,
      "--max-epochs", String(maxEpochs),
      "--out", foldsPath,
    ]);
    const text = await readFile(foldsPath, "utf-8");
    return text.trimEnd().split("\n").map(Number);
  });
}

/** Score an existing fold assignment with all four measures. */
export async function evaluate(
  dataset: Dataset,
  folds: ReadonlyArray<number>,
  k?: number,
  python: string = process.env.STRATKIT_PYTHON ?? "python3",
): Promise<Scores> {
  checkDataset(dataset);
  const nFolds = k ?? (folds.length ? Math.max(...folds) + 1 : 1);
  return inTempDir(async (dir) => {
    const labelsPath = join(dir, "data.labels");
    const foldsPath = join(dir, "in.folds");
    await writeFile(labelsPath, serializeLabels(dataset), "utf-8");
    await writeFile(foldsPath, folds.map((f) => `${f}\n`).join(""), "utf-8");
    const stdout = await runCli(python, [
      "evaluate",
      "--labels", labelsPath,
      "--folds", foldsPath,
      "--k", String(nFolds),
    ]);
    const [header, row] = stdout.trimEnd().split("\n");
    const cells = new Map(header.split(",").map((name, i) => [name, row.split(",")[i]]));
    return {
      ed: Number(cells.get("ed")),
      ld: Number(cells.get("ld")),
      dcp: Number(cells.get("dcp")),
      rld: Number(cells.get("rld")),
    };
  });
}
