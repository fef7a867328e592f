import { existsSync, mkdtempSync, readFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";

import { describe, expect, it } from "vitest";

import { run, UsageError } from "../src/cli.js";

const FIXTURES = join(__dirname, "..", "fixtures");

function outPath(name: string): string {
  return join(mkdtempSync(join(tmpdir(), "figcli-")), name);
}

describe("cli run", () => {
  it("renders all three kinds end to end", () => {
    const jumps = outPath("jumps.svg");
    const res1 = run([
      "plot", "jump_vs_n", "--in", join(FIXTURES, "experiments_grid.csv"), "--out", jumps,
    ]);
    expect(existsSync(jumps)).toBe(true);
    expect(res1.notes[0]).toContain("gamma = 1, 10, 100");

    const loglog = outPath("loglog.svg");
    const res2 = run([
      "plot", "loglog_regression",
      "--in", join(FIXTURES, "experiments_scenarioA_gamma10.csv"),
      "--regression", join(FIXTURES, "regression.csv"),
      "--out", loglog,
    ]);
    expect(readFileSync(loglog, "utf8")).toContain("-0.2758");
    expect(res2.notes.join(";")).toContain("0 zero-jump runs excluded");

    const snapshot = outPath("snapshot.svg");
    run([
      "plot", "spatial_snapshot",
      "--graph", join(FIXTURES, "graph2d.spa"),
      "--detail", join(FIXTURES, "detail.csv"),
      "--out", snapshot,
    ]);
    expect(existsSync(snapshot)).toBe(true);
  });

  it("rejects unknown kinds and missing flags", () => {
    expect(() => run(["plot", "histogram", "--out", "x.svg"])).toThrow(UsageError);
    expect(() => run(["plot", "jump_vs_n", "--out", "x.svg"])).toThrow(UsageError);
    expect(() =>
      run(["plot", "loglog_regression", "--in", join(FIXTURES, "experiments_grid.csv"),
           "--out", "x.svg"]),
    ).toThrow(/--regression/);
    expect(() => run(["nope"])).toThrow(UsageError);
  });

  it("propagates data errors from the builders", () => {
    expect(() =>
      run([
        "plot", "spatial_snapshot",
        "--graph", join(FIXTURES, "graph2d.spa"),
        "--detail", join(FIXTURES, "regression.csv"),
        "--out", outPath("bad.svg"),
      ]),
    ).toThrow(/missing column/);
  });
});
