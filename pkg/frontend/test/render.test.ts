import { mkdtempSync, readFileSync, rmSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { fileURLToPath } from "node:url";
import { afterEach, describe, expect, it } from "vitest";

import { main } from "../src/cli.js";
import { buildSpec, render } from "../src/render.js";

const FIXTURES = fileURLToPath(new URL("./fixtures", import.meta.url));

let tmp: string | undefined;
const freshDir = () => (tmp = mkdtempSync(join(tmpdir(), "plots-")));

afterEach(() => {
  if (tmp) rmSync(tmp, { recursive: true, force: true });
  tmp = undefined;
});

describe("render", () => {
  it("writes an svg and the matching spec json", () => {
    const out = freshDir();
    const paths = render("fig1", FIXTURES, out);
    expect(paths.svg).toBe(join(out, "fig1.svg"));
    const svg = readFileSync(paths.svg, "utf8");
    expect(svg).toContain("<svg");
    const spec = JSON.parse(readFileSync(paths.spec, "utf8"));
    expect(spec).toEqual(JSON.parse(JSON.stringify(buildSpec("fig1", FIXTURES))));
  });

  it("reruns byte-identically", () => {
    const out = freshDir();
    render("fig3", FIXTURES, out);
    const first = readFileSync(join(out, "fig3.svg"), "utf8");
    render("fig3", FIXTURES, out);
    expect(readFileSync(join(out, "fig3.svg"), "utf8")).toBe(first);
  });

  it("fails loudly on a missing bundle", () => {
    const out = freshDir();
    expect(() => render("fig2", out, out)).toThrow(/cannot read/);
  });

  it("fails loudly on an empty csv instead of drawing a blank", () => {
    const out = freshDir();
    writeFileSync(join(out, "fig1.csv"), "");
    expect(() => render("fig1", out, out)).toThrow(/no header/);
  });
});

describe("cli main", () => {
  it("renders all three figures", () => {
    const out = freshDir();
    expect(main(["all", "--csv-dir", FIXTURES, "--out-dir", out])).toBe(0);
    for (const name of ["fig1", "fig2", "fig3"]) {
      expect(readFileSync(join(out, `${name}.svg`), "utf8")).toContain("</svg>");
      expect(() =>
        JSON.parse(readFileSync(join(out, `${name}.spec.json`), "utf8")),
      ).not.toThrow();
    }
  });

  it("rejects unknown figures and missing flags", () => {
    expect(main(["fig9", "--csv-dir", FIXTURES])).toBe(2);
    expect(main(["fig1"])).toBe(2);
  });

  it("propagates read failures as exit 1", () => {
    const out = freshDir();
    expect(main(["fig1", "--csv-dir", join(out, "nope"), "--out-dir", out])).toBe(1);
  });
});
