/**
 * Client/backend status parity: for every backend-encoded list the client's
 * bitstring decode must reach the identical verdict.
 */

import { readFileSync } from "node:fs";
import { describe, expect, it } from "vitest";
import { decodeStatusEntry } from "../src/statusList";

interface Case {
  encodedList: string;
  statusSize: number;
  index: number;
  expected: "Valid" | "Revoked" | "Suspended";
}

const fixture = JSON.parse(
  readFileSync(new URL("./fixtures/status_cases.json", import.meta.url), "utf-8"),
) as { cases: Case[] };

describe("status list decoding parity", () => {
  it("ships at least 1000 randomized cases", () => {
    expect(fixture.cases.length).toBeGreaterThanOrEqual(1000);
  });

  it("matches the backend verdict on every case", async () => {
    let okCount = 0;
    for (const c of fixture.cases) {
      const verdict = await decodeStatusEntry(c.encodedList, c.statusSize, c.index);
      if (verdict === c.expected) okCount += 1;
      else expect.fail(`index ${c.index}: got ${verdict}, backend says ${c.expected}`);
    }
    expect(okCount).toBe(fixture.cases.length); // 100% agreement
  });

  it("rejects malformed input instead of crashing", async () => {
    await expect(decodeStatusEntry("%%%not-base64%%%", 2, 0)).rejects.toThrow();
    await expect(decodeStatusEntry("AAAA", 2, 0)).rejects.toThrow(); // not DEFLATE
    await expect(
      decodeStatusEntry(fixture.cases[0].encodedList, 1, 0),
    ).rejects.toThrow(/statusSize/);
    await expect(
      decodeStatusEntry(fixture.cases[0].encodedList, 2, 10_000_000),
    ).rejects.toThrow(/outside/);
  });
});
