/**
 * Canonical JSON serialization matching the issuing service byte-for-byte:
 * object keys sorted by Unicode code point at every depth, no insignificant
 * whitespace, UTF-8 output. Signatures cover exactly these bytes.
 */

function compareCodePoints(a: string, b: string): number {
  const as = Array.from(a);
  const bs = Array.from(b);
  const n = Math.min(as.length, bs.length);
  for (let i = 0; i < n; i++) {
    const ca = as[i].codePointAt(0)!;
    const cb = bs[i].codePointAt(0)!;
    if (ca !== cb) return ca - cb;
  }
  return as.length - bs.length;
}

function serialize(value: unknown): string {
  if (value === null || typeof value === "boolean" || typeof value === "string") {
    return JSON.stringify(value);
  }
  if (typeof value === "number") {
    if (!Number.isFinite(value)) throw new Error("non-finite number in credential");
    return JSON.stringify(value);
  }
  if (Array.isArray(value)) {
    return `[${value.map(serialize).join(",")}]`;
  }
  if (typeof value === "object") {
    const entries = Object.entries(value as Record<string, unknown>)
      .sort(([a], [b]) => compareCodePoints(a, b))
      .map(([k, v]) => `${JSON.stringify(k)}:${serialize(v)}`);
    return `{${entries.join(",")}}`;
  }
  throw new Error(`cannot canonicalize value of type ${typeof value}`);
}

export function canonicalize(value: Record<string, unknown>): Uint8Array {
  return new TextEncoder().encode(serialize(value));
}

export function canonicalString(value: Record<string, unknown>): string {
  return serialize(value);
}
