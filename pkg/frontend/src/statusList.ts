/**
 * Client-side status list decoding: base64url, DEFLATE (zlib container),
 * then 2-bit entry extraction with bit 0 as the most significant bit of
 * byte 0. Produces the same verdict the backend computes for any list the
 * backend published.
 */

import type { StatusVerdict } from "./types";

export function b64urlDecode(encoded: string): Uint8Array {
  const padded =
    encoded.replace(/-/g, "+").replace(/_/g, "/") +
    "=".repeat((4 - (encoded.length % 4)) % 4);
  const binary = atob(padded);
  const bytes = new Uint8Array(binary.length);
  for (let i = 0; i < binary.length; i++) bytes[i] = binary.charCodeAt(i);
  return bytes;
}

export async function inflate(compressed: Uint8Array): Promise<Uint8Array> {
  const stream = new Blob([compressed as BlobPart])
    .stream()
    .pipeThrough(new DecompressionStream("deflate"));
  return new Uint8Array(await new Response(stream).arrayBuffer());
}

export async function decodeStatusEntry(
  encodedList: string,
  statusSize: number,
  index: number,
): Promise<StatusVerdict> {
  if (statusSize !== 2) throw new Error(`unsupported statusSize ${statusSize}`);
  if (!Number.isInteger(index) || index < 0) throw new Error(`bad index ${index}`);
  const raw = await inflate(b64urlDecode(encodedList));
  const byte = raw[index >> 2];
  if (byte === undefined) throw new Error(`index ${index} outside the list`);
  const shift = 6 - 2 * (index & 3);
  const state = (byte >> shift) & 0b11;
  switch (state) {
    case 0b00:
      return "Valid";
    case 0b01:
      return "Revoked";
    case 0b10:
      return "Suspended";
    default:
      throw new Error(`entry ${index} holds forbidden state 11`);
  }
}
