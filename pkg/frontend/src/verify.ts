/**
 * Client-side credential verification, mirroring the service's check order:
 * issuer resolution, signature over canonical bytes, shape, validity
 * window, then status decoding. The first failing check stops the chain.
 */

import { canonicalize } from "./canonical";
import { ed25519Verify } from "./ed25519";
import { b64urlDecode, decodeStatusEntry } from "./statusList";
import type { Credential, StatusVerdict } from "./types";

export interface CheckResult {
  name: string;
  ok: boolean;
  detail: string;
}

export interface VerifyOutcome {
  verdict: "Valid" | "Invalid" | "Revoked" | "Suspended" | "Expired";
  checks: CheckResult[];
}

/** Document sources; the app backs these with the service API, tests with fixtures. */
export interface Resolver {
  resolveDidKey(uri: string): Promise<Uint8Array | null>;
  fetchStatusListCredential(listId: string): Promise<Credential | null>;
}

const CONTEXT_V2 = "https://www.w3.org/ns/credentials/v2";

function stripProof(credential: Credential): Record<string, unknown> {
  const { proof: _proof, ...rest } = credential;
  return rest;
}

export async function verifyCredential(
  credential: Credential,
  resolver: Resolver,
  now: Date = new Date(),
): Promise<VerifyOutcome> {
  const checks: CheckResult[] = [];
  const fail = (verdict: VerifyOutcome["verdict"]): VerifyOutcome => ({ verdict, checks });

  const issuerKey = await resolver.resolveDidKey(credential.issuer).catch(() => null);
  checks.push({
    name: "issuer resolution",
    ok: issuerKey !== null,
    detail: issuerKey ? credential.issuer : `cannot resolve ${credential.issuer}`,
  });
  if (issuerKey === null) return fail("Invalid");

  let signatureOk = false;
  if (credential.proof?.proofValue) {
    signatureOk = await ed25519Verify(
      issuerKey,
      b64urlDecode(credential.proof.proofValue),
      canonicalize(stripProof(credential)),
    );
  }
  checks.push({
    name: "signature",
    ok: signatureOk,
    detail: signatureOk ? "Ed25519 signature over canonical form" : "signature does not verify",
  });
  if (!signatureOk) return fail("Invalid");

  const from = Date.parse(credential.validFrom);
  const until = Date.parse(credential.validUntil);
  const shapeOk =
    Array.isArray(credential["@context"]) &&
    credential["@context"][0] === CONTEXT_V2 &&
    Array.isArray(credential.type) &&
    credential.type.includes("VerifiableCredential") &&
    Number.isFinite(from) &&
    Number.isFinite(until) &&
    until > from;
  checks.push({
    name: "shape",
    ok: shapeOk,
    detail: shapeOk ? "context, type, and dates well-formed" : "malformed credential",
  });
  if (!shapeOk) return fail("Invalid");

  const inWindow = now.getTime() >= from && now.getTime() <= until;
  checks.push({
    name: "validity window",
    ok: inWindow,
    detail: `${credential.validFrom} .. ${credential.validUntil}`,
  });
  if (!inWindow) return fail(now.getTime() > until ? "Expired" : "Invalid");

  if (!credential.credentialStatus) {
    checks.push({ name: "revocation status", ok: true, detail: "no status entry" });
    return { verdict: "Valid", checks };
  }

  const status = credential.credentialStatus;
  const listCredential = await resolver
    .fetchStatusListCredential(status.id)
    .catch(() => null);
  if (listCredential === null) {
    checks.push({
      name: "revocation status",
      ok: false,
      detail: "STATUS_UNAVAILABLE: cannot fetch status list",
    });
    return fail("Invalid");
  }

  // The status list is itself a credential; check its signature before
  // trusting the bitstring.
  const listKey = await resolver.resolveDidKey(listCredential.issuer).catch(() => null);
  const listSignatureOk =
    listKey !== null &&
    listCredential.proof !== undefined &&
    (await ed25519Verify(
      listKey,
      b64urlDecode(listCredential.proof.proofValue),
      canonicalize(stripProof(listCredential)),
    ));
  if (!listSignatureOk) {
    checks.push({
      name: "revocation status",
      ok: false,
      detail: "status list credential signature does not verify",
    });
    return fail("Invalid");
  }

  let state: StatusVerdict;
  try {
    const subject = listCredential.credentialSubject as {
      encodedList: string;
      statusSize: number;
    };
    state = await decodeStatusEntry(
      subject.encodedList,
      subject.statusSize,
      parseInt(status.statusListIndex, 10),
    );
  } catch (error) {
    checks.push({
      name: "revocation status",
      ok: false,
      detail: `cannot decode status list: ${String(error)}`,
    });
    return fail("Invalid");
  }
  checks.push({
    name: "revocation status",
    ok: state === "Valid",
    detail: `entry ${status.statusListIndex} is ${state}`,
  });
  if (state === "Revoked") return fail("Revoked");
  if (state === "Suspended") return fail("Suspended");
  return { verdict: "Valid", checks };
}
