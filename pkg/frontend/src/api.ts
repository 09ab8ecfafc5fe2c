/** Typed client for the credentialing service HTTP API. */

import type { Correction, Credential, ProcessView } from "./types";
import type { Resolver } from "./verify";

export class ApiError extends Error {
  constructor(
    public code: string,
    public detail: string,
    public status: number,
  ) {
    super(`${code}: ${detail}`);
  }
}

export class Api {
  constructor(public baseUrl: string) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await fetch(`${this.baseUrl}${path}`, {
      headers: { "content-type": "application/json" },
      ...init,
    });
    const body = await response.json().catch(() => ({}));
    if (!response.ok) {
      throw new ApiError(
        (body as { error?: string }).error ?? "UNKNOWN",
        (body as { detail?: string }).detail ?? response.statusText,
        response.status,
      );
    }
    return body as T;
  }

  createDid(): Promise<{ uri: string; publicKey: string }> {
    return this.request("/dids", { method: "POST", body: "{}" });
  }

  getDid(uri: string): Promise<{ uri: string; publicKey: string }> {
    return this.request(`/dids/${uri}`);
  }

  createProcess(holderDid: string): Promise<ProcessView> {
    return this.request("/processes", {
      method: "POST",
      body: JSON.stringify({ holder_did: holderDid }),
    });
  }

  listProcesses(): Promise<ProcessView[]> {
    return this.request("/processes");
  }

  getProcess(processId: string): Promise<ProcessView> {
    return this.request(`/processes/${processId}`);
  }

  submitDocuments(processId: string, documents: unknown[]): Promise<ProcessView> {
    return this.request(`/processes/${processId}/documents`, {
      method: "POST",
      body: JSON.stringify({ documents }),
    });
  }

  recordValidation(
    processId: string,
    issuerDid: string,
    decision: "Approve" | "Reject",
    corrections: Correction[],
  ): Promise<ProcessView> {
    return this.request(`/processes/${processId}/validation`, {
      method: "POST",
      body: JSON.stringify({ issuer_did: issuerDid, decision, corrections }),
    });
  }

  issue(processId: string): Promise<{ offer_id: string; redeem_url: string }> {
    return this.request(`/processes/${processId}/issue`, {
      method: "POST",
      body: "{}",
    });
  }

  redeem(offerId: string): Promise<{ credentials: Credential[] }> {
    return this.request(`/offers/${offerId}/redeem`, { method: "POST" });
  }

  revokeCredential(credentialId: string): Promise<{ status: string }> {
    return this.request(`/credentials/${credentialId}/revoke`, { method: "POST" });
  }

  revokeProcess(processId: string): Promise<ProcessView> {
    return this.request(`/processes/${processId}/revoke`, { method: "POST" });
  }

  verifyRemote(credential: Credential): Promise<{ verdict: string; reason: string | null }> {
    return this.request("/verify", {
      method: "POST",
      body: JSON.stringify(credential),
    });
  }

  statusList(listId: string): Promise<Credential> {
    return this.request(`/status-lists/${listId}`);
  }

  /** Document resolver backing fully client-side verification. */
  resolver(): Resolver {
    return {
      resolveDidKey: async (uri: string) => {
        try {
          const did = await this.getDid(uri);
          return b64urlToBytes(did.publicKey);
        } catch {
          return null;
        }
      },
      fetchStatusListCredential: async (listId: string) => {
        try {
          return await this.statusList(listId);
        } catch {
          return null;
        }
      },
    };
  }
}

function b64urlToBytes(encoded: string): Uint8Array {
  const padded =
    encoded.replace(/-/g, "+").replace(/_/g, "/") +
    "=".repeat((4 - (encoded.length % 4)) % 4);
  const binary = atob(padded);
  const bytes = new Uint8Array(binary.length);
  for (let i = 0; i < binary.length; i++) bytes[i] = binary.charCodeAt(i);
  return bytes;
}

export function defaultBaseUrl(): string {
  if (typeof localStorage !== "undefined") {
    const stored = localStorage.getItem("credsvc.baseUrl");
    if (stored) return stored;
  }
  return "http://127.0.0.1:8470";
}
