/** Wire types exchanged with the credentialing service. */

export interface CredentialStatusRef {
  id: string;
  statusListIndex: string;
  statusPurpose: string;
}

export interface Proof {
  type: string;
  created: string;
  verificationMethod: string;
  proofValue: string;
}

export interface Credential {
  "@context": string[];
  id: string;
  type: string[];
  issuer: string;
  validFrom: string;
  validUntil: string;
  credentialSubject: Record<string, unknown>;
  credentialStatus?: CredentialStatusRef;
  proof?: Proof;
}

export interface ExtractedValue {
  value: string;
  confidence: number;
}

export interface SubmissionView {
  doc_id: string;
  kind: string;
  payload_type: string;
  tokens: { label: string; text: string; box: number[]; confidence: number }[];
  pre_validated: boolean;
}

export interface ProcessView {
  process_id: string;
  holder_did: string;
  state: string;
  submissions: SubmissionView[];
  extraction_results: Record<string, { kind: string; fields: Record<string, ExtractedValue[]> }>;
  corrections: {
    doc_id: string;
    label: string;
    old_value: string;
    new_value: string;
    issuer_did: string;
    timestamp: string;
  }[];
  report: {
    process_id: string;
    consistent: boolean;
    discrepancies: { rule: string; severity: string; detail: string; involved: [string, string][] }[];
  } | null;
  issued: string[];
  offer_id: string | null;
  transitions: [string, string][];
}

export interface Correction {
  doc_id: string;
  label: string;
  old_value: string;
  new_value: string;
}

export type StatusVerdict = "Valid" | "Revoked" | "Suspended";
