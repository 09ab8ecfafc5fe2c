/**
 * Human-readable labels for every workflow state. The mapping must stay
 * total: the state-enumeration test fails if the service knows a state this
 * table does not.
 */

export const STATE_LABELS: Record<string, string> = {
  AwaitingDocuments: "Waiting for documents",
  Extracting: "Extracting data",
  PendingValidation: "Waiting for issuer review",
  Rejected: "Rejected",
  Reconciling: "Cross-checking documents",
  ReconciliationFailed: "Cross-check failed",
  ReadyToIssue: "Ready to issue",
  Issued: "Credentials issued",
  Revoked: "Revoked",
};

export function stateLabel(state: string): string {
  const label = STATE_LABELS[state];
  if (!label) throw new Error(`no label for process state ${state}`);
  return label;
}
