// Severity colour mapping for badges and matrix cells. HIGH and MEDIUM
// match the red/amber used in the assessment tables; the rest are
// workbench defaults.

export const SEVERITY_COLORS: Record<string, string> = {
  CRITICAL: "#8b0000",
  HIGH: "#fd6864",
  MEDIUM: "#ffcc67",
  LOW: "#58a55c",
  NOTE: "#9e9e9e",
};

export function severityColor(severity: string | null | undefined): string {
  if (!severity) return "";
  return SEVERITY_COLORS[severity.toUpperCase()] ?? "";
}
