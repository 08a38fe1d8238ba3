// Wire types mirroring the llmrisk HTTP API payloads.

export interface RatingPayload {
  likelihood_score: string;
  likelihood_level: string;
  technical_impact_score: string;
  business_impact_score: string;
  final_impact_score: string;
  impact_level: string;
  severity: string;
}

export interface ApiErrorBody {
  code: string;
  message: string;
  locus: string | null;
}

export interface FactorPayload {
  id: string;
  display_name: string;
  category: string;
  weight: number | string;
  anchors: [number, string][];
}

export interface SchemePayload {
  id: string;
  impact_mode: string;
  likelihood_thresholds: string[];
  impact_thresholds: string[];
  severity_chart: Record<string, Record<string, string>>;
  factors: FactorPayload[];
}

export interface AssignmentPayload {
  factor_id: string;
  score: number;
  anchor_label?: string | null;
  rationale?: string;
}

export interface ComponentPayload {
  name: string;
  weakness_note: string;
}

export interface AssessmentPayload {
  id: string;
  threat: string;
  system_context?: string;
  stakeholder?: string | null;
  status: string;
  revision: number;
  scenario?: {
    threat_agent_description?: string;
    method?: string;
    assignments: AssignmentPayload[];
  } | null;
  dependencies?: {
    components?: ComponentPayload[];
    assignments: AssignmentPayload[];
  } | null;
  impact?: {
    technical_assignments: AssignmentPayload[];
    business_assignments: AssignmentPayload[];
  } | null;
  [extra: string]: unknown;
}

export interface AssessmentSummary {
  id: string;
  threat: string;
  status: string;
  revision: number;
}

export interface CatalogEntryPayload {
  id: string;
  name: string;
  causes: string[];
  consequences: string[];
  static_controls: string[];
  dynamic_controls: string[];
  traditional_cybersec: boolean;
  stakeholders: string[];
}

export interface CatalogPayload {
  entries: CatalogEntryPayload[];
}

export interface AdjustmentPayload {
  label: string;
  overrides: Record<string, number>;
  note?: string;
}

export interface WhatIfResponse {
  adjustment: string;
  before: RatingPayload;
  after: RatingPayload;
}

export interface MatrixRowPayload {
  id: string;
  name: string;
  causes: string[];
  consequences: string[];
  static_controls: string[];
  dynamic_controls: string[];
  traditional_cybersec: boolean;
  stakeholders: string[];
  rating: RatingPayload | null;
  assessment: string | null;
}

export interface MatrixPayload {
  format_version: number;
  generated_at: string | null;
  scheme: string;
  catalog_version: number;
  stakeholder_filter: string | null;
  rows: MatrixRowPayload[];
}

export const STAKEHOLDER_LABELS: Record<string, string> = {
  fine_tuning_developer: "LLM Fine-tuning Developers",
  api_integration_developer: "LLM API Integration Developers",
  end_user: "End Users",
};
