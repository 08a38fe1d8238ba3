// Canned API payloads used across the UI tests.

import type {
  AssessmentPayload,
  CatalogEntryPayload,
  FactorPayload,
  MatrixPayload,
  MatrixRowPayload,
  RatingPayload,
  SchemePayload,
} from "../src/types.js";

function factor(
  id: string,
  display: string,
  category: string,
  anchors: [number, string][],
): FactorPayload {
  return { id, display_name: display, category, weight: 1, anchors };
}

export const SCHEME: SchemePayload = {
  id: "owasp-default",
  impact_mode: "mean_of_category_means",
  likelihood_thresholds: ["3", "6"],
  impact_thresholds: ["3", "6"],
  severity_chart: {
    low: { low: "note", medium: "low", high: "medium" },
    medium: { low: "low", medium: "medium", high: "high" },
    high: { low: "medium", medium: "high", high: "critical" },
  },
  factors: [
    factor("skill_level", "Skill level", "threat_agent", [
      [6, "Network and programming skills"],
      [9, "Security penetration skills"],
    ]),
    factor("motive", "Motive", "threat_agent", [[4, "Possible reward"]]),
    factor("opportunity", "Opportunity", "threat_agent", [
      [0, "Full access or expensive resources required"],
      [7, "Some access or resources required"],
    ]),
    factor("size", "Size", "threat_agent", [
      [6, "Authenticated users"],
      [9, "Anonymous Internet users"],
    ]),
    factor("ease_of_discovery", "Ease of discovery", "vulnerability", [
      [3, "Difficult"],
      [9, "Automated tools available"],
    ]),
    factor("ease_of_exploit", "Ease of exploit", "vulnerability", [
      [3, "Difficult"],
      [5, "Easy"],
    ]),
    factor("awareness", "Awareness", "vulnerability", [
      [1, "Unknown"],
      [9, "Public knowledge"],
    ]),
    factor("intrusion_detection", "Intrusion detection", "vulnerability", [
      [8, "Logged without review"],
    ]),
    factor("loss_of_confidentiality", "Loss of confidentiality", "technical_impact", [
      [5, "Extensive critical data disclosed"],
    ]),
    factor("loss_of_integrity", "Loss of integrity", "technical_impact", [
      [7, "Extensive seriously corrupt data"],
    ]),
    factor("loss_of_availability", "Loss of availability", "technical_impact", []),
    factor("loss_of_accountability", "Loss of accountability", "technical_impact", [
      [7, "Possibly traceable"],
      [9, "Completely anonymous"],
    ]),
    factor("financial_damage", "Financial damage", "business_impact", [
      [7, "Significant effect on annual profit"],
    ]),
    factor("reputation_damage", "Reputation damage", "business_impact", [
      [5, "Loss of goodwill"],
      [9, "Brand damage"],
    ]),
    factor("non_compliance", "Non-compliance", "business_impact", [
      [5, "Clear violation"],
    ]),
    factor("privacy_violation", "Privacy violation", "business_impact", [
      [7, "Thousands of people"],
    ]),
  ],
};

export const PI_SCORES: Record<string, number> = {
  skill_level: 6,
  motive: 4,
  opportunity: 7,
  size: 6,
  ease_of_discovery: 9,
  ease_of_exploit: 5,
  awareness: 9,
  intrusion_detection: 8,
  loss_of_confidentiality: 5,
  loss_of_integrity: 0,
  loss_of_availability: 0,
  loss_of_accountability: 7,
  financial_damage: 7,
  reputation_damage: 5,
  non_compliance: 5,
  privacy_violation: 7,
};

function assignmentsFor(ids: string[]): { factor_id: string; score: number }[] {
  return ids.map((id) => ({ factor_id: id, score: PI_SCORES[id] }));
}

export const PI_DOC: AssessmentPayload = {
  id: "uva-prompt-injection",
  threat: "LLM01",
  system_context: "University virtual assistant.",
  stakeholder: "fine_tuning_developer",
  status: "evaluated",
  revision: 1,
  scenario: {
    threat_agent_description: "An authenticated student.",
    method: "Crafts malicious prompts.",
    assignments: assignmentsFor(["skill_level", "motive", "opportunity", "size"]),
  },
  dependencies: {
    components: [{ name: "Prompt filter", weakness_note: "vulnerable to role prompting" }],
    assignments: assignmentsFor([
      "ease_of_discovery",
      "ease_of_exploit",
      "awareness",
      "intrusion_detection",
    ]),
  },
  impact: {
    technical_assignments: assignmentsFor([
      "loss_of_confidentiality",
      "loss_of_integrity",
      "loss_of_availability",
      "loss_of_accountability",
    ]),
    business_assignments: assignmentsFor([
      "financial_damage",
      "reputation_damage",
      "non_compliance",
      "privacy_violation",
    ]),
  },
};

export const TABLE3_RATING: RatingPayload = {
  likelihood_score: "6.75",
  likelihood_level: "High",
  technical_impact_score: "3",
  business_impact_score: "6",
  final_impact_score: "4.5",
  impact_level: "Medium",
  severity: "HIGH",
};

export const MITIGATED_RATING: RatingPayload = {
  likelihood_score: "5.75",
  likelihood_level: "Medium",
  technical_impact_score: "3",
  business_impact_score: "6",
  final_impact_score: "4.5",
  impact_level: "Medium",
  severity: "MEDIUM",
};

export const LLM01_ENTRY: CatalogEntryPayload = {
  id: "LLM01",
  name: "Prompt Injection",
  causes: ["Lack of control/validation on the LLM's input"],
  consequences: ["Reputation loss"],
  static_controls: [
    "Use a trusted/reputed LLM service provider",
    "Input validation and filtering",
  ],
  dynamic_controls: [
    "Adaptive trust boundaries for the input source",
    "Monitoring of LLM outputs",
    "Red teaming",
    "LLM response monitoring/filtering",
  ],
  traditional_cybersec: false,
  stakeholders: ["fine_tuning_developer", "api_integration_developer", "end_user"],
};

export function matrixRow(
  id: string,
  name: string,
  rating: RatingPayload | null,
  assessment: string | null = null,
): MatrixRowPayload {
  return {
    id,
    name,
    causes: [],
    consequences: [],
    static_controls: [],
    dynamic_controls: [],
    traditional_cybersec: false,
    stakeholders: ["end_user"],
    rating,
    assessment,
  };
}

export function matrixPayload(
  rows: MatrixRowPayload[],
  stakeholder: string | null = null,
): MatrixPayload {
  return {
    format_version: 1,
    generated_at: null,
    scheme: "owasp-default",
    catalog_version: 1,
    stakeholder_filter: stakeholder,
    rows,
  };
}

export const END_USER_MATRIX: MatrixPayload = matrixPayload(
  [
    matrixRow("LLM01", "Prompt Injection", TABLE3_RATING, "uva-prompt-injection"),
    matrixRow("LLM02", "Insecure Output Handling", null),
    matrixRow("LLM03", "Training Data Poisoning", {
      likelihood_score: "4.25",
      likelihood_level: "Medium",
      technical_impact_score: "4",
      business_impact_score: "7",
      final_impact_score: "5.5",
      impact_level: "Medium",
      severity: "MEDIUM",
    }, "uva-training-data-poisoning"),
    matrixRow("LLM04", "Model Denial of Service", null),
    matrixRow("LLM06", "Sensitive Information Disclosure", null),
    matrixRow("LLM08", "Excessive Agency", null),
    matrixRow("LLM09", "Overreliance", null),
  ],
  "end_user",
);
