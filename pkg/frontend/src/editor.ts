// Three-panel assessment editor: scenario / dependencies / impact, one
// 0-9 slider per factor with its anchor labels. Every change issues a
// stateless evaluate request; every displayed score, level, and severity
// is copied verbatim from the response.

import { ApiClient, ApiError } from "./api.js";
import { severityColor } from "./colors.js";
import {
  LatestWins,
  SessionState,
  clearScore,
  draftAssignments,
  emptySession,
  isDirty,
  loadAssessment,
  setScore,
} from "./state.js";
import type {
  AssessmentPayload,
  FactorPayload,
  RatingPayload,
  SchemePayload,
} from "./types.js";

const PANELS: { key: string; title: string; categories: string[] }[] = [
  { key: "scenario", title: "1. Scenario analysis", categories: ["threat_agent"] },
  { key: "dependencies", title: "2. Dependency mapping", categories: ["vulnerability"] },
  {
    key: "impact",
    title: "3. Impact analysis",
    categories: ["technical_impact", "business_impact"],
  },
];

const RATING_FIELDS: [keyof RatingPayload, string][] = [
  ["likelihood_score", "likelihood-score"],
  ["likelihood_level", "likelihood-level"],
  ["technical_impact_score", "technical-score"],
  ["business_impact_score", "business-score"],
  ["final_impact_score", "final-score"],
  ["impact_level", "impact-level"],
];

export class AssessmentEditor {
  session: SessionState = emptySession();

  private readonly coalescer = new LatestWins<RatingPayload>();
  private pending: Promise<void> = Promise.resolve();
  private onChange: (() => void) | null = null;

  constructor(
    private readonly root: HTMLElement,
    private readonly api: ApiClient,
    private readonly scheme: SchemePayload,
  ) {
    this.renderSkeleton();
  }

  /** Called after every session change (for dirty indicators etc.). */
  setChangeListener(listener: () => void): void {
    this.onChange = listener;
  }

  loadDocument(doc: AssessmentPayload): void {
    this.session = loadAssessment(this.session, doc);
    this.renderFactors();
    this.renderNarrative();
    this.requestEvaluation();
    this.onChange?.();
  }

  dirty(): boolean {
    return isDirty(this.session);
  }

  /** Resolves once the most recent evaluate round-trip has been applied. */
  settle(): Promise<void> {
    return this.pending;
  }

  setFactorScore(factorId: string, score: number): void {
    this.session = setScore(this.session, factorId, score);
    this.syncRow(factorId);
    this.requestEvaluation();
    this.onChange?.();
  }

  clearFactorScore(factorId: string): void {
    this.session = clearScore(this.session, factorId);
    this.syncRow(factorId);
    this.requestEvaluation();
    this.onChange?.();
  }

  // -- rendering ----------------------------------------------------------

  private renderSkeleton(): void {
    this.root.innerHTML = "";
    const header = document.createElement("div");
    header.className = "editor-header";
    header.innerHTML =
      `<div class="badge" data-role="severity-badge">&mdash;</div>` +
      `<dl class="rating-summary">` +
      RATING_FIELDS.map(
        ([, role]) =>
          `<div><dt>${role.replace(/-/g, " ")}</dt>` +
          `<dd data-role="${role}">&mdash;</dd></div>`,
      ).join("") +
      `</dl>` +
      `<div class="inline-error" data-role="editor-error" hidden></div>`;
    this.root.appendChild(header);

    const panels = document.createElement("div");
    panels.className = "panels";
    for (const panel of PANELS) {
      const section = document.createElement("section");
      section.className = "panel";
      section.dataset.panel = panel.key;
      section.innerHTML =
        `<h2>${panel.title}</h2>` +
        `<div class="narrative" data-role="narrative-${panel.key}"></div>`;
      for (const category of panel.categories) {
        const group = document.createElement("div");
        group.className = "factor-group";
        group.dataset.category = category;
        section.appendChild(group);
      }
      panels.appendChild(section);
    }
    this.root.appendChild(panels);
  }

  private factorsIn(category: string): FactorPayload[] {
    return this.scheme.factors.filter((f) => f.category === category);
  }

  private renderFactors(): void {
    for (const panel of PANELS) {
      for (const category of panel.categories) {
        const group = this.root.querySelector<HTMLElement>(
          `[data-category="${category}"]`,
        )!;
        group.innerHTML = "";
        for (const factor of this.factorsIn(category)) {
          group.appendChild(this.factorRow(factor));
        }
      }
    }
  }

  private factorRow(factor: FactorPayload): HTMLElement {
    const row = document.createElement("div");
    row.className = "factor-row";
    row.dataset.factor = factor.id;

    const ticks = factor.anchors
      .map(([value, label]) => `${value} = ${label}`)
      .join("\n");
    const score = this.session.draft.get(factor.id);

    row.innerHTML =
      `<label title="${escapeHtml(ticks)}">${escapeHtml(factor.display_name)}</label>` +
      `<input type="range" min="0" max="9" step="1" ` +
      `value="${score ?? 0}" ${score === undefined ? 'data-cleared="true"' : ""} ` +
      `aria-label="${escapeHtml(factor.display_name)}">` +
      `<span class="score" data-role="score">${score ?? "—"}</span>` +
      `<span class="anchor" data-role="anchor"></span>` +
      `<button type="button" class="clear" title="clear score">×</button>`;

    const slider = row.querySelector("input")!;
    slider.addEventListener("input", () => {
      this.setFactorScore(factor.id, Number(slider.value));
    });
    row.querySelector("button.clear")!.addEventListener("click", () => {
      this.clearFactorScore(factor.id);
    });
    this.syncRowElement(row, factor);
    return row;
  }

  private syncRow(factorId: string): void {
    const row = this.root.querySelector<HTMLElement>(`[data-factor="${factorId}"]`);
    const factor = this.scheme.factors.find((f) => f.id === factorId);
    if (row && factor) this.syncRowElement(row, factor);
  }

  private syncRowElement(row: HTMLElement, factor: FactorPayload): void {
    const score = this.session.draft.get(factor.id);
    const slider = row.querySelector<HTMLInputElement>("input")!;
    const scoreCell = row.querySelector<HTMLElement>('[data-role="score"]')!;
    const anchorCell = row.querySelector<HTMLElement>('[data-role="anchor"]')!;
    if (score === undefined) {
      row.classList.add("cleared");
      scoreCell.textContent = "—";
      anchorCell.textContent = "";
    } else {
      row.classList.remove("cleared");
      slider.value = String(score);
      scoreCell.textContent = String(score);
      const anchor = factor.anchors.find(([value]) => value === score);
      anchorCell.textContent = anchor ? anchor[1] : "";
    }
  }

  private renderNarrative(): void {
    const doc = this.session.document;
    if (!doc) return;
    const scenario = this.root.querySelector<HTMLElement>(
      '[data-role="narrative-scenario"]',
    )!;
    scenario.textContent = [
      doc.scenario?.threat_agent_description ?? "",
      doc.scenario?.method ?? "",
    ]
      .filter(Boolean)
      .join(" ");
    const dependencies = this.root.querySelector<HTMLElement>(
      '[data-role="narrative-dependencies"]',
    )!;
    dependencies.textContent = (doc.dependencies?.components ?? [])
      .map((c) => `${c.name}: ${c.weakness_note}`)
      .join("; ");
    const impact = this.root.querySelector<HTMLElement>(
      '[data-role="narrative-impact"]',
    )!;
    impact.textContent = doc.system_context ?? "";
  }

  // -- evaluation ---------------------------------------------------------

  private requestEvaluation(): void {
    const assignments = draftAssignments(this.session);
    this.pending = this.coalescer.run(
      () => this.api.evaluate(assignments),
      (rating) => this.showRating(rating),
      (error) => this.showError(error),
    );
  }

  private showRating(rating: RatingPayload): void {
    this.clearHighlights();
    const badge = this.root.querySelector<HTMLElement>('[data-role="severity-badge"]')!;
    badge.textContent = rating.severity;
    badge.classList.remove("disabled");
    badge.style.backgroundColor = severityColor(rating.severity);
    for (const [field, role] of RATING_FIELDS) {
      this.root.querySelector<HTMLElement>(`[data-role="${role}"]`)!.textContent =
        rating[field];
    }
    const banner = this.root.querySelector<HTMLElement>('[data-role="editor-error"]')!;
    banner.hidden = true;
    banner.textContent = "";
  }

  private showError(error: unknown): void {
    this.clearHighlights();
    const badge = this.root.querySelector<HTMLElement>('[data-role="severity-badge"]')!;
    badge.textContent = "—";
    badge.classList.add("disabled");
    badge.style.backgroundColor = "";
    for (const [, role] of RATING_FIELDS) {
      this.root.querySelector<HTMLElement>(`[data-role="${role}"]`)!.textContent =
        "—";
    }
    const banner = this.root.querySelector<HTMLElement>('[data-role="editor-error"]')!;
    banner.hidden = false;
    banner.textContent = error instanceof Error ? error.message : String(error);
    if (error instanceof ApiError) {
      for (const factorId of error.lociList()) {
        this.root
          .querySelector<HTMLElement>(`[data-factor="${factorId}"]`)
          ?.classList.add("error");
      }
    }
  }

  private clearHighlights(): void {
    for (const row of this.root.querySelectorAll(".factor-row.error")) {
      row.classList.remove("error");
    }
  }
}

function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}
