// What-if panel: toggleable mitigation candidates seeded from the
// catalog's static and dynamic controls, score overrides restricted to
// the scheme's factors, and a before/after comparison fetched from the
// service. Impact rows that the adjustment leaves untouched are marked,
// making "likelihood drops, impact stays" directly visible.

import { ApiClient } from "./api.js";
import { severityColor } from "./colors.js";
import type {
  AdjustmentPayload,
  CatalogEntryPayload,
  RatingPayload,
  SchemePayload,
  WhatIfResponse,
} from "./types.js";

const COMPARISON_ROWS: [keyof RatingPayload, string, boolean][] = [
  // [payload field, label, is an impact cell]
  ["likelihood_score", "Likelihood score", false],
  ["likelihood_level", "Likelihood", false],
  ["technical_impact_score", "Technical impact score", true],
  ["business_impact_score", "Business impact score", true],
  ["final_impact_score", "Final impact score", true],
  ["impact_level", "Impact", true],
  ["severity", "Risk severity", false],
];

export class WhatIfPanel {
  private assessmentId: string | null = null;
  private entry: CatalogEntryPayload | null = null;
  private overrides = new Map<string, number>();
  private label = "";
  private pending: Promise<void> = Promise.resolve();

  constructor(
    private readonly root: HTMLElement,
    private readonly api: ApiClient,
    private readonly scheme: SchemePayload,
  ) {
    this.renderSkeleton();
  }

  setContext(assessmentId: string, entry: CatalogEntryPayload | null): void {
    this.assessmentId = assessmentId;
    this.entry = entry;
    this.overrides.clear();
    this.label = "";
    this.renderControls();
    this.renderOverrides();
    this.clearComparison();
  }

  adjustment(): AdjustmentPayload {
    return {
      label: this.label || "Custom adjustment",
      overrides: Object.fromEntries(this.overrides),
      note: "",
    };
  }

  settle(): Promise<void> {
    return this.pending;
  }

  setOverride(factorId: string, score: number): void {
    if (!this.scheme.factors.some((f) => f.id === factorId)) {
      throw new RangeError(`unknown factor: ${factorId}`);
    }
    if (!Number.isInteger(score) || score < 0 || score > 9) {
      throw new RangeError(`override for ${factorId} must be an integer 0..9`);
    }
    this.overrides.set(factorId, score);
    this.renderOverrides();
  }

  removeOverride(factorId: string): void {
    this.overrides.delete(factorId);
    this.renderOverrides();
  }

  apply(): Promise<void> {
    if (!this.assessmentId) return Promise.resolve();
    this.pending = this.api
      .whatIf(this.assessmentId, this.adjustment())
      .then((response) => this.renderComparison(response))
      .catch((error) => this.showError(error));
    return this.pending;
  }

  // -- rendering ----------------------------------------------------------

  private renderSkeleton(): void {
    this.root.innerHTML =
      `<div class="whatif-columns">` +
      `<div><h3>Candidate controls</h3><ul class="controls" data-role="controls"></ul></div>` +
      `<div><h3>Score overrides</h3>` +
      `<div class="override-editor">` +
      `<select data-role="factor-picker"></select>` +
      `<input type="number" min="0" max="9" step="1" value="3" data-role="override-score">` +
      `<button type="button" data-role="add-override">add</button>` +
      `</div>` +
      `<ul class="overrides" data-role="overrides"></ul>` +
      `<button type="button" class="apply" data-role="apply">Apply what-if</button>` +
      `</div>` +
      `</div>` +
      `<div class="inline-error" data-role="whatif-error" hidden></div>` +
      `<table class="comparison" data-role="comparison"><thead>` +
      `<tr><th></th><th>before</th><th>after</th></tr></thead>` +
      `<tbody></tbody></table>`;

    const picker = this.root.querySelector<HTMLSelectElement>(
      '[data-role="factor-picker"]',
    )!;
    // only scheme factors are offered; an unknown factor cannot be built here
    picker.innerHTML = this.scheme.factors
      .map((f) => `<option value="${f.id}">${f.display_name}</option>`)
      .join("");

    this.root
      .querySelector<HTMLButtonElement>('[data-role="add-override"]')!
      .addEventListener("click", () => {
        const score = Number(
          this.root.querySelector<HTMLInputElement>('[data-role="override-score"]')!
            .value,
        );
        this.setOverride(picker.value, score);
      });
    this.root
      .querySelector<HTMLButtonElement>('[data-role="apply"]')!
      .addEventListener("click", () => {
        void this.apply();
      });
  }

  private renderControls(): void {
    const list = this.root.querySelector<HTMLElement>('[data-role="controls"]')!;
    list.innerHTML = "";
    if (!this.entry) return;
    const candidates = [
      ...this.entry.static_controls.map((text) => ({ kind: "static", text })),
      ...this.entry.dynamic_controls.map((text) => ({ kind: "dynamic", text })),
    ];
    for (const { kind, text } of candidates) {
      const item = document.createElement("li");
      const button = document.createElement("button");
      button.type = "button";
      button.className = "control-toggle";
      button.textContent = `[${kind}] ${text}`;
      button.addEventListener("click", () => {
        const active = button.classList.toggle("active");
        for (const other of list.querySelectorAll("button.control-toggle")) {
          if (other !== button) other.classList.remove("active");
        }
        this.label = active ? text : "";
      });
      item.appendChild(button);
      list.appendChild(item);
    }
  }

  private renderOverrides(): void {
    const list = this.root.querySelector<HTMLElement>('[data-role="overrides"]')!;
    list.innerHTML = "";
    for (const [factorId, score] of this.overrides) {
      const item = document.createElement("li");
      item.dataset.override = factorId;
      item.textContent = `${factorId} → ${score} `;
      const remove = document.createElement("button");
      remove.type = "button";
      remove.textContent = "remove";
      remove.addEventListener("click", () => this.removeOverride(factorId));
      item.appendChild(remove);
      list.appendChild(item);
    }
  }

  private clearComparison(): void {
    this.root.querySelector("tbody")!.innerHTML = "";
    const banner = this.root.querySelector<HTMLElement>('[data-role="whatif-error"]')!;
    banner.hidden = true;
  }

  private renderComparison(response: WhatIfResponse): void {
    this.clearComparison();
    const tbody = this.root.querySelector("tbody")!;
    for (const [field, label, isImpact] of COMPARISON_ROWS) {
      const before = response.before[field];
      const after = response.after[field];
      const row = document.createElement("tr");
      row.dataset.row = field;
      if (isImpact && before === after) {
        row.classList.add("unchanged");
      }
      row.innerHTML =
        `<th>${label}</th>` +
        `<td data-role="before">${before}</td>` +
        `<td data-role="after">${after}</td>`;
      if (field === "severity") {
        row.querySelector<HTMLElement>('[data-role="before"]')!.style.backgroundColor =
          severityColor(before);
        row.querySelector<HTMLElement>('[data-role="after"]')!.style.backgroundColor =
          severityColor(after);
      }
      tbody.appendChild(row);
    }
  }

  private showError(error: unknown): void {
    const banner = this.root.querySelector<HTMLElement>('[data-role="whatif-error"]')!;
    banner.hidden = false;
    banner.textContent = error instanceof Error ? error.message : String(error);
  }
}
