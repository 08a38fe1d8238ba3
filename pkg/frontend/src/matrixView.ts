// Matrix view: the server-built threat matrix as a colour-coded grid
// with a stakeholder filter. Unassessed rows keep their rating cells
// blank, so the view doubles as the worksheet template.

import { ApiClient } from "./api.js";
import { severityColor } from "./colors.js";
import { STAKEHOLDER_LABELS, type MatrixPayload } from "./types.js";

export class MatrixView {
  stakeholder: string | null = null;
  private pending: Promise<void> = Promise.resolve();

  constructor(
    private readonly root: HTMLElement,
    private readonly api: ApiClient,
  ) {
    this.renderSkeleton();
  }

  settle(): Promise<void> {
    return this.pending;
  }

  setStakeholder(value: string | null): Promise<void> {
    this.stakeholder = value || null;
    const picker = this.root.querySelector<HTMLSelectElement>(
      '[data-role="stakeholder-picker"]',
    )!;
    picker.value = this.stakeholder ?? "";
    return this.refresh();
  }

  refresh(): Promise<void> {
    this.pending = this.api
      .getMatrix(this.stakeholder)
      .then((matrix) => this.renderMatrix(matrix))
      .catch((error) => this.showError(error));
    return this.pending;
  }

  private renderSkeleton(): void {
    this.root.innerHTML =
      `<div class="matrix-toolbar">` +
      `<label>Stakeholder ` +
      `<select data-role="stakeholder-picker">` +
      `<option value="">All stakeholders</option>` +
      Object.entries(STAKEHOLDER_LABELS)
        .map(([value, label]) => `<option value="${value}">${label}</option>`)
        .join("") +
      `</select></label></div>` +
      `<div class="banner" data-role="matrix-error" hidden></div>` +
      `<table class="matrix"><thead><tr>` +
      `<th>id</th><th>threat</th><th>likelihood</th><th>impact</th>` +
      `<th>risk rating</th><th>assessment</th>` +
      `</tr></thead><tbody data-role="matrix-body"></tbody></table>`;

    this.root
      .querySelector<HTMLSelectElement>('[data-role="stakeholder-picker"]')!
      .addEventListener("change", (event) => {
        const value = (event.target as HTMLSelectElement).value;
        void this.setStakeholder(value || null);
      });
  }

  private renderMatrix(matrix: MatrixPayload): void {
    const banner = this.root.querySelector<HTMLElement>('[data-role="matrix-error"]')!;
    banner.hidden = true;
    const body = this.root.querySelector<HTMLElement>('[data-role="matrix-body"]')!;
    body.innerHTML = "";
    for (const row of matrix.rows) {
      const tr = document.createElement("tr");
      tr.dataset.threat = row.id;
      const likelihood = row.rating?.likelihood_level ?? "";
      const impact = row.rating?.impact_level ?? "";
      const sev = row.rating?.severity ?? "";
      tr.innerHTML =
        `<td>${row.id}</td>` +
        `<td class="name">${row.name}</td>` +
        `<td data-role="likelihood">${likelihood}</td>` +
        `<td data-role="impact">${impact}</td>` +
        `<td data-role="severity">${sev}</td>` +
        `<td class="ref">${row.assessment ?? ""}</td>`;
      const sevCell = tr.querySelector<HTMLElement>('[data-role="severity"]')!;
      sevCell.style.backgroundColor = severityColor(sev || null);
      body.appendChild(tr);
    }
  }

  private showError(error: unknown): void {
    const banner = this.root.querySelector<HTMLElement>('[data-role="matrix-error"]')!;
    banner.hidden = false;
    banner.textContent = error instanceof Error ? error.message : String(error);
  }
}
