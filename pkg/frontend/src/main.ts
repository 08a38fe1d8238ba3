// Workbench bootstrap: tabs, assessment picker, save with optimistic
// concurrency, and the dirty-state unload prompt.

import { ApiClient, ApiError } from "./api.js";
import { AssessmentEditor } from "./editor.js";
import { MatrixView } from "./matrixView.js";
import { isDirty, markSaved, mergedDocument } from "./state.js";
import type { CatalogPayload } from "./types.js";
import { WhatIfPanel } from "./whatif.js";

export interface Workbench {
  editor: AssessmentEditor;
  whatif: WhatIfPanel;
  matrix: MatrixView;
  openAssessment(id: string): Promise<void>;
  save(): Promise<void>;
}

export async function boot(root: HTMLElement, api: ApiClient): Promise<Workbench> {
  const scheme = await api.getScheme();
  const catalog: CatalogPayload = await api.getCatalog();
  const { assessments } = await api.listAssessments();

  root.innerHTML =
    `<header class="topbar">` +
    `<h1>llmrisk workbench</h1>` +
    `<select data-role="assessment-picker">` +
    `<option value="">choose an assessment…</option>` +
    assessments
      .map((a) => `<option value="${a.id}">${a.id} (${a.threat}, ${a.status})</option>`)
      .join("") +
    `</select>` +
    `<button type="button" data-role="save" disabled>Save</button>` +
    `<span class="dirty-flag" data-role="dirty" hidden>unsaved changes</span>` +
    `<nav>` +
    `<button type="button" data-tab="editor" class="active">Editor</button>` +
    `<button type="button" data-tab="whatif">What-if</button>` +
    `<button type="button" data-tab="matrix">Matrix</button>` +
    `</nav>` +
    `</header>` +
    `<div class="banner" data-role="banner" hidden></div>` +
    `<main>` +
    `<div class="tab" data-tab-panel="editor"></div>` +
    `<div class="tab" data-tab-panel="whatif" hidden></div>` +
    `<div class="tab" data-tab-panel="matrix" hidden></div>` +
    `</main>`;

  const editor = new AssessmentEditor(
    root.querySelector<HTMLElement>('[data-tab-panel="editor"]')!,
    api,
    scheme,
  );
  const whatif = new WhatIfPanel(
    root.querySelector<HTMLElement>('[data-tab-panel="whatif"]')!,
    api,
    scheme,
  );
  const matrix = new MatrixView(
    root.querySelector<HTMLElement>('[data-tab-panel="matrix"]')!,
    api,
  );
  void matrix.refresh();

  const banner = root.querySelector<HTMLElement>('[data-role="banner"]')!;
  const saveButton = root.querySelector<HTMLButtonElement>('[data-role="save"]')!;
  const dirtyFlag = root.querySelector<HTMLElement>('[data-role="dirty"]')!;

  editor.setChangeListener(() => {
    const dirty = editor.dirty();
    dirtyFlag.hidden = !dirty;
    saveButton.disabled = editor.session.assessmentId === null;
  });

  for (const button of root.querySelectorAll<HTMLButtonElement>("[data-tab]")) {
    button.addEventListener("click", () => {
      for (const other of root.querySelectorAll<HTMLButtonElement>("[data-tab]")) {
        other.classList.toggle("active", other === button);
      }
      for (const panel of root.querySelectorAll<HTMLElement>("[data-tab-panel]")) {
        panel.hidden = panel.dataset.tabPanel !== button.dataset.tab;
      }
      if (button.dataset.tab === "matrix") void matrix.refresh();
    });
  }

  async function openAssessment(id: string): Promise<void> {
    const doc = await api.getAssessment(id);
    editor.loadDocument(doc);
    const entry = catalog.entries.find(
      (e) => e.id === doc.threat || e.name === doc.threat,
    );
    whatif.setContext(doc.id, entry ?? null);
    banner.hidden = true;
  }

  async function save(): Promise<void> {
    const session = editor.session;
    if (!session.assessmentId) return;
    try {
      const result = await api.putAssessment(
        mergedDocument(session),
        session.revision ?? undefined,
      );
      editor.session = markSaved(session, result.revision);
      dirtyFlag.hidden = !isDirty(editor.session);
      banner.hidden = true;
    } catch (error) {
      banner.hidden = false;
      if (error instanceof ApiError && error.code === "version_conflict") {
        banner.textContent =
          `Save rejected: ${error.message}. Reload the assessment to pick up ` +
          `the newer revision before saving again.`;
      } else {
        banner.textContent = error instanceof Error ? error.message : String(error);
      }
    }
  }

  root
    .querySelector<HTMLSelectElement>('[data-role="assessment-picker"]')!
    .addEventListener("change", (event) => {
      const id = (event.target as HTMLSelectElement).value;
      if (id) void openAssessment(id);
    });
  saveButton.addEventListener("click", () => void save());

  window.addEventListener("beforeunload", (event) => {
    if (editor.dirty()) {
      event.preventDefault();
      event.returnValue = "";
    }
  });

  return { editor, whatif, matrix, openAssessment, save };
}

declare global {
  interface Window {
    llmriskWorkbench?: Workbench;
  }
}

if (typeof document !== "undefined" && document.getElementById("app")) {
  const api = new ApiClient("");
  void boot(document.getElementById("app")!, api).then((workbench) => {
    window.llmriskWorkbench = workbench;
  });
}
