// Related-cases editor: add cases to a policy by searching the repository by
// keyword, or by authoring a new case (label + own vote + reasons), with an
// optional brainstorming panel.

import { el, clear } from '../dom.js';
import type { CaseLabel, CaseView, PolicyView, Stance } from '../types.js';

export interface CaseEditorApi {
  listCases(query?: string): Promise<CaseView[]>;
  createCase(body: {
    title: string;
    description: string;
    stance: string;
    reasons: { side: string; text: string }[];
  }): Promise<CaseView>;
  linkCase(policyId: string, caseId: string, label: string): Promise<unknown>;
}

export interface CaseEditorHandlers {
  onLinked?: () => void;
  assistantPanel?: HTMLElement;
}

const LABELS: CaseLabel[] = ['allowed', 'disallowed', 'ambiguous'];

export function caseEditor(policy: PolicyView, api: CaseEditorApi, handlers: CaseEditorHandlers = {}): HTMLElement {
  const alreadyLinked = new Set(policy.links.map((l) => l.case_id));
  const statusLine = el('p.case-editor-status', {});

  // -- search side ----------------------------------------------------------
  const searchInput = el('input.case-search', { placeholder: 'Search cases by keyword…' }) as HTMLInputElement;
  const results = el('div.search-results', {});
  const runSearch = async () => {
    const cases = await api.listCases(searchInput.value.trim() || undefined);
    clear(results);
    for (const candidate of cases) {
      if (alreadyLinked.has(candidate.id)) continue;
      const labelPick = el(
        'select.search-label',
        {},
        ...LABELS.map((label) => el('option', { value: label }, label)),
      ) as HTMLSelectElement;
      results.append(
        el(
          'div.search-result',
          { dataset: { caseId: candidate.id } },
          el('strong', {}, candidate.title),
          el('p', {}, candidate.description),
          labelPick,
          el(
            'button.add-existing',
            {
              onclick: async () => {
                await api.linkCase(policy.id, candidate.id, labelPick.value);
                alreadyLinked.add(candidate.id);
                statusLine.textContent = `Added "${candidate.title}" (${labelPick.value}).`;
                handlers.onLinked?.();
              },
            },
            'Add to policy',
          ),
        ),
      );
    }
    if (!results.children.length) {
      results.append(el('p.empty', {}, 'No matching cases. Author a new one below.'));
    }
  };

  // -- authoring side ---------------------------------------------------------
  const titleInput = el('input.new-case-title', { placeholder: 'Case title' }) as HTMLInputElement;
  const descriptionInput = el('textarea.new-case-description', {
    placeholder: 'Describe the concrete scenario…',
  }) as HTMLTextAreaElement;
  const labelPick = el(
    'select.new-case-label',
    {},
    ...LABELS.map((label) => el('option', { value: label }, `The current policy would treat this as ${label}`)),
  ) as HTMLSelectElement;
  const allowReason = el('textarea.reason-allow', { placeholder: 'Reason to allow (pro)…' }) as HTMLTextAreaElement;
  const disallowReason = el('textarea.reason-disallow', {
    placeholder: 'Reason to disallow (con)…',
  }) as HTMLTextAreaElement;

  const stanceInputs = (['allow', 'disallow', 'unsure'] as Stance[]).map((stance) => {
    const input = el('input', { type: 'radio', name: 'new-case-stance', value: stance }) as HTMLInputElement;
    input.addEventListener('change', () => {
      // Decided voters file a reason on their own side; unsure may give both.
      allowReason.style.display = stance === 'disallow' ? 'none' : '';
      disallowReason.style.display = stance === 'allow' ? 'none' : '';
    });
    return { input, row: el('label.stance-option', {}, input, ` should ideally be ${stance === 'unsure' ? 'unsure' : `${stance}ed`}`) };
  });

  const createButton = el(
    'button.create-case',
    {
      onclick: async () => {
        const stance = stanceInputs.find((s) => s.input.checked)?.input.value;
        if (!stance) {
          statusLine.textContent = 'Cast your own vote on the new case first.';
          return;
        }
        const reasons: { side: string; text: string }[] = [];
        if (allowReason.value.trim() && stance !== 'disallow') reasons.push({ side: 'allow', text: allowReason.value.trim() });
        if (disallowReason.value.trim() && stance !== 'allow') reasons.push({ side: 'disallow', text: disallowReason.value.trim() });
        try {
          const created = await api.createCase({
            title: titleInput.value.trim(),
            description: descriptionInput.value.trim(),
            stance,
            reasons,
          });
          await api.linkCase(policy.id, created.id, labelPick.value);
          alreadyLinked.add(created.id);
          statusLine.textContent = `Created and linked "${created.title}".`;
          handlers.onLinked?.();
        } catch (error) {
          statusLine.textContent = `Rejected: ${error instanceof Error ? error.message : error}`;
        }
      },
    },
    'Create case and add to policy',
  );

  return el(
    'section.case-editor',
    { dataset: { policyId: policy.id } },
    el('h3', {}, `Edit cases for: ${policy.title}`),
    el(
      'section.case-search-block',
      {},
      el('h4', {}, 'Add an existing case'),
      el('div.search-row', {}, searchInput, el('button.run-search', { onclick: () => void runSearch() }, 'Search')),
      results,
    ),
    el(
      'section.case-author-block',
      {},
      el('h4', {}, 'Author a new case'),
      titleInput,
      descriptionInput,
      labelPick,
      el('div.stance-row', {}, ...stanceInputs.map((s) => s.row)),
      allowReason,
      disallowReason,
      createButton,
    ),
    statusLine,
    handlers.assistantPanel ?? null,
  );
}
