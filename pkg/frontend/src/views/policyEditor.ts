// Two-step policy editor: update the wording, then review the labels of the
// related cases. Edits always round-trip to the server (no optimistic UI);
// a stale base comes back as a 409 whose conflict report is rendered for
// review before resubmitting against the new head.

import { RequestFailed } from '../api.js';
import { el, clear } from '../dom.js';
import type { ApiError, CaseLabel, PolicyView, RevisionView } from '../types.js';
import { conflictViewModel, isEditConflict } from '../viewmodel.js';
import { inspirationModal } from './inspirationModal.js';

export interface EditorApi {
  submitEdit(
    policyId: string,
    body: {
      base_revision_id: string;
      new_title: string;
      new_description: string;
      label_updates: Record<string, string>;
      inspiration: string[];
    },
  ): Promise<RevisionView>;
}

export interface PolicyEditorHandlers {
  onSaved?: (revision: RevisionView) => void;
  assistantPanel?: HTMLElement;
}

export function policyEditor(policy: PolicyView, api: EditorApi, handlers: PolicyEditorHandlers = {}): HTMLElement {
  let baseRevisionId = policy.head_revision_id;
  const titleInput = el('input.edit-title', { value: policy.title }) as HTMLInputElement;
  const descriptionInput = el('textarea.edit-description', {
    value: policy.description,
  }) as HTMLTextAreaElement;

  const labelSelects = new Map<string, HTMLSelectElement>();
  const labelRows = policy.links.map((link) => {
    const select = el(
      'select.label-review',
      { dataset: { caseId: link.case_id } },
      ...(['allowed', 'disallowed', 'ambiguous'] as CaseLabel[]).map((label) =>
        el('option', { value: label, selected: label === link.label }, label),
      ),
    ) as HTMLSelectElement;
    labelSelects.set(link.case_id, select);
    return el(
      'li.label-review-row',
      {},
      el('span.label-case-title', {}, link.case_title),
      el('span.label-current', {}, `currently ${link.label}`),
      select,
    );
  });

  const stepOne = el(
    'fieldset.step-one',
    {},
    el('legend', {}, 'Step 1: update the wording'),
    el('label', {}, 'Title', titleInput),
    el('label', {}, 'Description', descriptionInput),
  );
  const stepTwo = el(
    'fieldset.step-two',
    { disabled: true },
    el('legend', {}, 'Step 2: does your edit change any case labels?'),
    labelRows.length ? el('ul.label-review-list', {}, ...labelRows) : el('p', {}, 'No related cases to review.'),
  );
  const statusLine = el('p.editor-status', {});
  const conflictZone = el('div.conflict-zone', {});
  const modalZone = el('div.modal-zone', {});

  const nextButton = el(
    'button.next-step',
    {
      onclick: () => {
        stepTwo.removeAttribute('disabled');
        (stepTwo as HTMLFieldSetElement).disabled = false;
        submitButton.removeAttribute('disabled');
      },
    },
    'Next: review labels',
  );

  const collectLabelUpdates = (): Record<string, string> => {
    const updates: Record<string, string> = {};
    for (const link of policy.links) {
      const chosen = labelSelects.get(link.case_id)?.value;
      if (chosen && chosen !== link.label) updates[link.case_id] = chosen;
    }
    return updates;
  };

  const submitWith = async (inspiration: string[]) => {
    clear(modalZone);
    try {
      const revision = await api.submitEdit(policy.id, {
        base_revision_id: baseRevisionId,
        new_title: titleInput.value,
        new_description: descriptionInput.value,
        label_updates: collectLabelUpdates(),
        inspiration,
      });
      statusLine.textContent = 'Saved.';
      clear(conflictZone);
      handlers.onSaved?.(revision);
    } catch (error) {
      if (error instanceof RequestFailed && isEditConflict(error.status, error.body as ApiError)) {
        renderConflict(error.body as ApiError & { conflict: NonNullable<ApiError['conflict']> });
      } else {
        statusLine.textContent =
          error instanceof RequestFailed ? `Rejected: ${error.body?.error?.message ?? error.status}` : String(error);
      }
    }
  };

  const renderConflict = (body: ApiError & { conflict: NonNullable<ApiError['conflict']> }) => {
    const vm = conflictViewModel(body.conflict);
    clear(conflictZone);
    conflictZone.append(
      el(
        'section.conflict-view',
        {},
        el('h4', {}, 'Someone edited this policy while you were editing'),
        el('p', {}, 'Review the new changes and decide whether to include them with your own edit before submitting.'),
        el(
          'ul.intervening-revisions',
          {},
          ...vm.revisions.map((r) =>
            el(
              'li.intervening-revision',
              { dataset: { revisionId: r.revision_id } },
              el('strong', {}, r.title),
              el('span.rev-author', {}, ` by ${r.author}`),
              el('p', {}, r.description),
            ),
          ),
        ),
        el(
          'button.resubmit-latest',
          {
            onclick: () => {
              baseRevisionId = vm.currentHead;
              statusLine.textContent = 'Base updated to the latest revision; submit again when ready.';
              clear(conflictZone);
            },
          },
          'Continue from the latest version',
        ),
      ),
    );
  };

  const submitButton = el(
    'button.submit-edit',
    {
      disabled: true,
      onclick: () => {
        clear(modalZone);
        modalZone.append(inspirationModal((tags) => void submitWith(tags)));
      },
    },
    'Submit changes',
  );

  return el(
    'section.policy-editor',
    { dataset: { policyId: policy.id } },
    el('h3', {}, `Edit: ${policy.title}`),
    stepOne,
    nextButton,
    stepTwo,
    submitButton,
    statusLine,
    conflictZone,
    modalZone,
    handlers.assistantPanel ?? null,
  );
}
