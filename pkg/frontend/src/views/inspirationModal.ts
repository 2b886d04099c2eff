// Multiple-choice prompt shown on every policy create/edit submit.

import { el } from '../dom.js';
import { INSPIRATION_OPTIONS } from '../types.js';

export function inspirationModal(onSubmit: (tags: string[]) => void): HTMLElement {
  const boxes = INSPIRATION_OPTIONS.map(({ value, text }) => {
    const input = el('input', { type: 'checkbox', value }) as HTMLInputElement;
    return { input, row: el('label.inspiration-option', {}, input, ` ${text}`) };
  });
  const warning = el('p.inspiration-warning', {});
  return el(
    'div.inspiration-modal',
    { role: 'dialog' },
    el('h4', {}, 'What inspired you to create or edit this policy?'),
    el('p', {}, 'Choose one or more options.'),
    ...boxes.map((b) => b.row),
    warning,
    el(
      'button.inspiration-submit',
      {
        onclick: () => {
          const tags = boxes.filter((b) => b.input.checked).map((b) => b.input.value);
          if (!tags.length) {
            warning.textContent = 'Please choose at least one option.';
            return;
          }
          onSubmit(tags);
        },
      },
      'Submit',
    ),
  );
}
