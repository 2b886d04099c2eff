// Finalization ballot: anonymous up/down vote per policy with an optional
// public reason. Deliberately free of any edit affordances.

import { el } from '../dom.js';
import type { BallotEntry, VoteDirection } from '../types.js';

export interface BallotHandlers {
  onVote?: (policyId: string, direction: VoteDirection, publicReason?: string) => void;
}

export function ballotView(entries: BallotEntry[], handlers: BallotHandlers = {}): HTMLElement {
  return el(
    'section.ballot',
    {},
    el('h2', {}, 'Finalization ballot'),
    el('p', {}, 'Votes are anonymous. You may change your vote until the campaign closes.'),
    ...entries.map((entry) => {
      const reasonInput = el('input.ballot-reason', {
        placeholder: 'Optional public reason…',
      }) as HTMLInputElement;
      const voteButton = (direction: VoteDirection, text: string) =>
        el(
          `button.ballot-${direction}`,
          {
            className: entry.viewer_vote === direction ? `ballot-${direction} selected` : `ballot-${direction}`,
            onclick: () => handlers.onVote?.(entry.policy_id, direction, reasonInput.value.trim() || undefined),
          },
          text,
        );
      return el(
        'article.ballot-entry',
        { dataset: { policyId: entry.policy_id } },
        el('h3', {}, entry.title),
        el('p', {}, entry.description),
        el('div.ballot-buttons', {}, voteButton('up', 'Upvote'), voteButton('down', 'Downvote'), reasonInput),
        entry.public_reasons.length
          ? el(
              'div.public-reasons',
              {},
              el('h5', {}, 'Public reasons'),
              ...entry.public_reasons.map((reason) => el('blockquote', {}, reason)),
            )
          : null,
      );
    }),
  );
}
