// Case page: immutable scenario text, the viewer-gated tally, pro/con
// reasons with likes, linked policies, and the case's own discussion panel.

import { el } from '../dom.js';
import type { CampaignView, CaseView, Stance, ThreadView } from '../types.js';
import { voteBarElement } from './caseCard.js';
import { discussionPanel, type DiscussionHandlers } from './discussion.js';

export interface CasePageHandlers extends DiscussionHandlers {
  onVote?: (stance: Stance) => void;
  onLike?: (reasonId: string) => void;
  onAddReason?: (side: 'allow' | 'disallow', text: string) => void;
  onOpenPolicy?: (policyId: string) => void;
}

export function casePage(
  caseView: CaseView,
  campaign: CampaignView,
  threads: ThreadView[],
  handlers: CasePageHandlers = {},
): HTMLElement {
  const reasonText = el('input.new-reason', { placeholder: 'Add a reason…' }) as HTMLInputElement;
  const sidePick = el(
    'select.new-reason-side',
    {},
    el('option', { value: 'allow' }, 'reason to allow'),
    el('option', { value: 'disallow' }, 'reason to disallow'),
  ) as HTMLSelectElement;
  return el(
    'section.case-page',
    { dataset: { caseId: caseView.id } },
    el('h2', {}, caseView.title),
    el('p.case-description', {}, caseView.description),
    el('p.case-meta', {}, 'Cases cannot be edited once created, so votes stay relevant.'),
    voteBarElement(caseView, campaign.roster.length),
    el(
      'div.vote-buttons',
      {},
      ...(['allow', 'disallow', 'unsure'] as Stance[]).map((stance) =>
        el(
          'button.vote-btn',
          {
            className: caseView.viewer_stance === stance ? 'vote-btn selected' : 'vote-btn',
            onclick: () => handlers.onVote?.(stance),
          },
          stance,
        ),
      ),
    ),
    el(
      'section.reasons',
      {},
      el('h3', {}, 'Reasons'),
      ...caseView.reasons.map((reason) =>
        el(
          'div.reason',
          { dataset: { side: reason.side, reasonId: reason.id } },
          el('span.reason-side', {}, reason.side === 'allow' ? 'pro' : 'con'),
          el('span.reason-text', {}, ` ${reason.text} `),
          el(
            'button.like-reason',
            { onclick: () => handlers.onLike?.(reason.id) },
            `${reason.liked_by_viewer ? 'Liked' : 'Like'} (${reason.likes})`,
          ),
        ),
      ),
      el(
        'div.add-reason-row',
        {},
        sidePick,
        reasonText,
        el(
          'button.add-reason',
          {
            onclick: () => {
              if (reasonText.value.trim()) {
                handlers.onAddReason?.(sidePick.value as 'allow' | 'disallow', reasonText.value.trim());
              }
            },
          },
          'Add',
        ),
      ),
    ),
    el(
      'section.linked-policies',
      {},
      el('h3', {}, 'Appears in policies'),
      ...(caseView.linked_policies.length
        ? caseView.linked_policies.map((lp) =>
            el(
              'button.linked-policy',
              { onclick: () => handlers.onOpenPolicy?.(lp.policy_id) },
              `${lp.policy_id} (${lp.label})`,
            ),
          )
        : [el('p.empty', {}, 'Not linked to any policy yet.')]),
    ),
    discussionPanel(threads, { kind: 'case', target_id: caseView.id }, handlers),
  );
}
