// Policy page: title and description, related-case cards, action buttons, and
// the policy's discussion panel.

import { el } from '../dom.js';
import type { CampaignView, PolicyView, Stance, ThreadView } from '../types.js';
import { caseCard, type CaseCardHandlers } from './caseCard.js';
import { discussionPanel, type DiscussionHandlers } from './discussion.js';

export interface PolicyPageHandlers extends CaseCardHandlers, DiscussionHandlers {
  onEditPolicy?: () => void;
  onEditCases?: () => void;
  onShowHistory?: () => void;
  viewerStanceFor?: (caseId: string) => Stance | null;
}

export function policyPage(
  policy: PolicyView,
  campaign: CampaignView,
  threads: ThreadView[],
  handlers: PolicyPageHandlers = {},
): HTMLElement {
  const rosterSize = campaign.roster.length;
  const actions = policy.frozen
    ? el('p.frozen-note', {}, 'Policies are frozen during voting.')
    : el(
        'div.policy-actions',
        {},
        el('button.edit-policy', { onclick: () => handlers.onEditPolicy?.() }, 'Edit policy'),
        el('button.edit-cases', { onclick: () => handlers.onEditCases?.() }, 'Edit cases'),
      );
  return el(
    'section.policy-page',
    { dataset: { policyId: policy.id } },
    el(
      'header.policy-header',
      {},
      el('h2', {}, policy.title),
      el('p.policy-description', {}, policy.description),
      el(
        'p.policy-meta',
        {},
        `${policy.history_length} revision${policy.history_length === 1 ? '' : 's'}`,
        el('button.show-history', { onclick: () => handlers.onShowHistory?.() }, 'History'),
      ),
    ),
    actions,
    el(
      'section.related-cases',
      {},
      el('h3', {}, 'Related cases'),
      ...(policy.links.length
        ? policy.links.map((link) =>
            caseCard(link, rosterSize, handlers.viewerStanceFor?.(link.case_id) ?? null, handlers),
          )
        : [el('p.empty', {}, 'No related cases yet. Policies need at least one case to reach the final ballot.')]),
    ),
    discussionPanel(threads, { kind: 'policy', target_id: policy.id }, handlers),
  );
}
