// Repository overviews: all policies, and all cases with keyword search.

import { el, clear } from '../dom.js';
import type { CampaignView, CaseView, PolicyView } from '../types.js';
import { voteBarElement } from './caseCard.js';

export function policyRepository(
  policies: PolicyView[],
  campaign: CampaignView,
  onOpen: (policyId: string) => void,
  onCreate: () => void,
): HTMLElement {
  return el(
    'section.policy-repository',
    {},
    el(
      'header.repo-header',
      {},
      el('h2', {}, 'Policy repository'),
      campaign.phase === 'deliberation'
        ? el('button.create-policy', { onclick: onCreate }, 'Create')
        : null,
    ),
    ...policies.map((policy) =>
      el(
        'article.policy-card',
        { dataset: { policyId: policy.id }, onclick: () => onOpen(policy.id) },
        el('h3', {}, policy.title),
        el('p', {}, policy.description),
        el(
          'p.policy-card-meta',
          {},
          `${policy.links.length} related case${policy.links.length === 1 ? '' : 's'}`,
          policy.links.some((l) => l.alert !== 'none') ? el('span.has-alert', {}, ' needs attention') : null,
        ),
      ),
    ),
  );
}

export function caseRepository(
  cases: CaseView[],
  campaign: CampaignView,
  onOpen: (caseId: string) => void,
  onSearch: (query: string) => void,
): HTMLElement {
  const searchInput = el('input.repo-search', { placeholder: 'Search cases…' }) as HTMLInputElement;
  const list = el('div.case-list', {});
  const render = (items: CaseView[]) => {
    clear(list);
    for (const item of items) {
      list.append(
        el(
          'article.case-row',
          { dataset: { caseId: item.id }, onclick: () => onOpen(item.id) },
          el('h3', {}, item.title),
          el('p', {}, item.description),
          voteBarElement(item, campaign.roster.length),
        ),
      );
    }
    if (!items.length) list.append(el('p.empty', {}, 'No cases yet.'));
  };
  render(cases);
  return el(
    'section.case-repository',
    {},
    el('h2', {}, 'Case repository'),
    el(
      'div.search-row',
      {},
      searchInput,
      el('button.repo-search-btn', { onclick: () => onSearch(searchInput.value.trim()) }, 'Search'),
    ),
    list,
  );
}
