// Related-case card: label line, turnout bar, stance percentages (only after
// the viewer has voted), and the server-derived alert banner.

import { el } from '../dom.js';
import type { CaseLabel, LinkView, Stance } from '../types.js';
import { alertSentence, labelText, voteBar } from '../viewmodel.js';

export interface CaseCardHandlers {
  onVote?: (caseId: string, stance: Stance) => void;
  onOpenCase?: (caseId: string) => void;
  onRelabel?: (caseId: string, label: CaseLabel) => void;
  onUnlink?: (caseId: string) => void;
}

export function voteBarElement(card: { votes_hidden: boolean; tally?: LinkView['tally'] }, rosterSize: number): HTMLElement {
  const bar = voteBar(card, rosterSize);
  if (bar.votesHidden) {
    return el('div.votebar-hidden', {}, 'Vote on this case to see the results.');
  }
  const fill = el('div.votebar-fill', {});
  fill.style.width = `${bar.turnoutPct}%`;
  const segments = el(
    'div.votebar-segments',
    {},
    el('span.seg-allow', {}, `${bar.allowPct}% allow`),
    el('span.seg-disallow', {}, `${bar.disallowPct}% disallow`),
    el('span.seg-unsure', {}, `${bar.unsurePct}% unsure`),
  );
  const track = el('div.votebar-track', { title: `${bar.totalVoters} of ${rosterSize} voted` }, fill);
  return el('div.votebar', {}, track, segments);
}

export function alertBanner(alert: LinkView['alert']): HTMLElement | null {
  const sentence = alertSentence(alert);
  if (!sentence) return null;
  return el('div.alert-banner', { role: 'alert' }, sentence);
}

export function caseCard(link: LinkView, rosterSize: number, viewerStance: Stance | null, handlers: CaseCardHandlers = {}): HTMLElement {
  const voteButtons = el(
    'div.vote-buttons',
    {},
    ...(['allow', 'disallow', 'unsure'] as Stance[]).map((stance) =>
      el(
        'button.vote-btn',
        {
          dataset: { stance },
          className: viewerStance === stance ? 'vote-btn selected' : 'vote-btn',
          onclick: () => handlers.onVote?.(link.case_id, stance),
        },
        stance,
      ),
    ),
  );
  return el(
    'article.case-card',
    { dataset: { caseId: link.case_id } },
    el('header', {}, el('h4', {}, link.case_title), el('span.case-label', {}, labelText(link))),
    el('p.case-description', {}, link.case_description),
    alertBanner(link.alert),
    voteBarElement(link, rosterSize),
    voteButtons,
    el(
      'footer',
      {},
      el('button.open-case', { onclick: () => handlers.onOpenCase?.(link.case_id) }, 'Open case'),
      el(
        'select.relabel',
        {
          onchange: (event: Event) =>
            handlers.onRelabel?.(link.case_id, (event.target as HTMLSelectElement).value as CaseLabel),
        },
        ...(['allowed', 'disallowed', 'ambiguous'] as CaseLabel[]).map((label) =>
          el('option', { value: label, selected: label === link.label }, label),
        ),
      ),
      el('button.unlink', { onclick: () => handlers.onUnlink?.(link.case_id) }, 'Remove from policy'),
    ),
  );
}
