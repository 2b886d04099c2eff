// Pure view-model helpers. The client never computes alerts or tallies
// itself; these functions only reshape server-derived values for rendering.

import type { ActivityResponse, AlertState, ApiError, CaseView, ConflictReport, LinkView, NotificationView, Tally } from './types.js';

export const ALERT_SENTENCES: Record<Exclude<AlertState, 'none'>, string> = {
  misaligned: 'The policy may need editing to better align with the majority vote on this case.',
  needs_clarification: 'The policy may need editing to clarify whether this case is allowed or not.',
};

export function alertSentence(alert: AlertState): string | null {
  return alert === 'none' ? null : ALERT_SENTENCES[alert];
}

export interface VoteBarModel {
  votesHidden: boolean;
  totalVoters: number;
  // Bar fill: voters out of the whole roster.
  turnoutPct: number;
  // Segment split among those who voted.
  allowPct: number;
  disallowPct: number;
  unsurePct: number;
}

const pct = (part: number, whole: number): number => (whole > 0 ? Math.round((part / whole) * 100) : 0);

export function voteBar(card: { votes_hidden: boolean; tally?: Tally }, rosterSize: number): VoteBarModel {
  if (card.votes_hidden || !card.tally) {
    return { votesHidden: true, totalVoters: 0, turnoutPct: 0, allowPct: 0, disallowPct: 0, unsurePct: 0 };
  }
  const tally = card.tally;
  return {
    votesHidden: false,
    totalVoters: tally.total_voters,
    turnoutPct: pct(tally.total_voters, rosterSize),
    allowPct: pct(tally.allow_count, tally.total_voters),
    disallowPct: pct(tally.disallow_count, tally.total_voters),
    unsurePct: pct(tally.unsure_count, tally.total_voters),
  };
}

export function isEditConflict(status: number, body: ApiError | null): body is ApiError & { conflict: ConflictReport } {
  return status === 409 && body?.error?.code === 'edit_conflict' && body.conflict !== undefined;
}

export interface ConflictViewModel {
  currentHead: string;
  revisions: { revision_id: string; author: string; title: string; description: string }[];
}

export function conflictViewModel(report: ConflictReport): ConflictViewModel {
  return {
    currentHead: report.current_head,
    revisions: report.intervening_revisions.map((r) => ({
      revision_id: r.revision_id,
      author: r.author,
      title: r.title,
      description: r.description,
    })),
  };
}

export function unreadCount(notifications: NotificationView[]): number {
  return notifications.filter((n) => !n.read).length;
}

export interface ProgressModel {
  actions: number;
  minimum: number;
  remaining: number;
  meetsMinimum: boolean;
  pct: number;
}

export function activityProgress(activity: ActivityResponse, minimum: number): ProgressModel | null {
  if (!activity.participation) return null;
  const { actions, meets_minimum } = activity.participation;
  return {
    actions,
    minimum,
    remaining: Math.max(0, minimum - actions),
    meetsMinimum: meets_minimum,
    pct: minimum > 0 ? Math.min(100, Math.round((actions / minimum) * 100)) : 100,
  };
}

export function caseMatchesQuery(card: Pick<CaseView, 'title' | 'description'>, query: string): boolean {
  const haystack = `${card.title}\n${card.description}`.toLowerCase();
  return haystack.includes(query.toLowerCase());
}

export function labelText(link: Pick<LinkView, 'label'>): string {
  switch (link.label) {
    case 'allowed':
      return 'Allowed by this policy';
    case 'disallowed':
      return 'Disallowed by this policy';
    case 'ambiguous':
      return 'Ambiguous under this policy';
  }
}
