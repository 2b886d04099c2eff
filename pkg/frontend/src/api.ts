// Thin client for the /v1 API. The fetch implementation is injectable so
// tests can stage responses without a server.

import type {
  ActivityResponse,
  ApiError,
  AssistantSessionView,
  BallotEntry,
  CampaignView,
  CaseView,
  NotificationView,
  PolicyView,
  RevisionView,
  SuggestionView,
  ThreadView,
} from './types.js';

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class RequestFailed extends Error {
  constructor(
    public status: number,
    public body: ApiError,
  ) {
    super(body?.error?.message ?? `request failed with ${status}`);
  }
}

export class Api {
  constructor(
    private token: string,
    private base = '/v1',
    private fetchFn: FetchLike = (input, init) => fetch(input, init),
  ) {}

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const response = await this.fetchFn(`${this.base}${path}`, {
      method,
      headers: {
        Authorization: `Bearer ${this.token}`,
        ...(body !== undefined ? { 'Content-Type': 'application/json' } : {}),
      },
      ...(body !== undefined ? { body: JSON.stringify(body) } : {}),
    });
    if (response.status === 204) return undefined as T;
    const parsed = await response.json().catch(() => null);
    if (!response.ok) {
      throw new RequestFailed(response.status, parsed as ApiError);
    }
    return parsed as T;
  }

  me() {
    return this.request<{ user_id: string; display_name: string; roles: string[]; campaign_id: string }>('GET', '/me');
  }

  campaign(id: string) {
    return this.request<CampaignView>('GET', `/campaigns/${id}`);
  }

  listPolicies() {
    return this.request<PolicyView[]>('GET', '/policies');
  }

  policy(id: string) {
    return this.request<PolicyView>('GET', `/policies/${id}`);
  }

  policyHistory(id: string) {
    return this.request<RevisionView[]>('GET', `/policies/${id}/history`);
  }

  createPolicy(body: { title: string; description: string; initial_links?: unknown[]; inspiration: string[] }) {
    return this.request<PolicyView>('POST', '/policies', body);
  }

  submitEdit(
    policyId: string,
    body: {
      base_revision_id: string;
      new_title: string;
      new_description: string;
      label_updates: Record<string, string>;
      inspiration: string[];
    },
  ) {
    return this.request<RevisionView>('POST', `/policies/${policyId}/edits`, body);
  }

  revert(policyId: string, toRevisionId: string) {
    return this.request<RevisionView>('POST', `/policies/${policyId}/revert`, { to_revision_id: toRevisionId });
  }

  listCases(query?: string) {
    const q = query ? `?q=${encodeURIComponent(query)}` : '';
    return this.request<CaseView[]>('GET', `/cases${q}`);
  }

  case(id: string) {
    return this.request<CaseView>('GET', `/cases/${id}`);
  }

  createCase(body: { title: string; description: string; stance: string; reasons: { side: string; text: string }[] }) {
    return this.request<CaseView>('POST', '/cases', body);
  }

  voteCase(caseId: string, stance: string) {
    return this.request<Record<string, unknown>>('POST', `/cases/${caseId}/votes`, { stance });
  }

  addReason(caseId: string, side: string, text: string) {
    return this.request<Record<string, unknown>>('POST', `/cases/${caseId}/reasons`, { side, text });
  }

  likeReason(reasonId: string) {
    return this.request<{ likes: number }>('POST', `/reasons/${reasonId}/likes`, {});
  }

  linkCase(policyId: string, caseId: string, label: string) {
    return this.request<Record<string, unknown>>('POST', `/policies/${policyId}/links`, { case_id: caseId, label });
  }

  relabel(policyId: string, caseId: string, label: string) {
    return this.request<Record<string, unknown>>('PATCH', `/policies/${policyId}/links/${caseId}`, { label });
  }

  unlink(policyId: string, caseId: string) {
    return this.request<void>('DELETE', `/policies/${policyId}/links/${caseId}`);
  }

  listThreads(scopeKind?: string, scopeTarget?: string) {
    const params = new URLSearchParams();
    if (scopeKind) params.set('scope_kind', scopeKind);
    if (scopeTarget) params.set('scope_target', scopeTarget);
    const suffix = params.toString() ? `?${params}` : '';
    return this.request<ThreadView[]>('GET', `/threads${suffix}`);
  }

  openThread(scope: { kind: string; target_id: string | null }, title: string, firstComment: string) {
    return this.request<ThreadView>('POST', '/threads', { scope, title, first_comment: firstComment });
  }

  reply(threadId: string, text: string) {
    return this.request<Record<string, unknown>>('POST', `/threads/${threadId}/comments`, { text });
  }

  setThreadStatus(threadId: string, open: boolean) {
    return this.request<ThreadView>('POST', `/threads/${threadId}/${open ? 'reopen' : 'close'}`, {});
  }

  notifications(unreadOnly = false) {
    return this.request<NotificationView[]>('GET', `/notifications?unread_only=${unreadOnly}`);
  }

  markRead(ids: string[]) {
    return this.request<void>('POST', '/notifications/read', { ids });
  }

  activity(period?: number) {
    const suffix = period === undefined ? '' : `?period=${period}`;
    return this.request<ActivityResponse>('GET', `/activity${suffix}`);
  }

  ballot(campaignId: string) {
    return this.request<BallotEntry[]>('GET', `/campaigns/${campaignId}/ballot`);
  }

  finalVote(policyId: string, direction: 'up' | 'down', publicReason?: string) {
    return this.request<void>('POST', `/policies/${policyId}/final-votes`, {
      direction,
      public_reason: publicReason || null,
    });
  }

  startAssistantSession(body: { kind: string; policy_id?: string; selected_case_ids?: string[] }) {
    return this.request<AssistantSessionView>('POST', '/assistant/sessions', body);
  }

  chooseAssistantMode(sessionId: string, mode: string) {
    return this.request<AssistantSessionView>('POST', `/assistant/sessions/${sessionId}/mode`, { mode });
  }

  generateSuggestion(sessionId: string, instructions?: string) {
    return this.request<{ suggestion: SuggestionView; session: AssistantSessionView }>(
      'POST',
      `/assistant/sessions/${sessionId}/generate`,
      { instructions: instructions || null },
    );
  }

  restartAssistant(sessionId: string) {
    return this.request<AssistantSessionView>('POST', `/assistant/sessions/${sessionId}/restart`, {});
  }

  adoptSuggestion(sessionId: string) {
    return this.request<Record<string, string>>('POST', `/assistant/sessions/${sessionId}/adopt`, {
      suggestion_index: -1,
    });
  }

  // Long-lived change feed; invokes onEvent for each newline-delimited event.
  async subscribe(campaignId: string, fromSeq: number, onEvent: (event: { seq: number; kind: string }) => void, signal?: AbortSignal) {
    const response = await this.fetchFn(`${this.base}/campaigns/${campaignId}/feed?from_seq=${fromSeq}`, {
      headers: { Authorization: `Bearer ${this.token}` },
      signal,
    });
    const reader = response.body?.getReader();
    if (!reader) return;
    const decoder = new TextDecoder();
    let buffer = '';
    for (;;) {
      const { done, value } = await reader.read();
      if (done) break;
      buffer += decoder.decode(value, { stream: true });
      const lines = buffer.split('\n');
      buffer = lines.pop() ?? '';
      for (const line of lines) {
        if (line.trim()) onEvent(JSON.parse(line));
      }
    }
  }
}
