// Application shell: token login, hash router, navigation with unread badge,
// and a change-feed subscription that refreshes the open view.

import { Api } from './api.js';
import { el, clear } from './dom.js';
import type { CampaignView, SuggestionView } from './types.js';
import { unreadCount } from './viewmodel.js';
import { assistantPanel } from './views/assistantPanel.js';
import { ballotView } from './views/ballot.js';
import { caseEditor } from './views/caseEditor.js';
import { casePage } from './views/casePage.js';
import { discussionPanel } from './views/discussion.js';
import { inspirationModal } from './views/inspirationModal.js';
import { notificationsView, activityView } from './views/notifications.js';
import { policyEditor } from './views/policyEditor.js';
import { policyPage } from './views/policyPage.js';
import { caseRepository, policyRepository } from './views/repository.js';

interface Session {
  api: Api;
  campaign: CampaignView;
  userId: string;
  lastSeq: number;
}

export function mountApp(root: HTMLElement): void {
  const token = sessionStorage.getItem('agorum_token');
  if (!token) {
    renderLogin(root);
    return;
  }
  void start(root, token);
}

function renderLogin(root: HTMLElement, message = ''): void {
  const tokenInput = el('input.token-input', { placeholder: 'Paste your invite token…' }) as HTMLInputElement;
  clear(root).append(
    el(
      'section.login',
      {},
      el('h1', {}, 'agorum'),
      el('p', {}, 'Collaborative, case-grounded policy design.'),
      message ? el('p.login-error', {}, message) : null,
      tokenInput,
      el(
        'button.login-btn',
        {
          onclick: () => {
            sessionStorage.setItem('agorum_token', tokenInput.value.trim());
            mountApp(root);
          },
        },
        'Enter',
      ),
    ),
  );
}

async function start(root: HTMLElement, token: string): Promise<void> {
  const api = new Api(token);
  let session: Session;
  try {
    const me = await api.me();
    const campaign = await api.campaign(me.campaign_id);
    session = { api, campaign, userId: me.user_id, lastSeq: 0 };
  } catch {
    sessionStorage.removeItem('agorum_token');
    renderLogin(root, 'That token was not accepted.');
    return;
  }

  const content = el('main.content', {});
  const badgeSlot = el('span.badge-slot', {});
  const nav = el(
    'nav.sidebar',
    {},
    el('h1.brand', {}, 'agorum'),
    el('p.campaign-title', {}, session.campaign.title),
    navLink('#/policies', 'Policy Repository'),
    navLink('#/cases', 'Case Repository'),
    navLink('#/about', 'About'),
    navLink('#/ballot', 'Finalization'),
    el('a.nav-link', { href: '#/notifications' }, 'Notifications ', badgeSlot),
    navLink('#/activity', 'Activity'),
  );
  clear(root).append(el('div.shell', {}, nav, content));

  const refreshBadge = async () => {
    const notifications = await session.api.notifications();
    const count = unreadCount(notifications);
    badgeSlot.textContent = count ? `(${count})` : '';
  };

  const route = async () => {
    session.campaign = await api.campaign(session.campaign.id);
    const hash = location.hash || '#/policies';
    const [, screen, entityId, sub] = hash.split('/');
    clear(content);
    try {
      if (screen === 'policies' && entityId && sub === 'edit') {
        await showPolicyEditor(entityId);
      } else if (screen === 'policies' && entityId && sub === 'cases') {
        await showCaseEditor(entityId);
      } else if (screen === 'policies' && entityId) {
        await showPolicy(entityId);
      } else if (screen === 'cases' && entityId) {
        await showCase(entityId);
      } else if (screen === 'cases') {
        await showCaseRepo();
      } else if (screen === 'about') {
        await showAbout();
      } else if (screen === 'ballot') {
        await showBallot();
      } else if (screen === 'notifications') {
        await showNotifications();
      } else if (screen === 'activity') {
        await showActivity();
      } else if (screen === 'create') {
        await showCreatePolicy();
      } else {
        await showPolicyRepo();
      }
    } catch (error) {
      content.append(el('p.route-error', {}, `Could not load this page: ${error instanceof Error ? error.message : error}`));
    }
    void refreshBadge();
  };

  async function showPolicyRepo() {
    const policies = await api.listPolicies();
    content.append(
      policyRepository(policies, session.campaign, (id) => (location.hash = `#/policies/${id}`), () => (location.hash = '#/create')),
    );
  }

  async function showPolicy(policyId: string) {
    const [policy, threads, cases] = await Promise.all([
      api.policy(policyId),
      api.listThreads('policy', policyId),
      api.listCases(),
    ]);
    const stances = new Map(cases.map((c) => [c.id, c.viewer_stance]));
    content.append(
      policyPage(policy, session.campaign, threads, {
        onEditPolicy: () => (location.hash = `#/policies/${policyId}/edit`),
        onEditCases: () => (location.hash = `#/policies/${policyId}/cases`),
        onShowHistory: () => void showHistory(policyId),
        viewerStanceFor: (caseId) => stances.get(caseId) ?? null,
        onVote: async (caseId, stance) => {
          await api.voteCase(caseId, stance);
          void route();
        },
        onOpenCase: (caseId) => (location.hash = `#/cases/${caseId}`),
        onRelabel: async (caseId, label) => {
          await api.relabel(policyId, caseId, label);
          void route();
        },
        onUnlink: async (caseId) => {
          await api.unlink(policyId, caseId);
          void route();
        },
        ...discussionHandlers(),
      }),
    );
  }

  async function showHistory(policyId: string) {
    const history = await api.policyHistory(policyId);
    clear(content).append(
      el(
        'section.history',
        {},
        el('h2', {}, 'Edit history'),
        ...history
          .slice()
          .reverse()
          .map((revision) =>
            el(
              'article.revision',
              {},
              el('h4', {}, revision.title),
              el('p', {}, revision.description),
              el(
                'p.revision-meta',
                {},
                `by ${revision.author}${revision.is_revert_of ? ' (revert)' : ''}`,
                el(
                  'button.revert-to',
                  {
                    onclick: async () => {
                      await api.revert(policyId, revision.revision_id);
                      location.hash = `#/policies/${policyId}`;
                    },
                  },
                  'Revert to this version',
                ),
              ),
            ),
          ),
      ),
    );
  }

  async function showPolicyEditor(policyId: string) {
    const policy = await api.policy(policyId);
    const panel = assistantPanel(api, {
      kind: 'policy_revision',
      policyId,
      selectedCaseIds: policy.links.map((l) => l.case_id),
      onAdopt: (suggestion: SuggestionView) => {
        const title = content.querySelector<HTMLInputElement>('.edit-title');
        const description = content.querySelector<HTMLTextAreaElement>('.edit-description');
        if (title) title.value = suggestion.title;
        if (description) description.value = suggestion.description;
      },
    });
    content.append(
      policyEditor(policy, api, {
        onSaved: () => (location.hash = `#/policies/${policyId}`),
        assistantPanel: panel,
      }),
    );
  }

  async function showCaseEditor(policyId: string) {
    const policy = await api.policy(policyId);
    const panel = assistantPanel(api, {
      kind: 'case_brainstorm',
      policyId,
      onAdopt: (suggestion: SuggestionView) => {
        const title = content.querySelector<HTMLInputElement>('.new-case-title');
        const description = content.querySelector<HTMLTextAreaElement>('.new-case-description');
        if (title) title.value = suggestion.title;
        if (description) description.value = suggestion.description;
      },
    });
    content.append(
      caseEditor(policy, api, {
        onLinked: () => void refreshBadge(),
        assistantPanel: panel,
      }),
    );
  }

  async function showCaseRepo() {
    const cases = await api.listCases();
    content.append(
      caseRepository(cases, session.campaign, (id) => (location.hash = `#/cases/${id}`), async (query) => {
        clear(content);
        const filtered = await api.listCases(query || undefined);
        content.append(
          caseRepository(filtered, session.campaign, (id) => (location.hash = `#/cases/${id}`), () => void route()),
        );
      }),
    );
  }

  async function showCase(caseId: string) {
    const [caseView, threads] = await Promise.all([api.case(caseId), api.listThreads('case', caseId)]);
    content.append(
      casePage(caseView, session.campaign, threads, {
        onVote: async (stance) => {
          await api.voteCase(caseId, stance);
          void route();
        },
        onLike: async (reasonId) => {
          await api.likeReason(reasonId);
          void route();
        },
        onAddReason: async (side, text) => {
          await api.addReason(caseId, side, text);
          void route();
        },
        onOpenPolicy: (policyId) => (location.hash = `#/policies/${policyId}`),
        ...discussionHandlers(),
      }),
    );
  }

  async function showAbout() {
    const threads = await api.listThreads('about');
    content.append(
      el(
        'section.about',
        {},
        el('h2', {}, session.campaign.title),
        el('p', {}, session.campaign.description),
        el('p.phase-note', {}, `Current phase: ${session.campaign.phase}`),
        discussionPanel(threads, { kind: 'about', target_id: null }, discussionHandlers()),
      ),
    );
  }

  async function showBallot() {
    if (session.campaign.phase !== 'finalization' && session.campaign.phase !== 'closed') {
      content.append(el('p.empty', {}, 'The finalization ballot opens once deliberation ends.'));
      return;
    }
    const entries = await api.ballot(session.campaign.id);
    content.append(
      ballotView(entries, {
        onVote: async (policyId, direction, publicReason) => {
          await api.finalVote(policyId, direction, publicReason);
          void route();
        },
      }),
    );
  }

  async function showNotifications() {
    const notifications = await api.notifications();
    content.append(
      notificationsView(notifications, {
        onMarkRead: async (ids) => {
          await api.markRead(ids);
          void route();
        },
        onOpenSubject: (subjectType, subjectId) => {
          location.hash = subjectType === 'policy' ? `#/policies/${subjectId}` : '#/about';
        },
      }),
    );
  }

  async function showActivity() {
    const periods = session.campaign.config.periods;
    const activity = await api.activity(periods.length ? periods.length - 1 : undefined);
    content.append(activityView(activity, session.campaign.config.min_actions_per_period, periods.length ? `period ${periods.length}` : undefined));
  }

  async function showCreatePolicy() {
    const titleInput = el('input.create-title', { placeholder: 'Policy title' }) as HTMLInputElement;
    const descriptionInput = el('textarea.create-description', {
      placeholder: 'What does this policy allow or disallow?',
    }) as HTMLTextAreaElement;
    const modalZone = el('div.modal-zone', {});
    const note = el('p.create-note', {}, 'Policies need at least one related case to reach the finalization ballot.');
    content.append(
      el(
        'section.create-policy',
        {},
        el('h2', {}, 'Create a policy'),
        note,
        titleInput,
        descriptionInput,
        el(
          'button.create-submit',
          {
            onclick: () => {
              clear(modalZone);
              modalZone.append(
                inspirationModal(async (tags) => {
                  const created = await api.createPolicy({
                    title: titleInput.value.trim(),
                    description: descriptionInput.value.trim(),
                    inspiration: tags,
                  });
                  location.hash = `#/policies/${created.id}/cases`;
                }),
              );
            },
          },
          'Create',
        ),
        modalZone,
      ),
    );
  }

  function discussionHandlers() {
    return {
      onOpenThread: async (scope: { kind: string; target_id: string | null }, title: string, first: string) => {
        await api.openThread(scope, title, first);
        void route();
      },
      onReply: async (threadId: string, text: string) => {
        await api.reply(threadId, text);
        void route();
      },
      onToggleThread: async (threadId: string, open: boolean) => {
        await api.setThreadStatus(threadId, open);
        void route();
      },
    };
  }

  window.addEventListener('hashchange', () => void route());
  await route();

  // Refresh the open view whenever the campaign log advances.
  const controller = new AbortController();
  void session.api
    .subscribe(
      session.campaign.id,
      1,
      (event) => {
        if (event.seq > session.lastSeq) {
          session.lastSeq = event.seq;
          void route();
        }
      },
      controller.signal,
    )
    .catch(() => undefined);
}

function navLink(href: string, text: string): HTMLElement {
  return el('a.nav-link', { href }, text);
}

if (typeof document !== 'undefined' && document.getElementById('app')) {
  mountApp(document.getElementById('app') as HTMLElement);
}
