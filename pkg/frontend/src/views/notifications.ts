// Notification list with unread badge and the activity page with period
// progress toward the participation minimum.

import { el } from '../dom.js';
import type { ActivityResponse, NotificationView } from '../types.js';
import { activityProgress, unreadCount } from '../viewmodel.js';

export function unreadBadge(notifications: NotificationView[]): HTMLElement {
  const count = unreadCount(notifications);
  const badge = el('span.unread-badge', { dataset: { count: String(count) } }, count ? String(count) : '');
  if (!count) badge.classList.add('empty');
  return badge;
}

export interface NotificationHandlers {
  onMarkRead?: (ids: string[]) => void;
  onOpenSubject?: (subjectType: string, subjectId: string) => void;
}

export function notificationsView(notifications: NotificationView[], handlers: NotificationHandlers = {}): HTMLElement {
  const describe = (n: NotificationView) =>
    n.kind === 'thread_reply' ? 'New reply in a thread you participated in' : 'A policy you follow changed';
  return el(
    'section.notifications',
    {},
    el('h2', {}, 'Notifications ', unreadBadge(notifications)),
    notifications.length
      ? el(
          'ul.notification-list',
          {},
          ...notifications.map((n) =>
            el(
              'li.notification',
              { dataset: { notificationId: n.id, read: String(n.read) } },
              el('span.notification-text', {}, describe(n)),
              el(
                'button.open-subject',
                { onclick: () => handlers.onOpenSubject?.(n.subject_type, n.subject_id) },
                'Open',
              ),
              n.read ? null : el('button.mark-read', { onclick: () => handlers.onMarkRead?.([n.id]) }, 'Mark read'),
            ),
          ),
        )
      : el('p.empty', {}, 'Nothing new.'),
    unreadCount(notifications)
      ? el(
          'button.mark-all-read',
          { onclick: () => handlers.onMarkRead?.(notifications.filter((n) => !n.read).map((n) => n.id)) },
          'Mark all read',
        )
      : null,
  );
}

export function activityView(activity: ActivityResponse, minimum: number, periodLabel?: string): HTMLElement {
  const progress = activityProgress(activity, minimum);
  const progressBlock = progress
    ? el(
        'div.activity-progress',
        { dataset: { meets: String(progress.meetsMinimum) } },
        el('p', {}, `${progress.actions} of ${progress.minimum} actions ${periodLabel ? `in ${periodLabel}` : ''}`),
        (() => {
          const fill = el('div.progress-fill', {});
          fill.style.width = `${progress.pct}%`;
          return el('div.progress-track', {}, fill);
        })(),
        progress.meetsMinimum
          ? el('p.progress-note', {}, 'Minimum met.')
          : el('p.progress-note', {}, `${progress.remaining} more to go. Case votes and likes do not count.`),
      )
    : null;
  return el(
    'section.activity',
    {},
    el('h2', {}, 'Your activity'),
    progressBlock,
    activity.entries.length
      ? el(
          'ul.activity-list',
          {},
          ...activity.entries.map((entry) =>
            el(
              'li.activity-entry',
              { dataset: { counts: String(entry.counts_toward_minimum) } },
              el('span.activity-action', {}, entry.action.replaceAll('_', ' ')),
              el('span.activity-subject', {}, ` ${entry.subject_type} ${entry.subject_id}`),
            ),
          ),
        )
      : el('p.empty', {}, 'No activity yet.'),
  );
}
