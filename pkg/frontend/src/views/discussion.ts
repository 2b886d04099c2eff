// Discussion panel shared by policy pages, case pages, and the about page.

import { el } from '../dom.js';
import type { ThreadView } from '../types.js';

export interface DiscussionHandlers {
  onOpenThread?: (scope: ThreadView['scope'], title: string, firstComment: string) => void;
  onReply?: (threadId: string, text: string) => void;
  onToggleThread?: (threadId: string, open: boolean) => void;
}

function threadElement(thread: ThreadView, handlers: DiscussionHandlers): HTMLElement {
  const replyInput = el('input.reply-text', { placeholder: 'Reply…' }) as HTMLInputElement;
  const closed = thread.status === 'closed';
  return el(
    'article.thread',
    { dataset: { threadId: thread.id, status: thread.status } },
    el(
      'header',
      {},
      el('h5', {}, thread.title),
      el('span.thread-status', {}, closed ? 'closed' : 'open'),
      el(
        'button.toggle-thread',
        { onclick: () => handlers.onToggleThread?.(thread.id, closed) },
        closed ? 'Reopen' : 'Close',
      ),
    ),
    el(
      'div.comments',
      {},
      ...thread.comments.map((c) => el('p.comment', {}, el('strong', {}, c.author), ` ${c.text}`)),
    ),
    closed
      ? el('p.thread-closed-note', {}, 'This thread is closed.')
      : el(
          'div.reply-row',
          {},
          replyInput,
          el(
            'button.reply-btn',
            {
              onclick: () => {
                if (replyInput.value.trim()) handlers.onReply?.(thread.id, replyInput.value.trim());
              },
            },
            'Reply',
          ),
        ),
  );
}

export function discussionPanel(
  threads: ThreadView[],
  scope: ThreadView['scope'],
  handlers: DiscussionHandlers = {},
): HTMLElement {
  const title = el('input.new-thread-title', { placeholder: 'Topic' }) as HTMLInputElement;
  const first = el('input.new-thread-comment', { placeholder: 'First comment' }) as HTMLInputElement;
  return el(
    'section.discussion-panel',
    {},
    el('h3', {}, 'Discussion'),
    ...threads.map((t) => threadElement(t, handlers)),
    el(
      'div.new-thread',
      {},
      title,
      first,
      el(
        'button.open-thread',
        {
          onclick: () => {
            if (title.value.trim() && first.value.trim()) {
              handlers.onOpenThread?.(scope, title.value.trim(), first.value.trim());
            }
          },
        },
        'Start discussion',
      ),
    ),
  );
}
