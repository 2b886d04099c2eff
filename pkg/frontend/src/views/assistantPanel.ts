// Side panel for the drafting assistants: mode choice (brainstorming only),
// iterative generation with optional instructions, restart (history kept),
// and adopting a suggestion into the host editor.

import { el, clear } from '../dom.js';
import type { AssistantSessionView, SuggestionView } from '../types.js';

export interface AssistantApi {
  startAssistantSession(body: {
    kind: string;
    policy_id?: string;
    selected_case_ids?: string[];
  }): Promise<AssistantSessionView>;
  chooseAssistantMode(sessionId: string, mode: string): Promise<AssistantSessionView>;
  generateSuggestion(
    sessionId: string,
    instructions?: string,
  ): Promise<{ suggestion: SuggestionView; session: AssistantSessionView }>;
  restartAssistant(sessionId: string): Promise<AssistantSessionView>;
}

export interface AssistantPanelOptions {
  kind: 'case_brainstorm' | 'policy_revision' | 'policy_creation';
  policyId?: string;
  selectedCaseIds?: string[];
  onAdopt?: (suggestion: SuggestionView) => void;
}

export function assistantPanel(api: AssistantApi, options: AssistantPanelOptions): HTMLElement {
  let session: AssistantSessionView | null = null;
  const transcript = el('div.assistant-transcript', {});
  const controls = el('div.assistant-controls', {});
  const status = el('p.assistant-status', {});

  const renderTranscript = () => {
    clear(transcript);
    for (const entry of session?.transcript ?? []) {
      transcript.append(el(`p.transcript-${entry.role}`, {}, el('strong', {}, entry.role), ` ${entry.text}`));
    }
  };

  const renderControls = () => {
    clear(controls);
    if (!session) return;
    if (session.status === 'awaiting_mode') {
      controls.append(
        el('p', {}, 'What kind of cases should we brainstorm?'),
        el(
          'button.mode-critique',
          { onclick: () => void step(api.chooseAssistantMode(session!.id, 'critique')) },
          'Cases that reveal flaws or ambiguities',
        ),
        el(
          'button.mode-illustrative',
          { onclick: () => void step(api.chooseAssistantMode(session!.id, 'illustrative')) },
          'Cases that illustrate the policy',
        ),
      );
      return;
    }
    const instructions = el('input.assistant-instructions', {
      placeholder: 'Optional instructions to refine…',
    }) as HTMLInputElement;
    controls.append(
      instructions,
      el(
        'button.assistant-generate',
        {
          onclick: async () => {
            try {
              const result = await api.generateSuggestion(session!.id, instructions.value.trim() || undefined);
              session = result.session;
              renderAll();
              renderSuggestion(result.suggestion);
            } catch (error) {
              status.textContent = `Assistant unavailable: ${error instanceof Error ? error.message : error}`;
            }
          },
        },
        session.status === 'suggested' ? 'Refine' : 'Generate',
      ),
      el('button.assistant-restart', { onclick: () => void step(api.restartAssistant(session!.id)) }, 'Restart'),
    );
  };

  const suggestionZone = el('div.assistant-suggestion', {});
  const renderSuggestion = (suggestion: SuggestionView) => {
    clear(suggestionZone);
    suggestionZone.append(
      el(
        'article.suggestion',
        {},
        el('h5', {}, suggestion.title),
        el('p', {}, suggestion.description),
        el('button.adopt-suggestion', { onclick: () => options.onAdopt?.(suggestion) }, 'Use this draft'),
      ),
    );
  };

  const renderAll = () => {
    renderTranscript();
    renderControls();
  };

  const step = async (next: Promise<AssistantSessionView>) => {
    try {
      session = await next;
      status.textContent = '';
      renderAll();
    } catch (error) {
      status.textContent = `Assistant unavailable: ${error instanceof Error ? error.message : error}`;
    }
  };

  void step(
    api.startAssistantSession({
      kind: options.kind,
      policy_id: options.policyId,
      selected_case_ids: options.selectedCaseIds,
    }),
  );

  return el(
    'aside.assistant-panel',
    {},
    el('h4', {}, 'Brainstorm with the assistant'),
    transcript,
    suggestionZone,
    controls,
    status,
  );
}
