// Wire types mirroring the gateway's /v1 JSON schema. The client keeps no
// authoritative state of its own: everything here is rendered as received.

export type Phase = 'setup' | 'deliberation' | 'finalization' | 'closed';
export type CaseLabel = 'allowed' | 'disallowed' | 'ambiguous';
export type Stance = 'allow' | 'disallow' | 'unsure';
export type AlertState = 'none' | 'misaligned' | 'needs_clarification';
export type VoteDirection = 'up' | 'down';

export interface Tally {
  allow_count: number;
  disallow_count: number;
  unsure_count: number;
  total_voters: number;
  majority: Stance | 'none';
}

export interface CampaignView {
  id: string;
  title: string;
  description: string;
  phase: Phase;
  roster: string[];
  organizer_ids: string[];
  config: {
    case_features_enabled: boolean;
    alert_min_votes: number;
    min_actions_per_period: number;
    periods: { start: string; end: string }[];
    reasons_required_on_case_creation: boolean;
  };
  display_names: Record<string, string>;
  ballot?: string[];
}

export interface RevisionView {
  revision_id: string;
  policy_id: string;
  parent_revision_id: string | null;
  title: string;
  description: string;
  label_updates: Record<string, CaseLabel>;
  author: string;
  created_at: string;
  inspiration: string[];
  is_revert_of: string | null;
}

export interface LinkView {
  policy_id: string;
  case_id: string;
  label: CaseLabel;
  case_title: string;
  case_description: string;
  alert: AlertState;
  votes_hidden: boolean;
  tally?: Tally;
  last_labeled_by: string;
  last_labeled_at: string;
}

export interface PolicyView {
  id: string;
  title: string;
  description: string;
  head_revision_id: string;
  head_revision: RevisionView;
  links: LinkView[];
  history_length: number;
  frozen: boolean;
  finalization_eligible: boolean;
  followed_by_viewer: boolean;
  final_votes?: { up: number; down: number };
  public_reasons?: string[];
}

export interface ReasonView {
  id: string;
  side: 'allow' | 'disallow';
  text: string;
  likes: number;
  liked_by_viewer: boolean;
}

export interface CaseView {
  id: string;
  title: string;
  description: string;
  author: string;
  created_at: string;
  votes_hidden: boolean;
  tally?: Tally;
  viewer_stance: Stance | null;
  reasons: ReasonView[];
  linked_policies: { policy_id: string; label: CaseLabel }[];
}

export interface ThreadView {
  id: string;
  scope: { kind: 'policy' | 'case' | 'about'; target_id: string | null };
  title: string;
  status: 'open' | 'closed';
  author: string;
  created_at: string;
  comments: { id: string; author: string; text: string; created_at: string }[];
}

export interface NotificationView {
  id: string;
  kind: 'thread_reply' | 'policy_changed';
  subject_type: string;
  subject_id: string;
  detail: string;
  read: boolean;
  created_at: string;
}

export interface ActivityEntryView {
  id: string;
  action: string;
  subject_type: string;
  subject_id: string;
  created_at: string;
  counts_toward_minimum: boolean;
}

export interface ActivityResponse {
  entries: ActivityEntryView[];
  participation?: { actions: number; meets_minimum: boolean };
}

export interface BallotEntry {
  policy_id: string;
  title: string;
  description: string;
  votes: { up: number; down: number };
  public_reasons: string[];
  viewer_vote: VoteDirection | null;
}

export interface ConflictReport {
  policy_id: string;
  your_base: string;
  current_head: string;
  intervening_revisions: RevisionView[];
}

export interface ApiError {
  error: { code: string; message: string; details?: Record<string, unknown> };
  conflict?: ConflictReport;
}

export interface AssistantSessionView {
  id: string;
  kind: 'case_brainstorm' | 'policy_revision' | 'policy_creation';
  status: 'awaiting_mode' | 'awaiting_instructions' | 'suggested' | 'restarted';
  mode: 'critique' | 'illustrative' | null;
  transcript: { role: string; text: string }[];
  suggestions: SuggestionView[];
}

export interface SuggestionView {
  draft_kind: 'case' | 'policy_revision' | 'policy_creation';
  title: string;
  description: string;
  provenance: [number, number];
}

export const INSPIRATION_OPTIONS: { value: string; text: string }[] = [
  { value: 'specific_case_own', text: 'To address a specific case/scenario that I thought of' },
  { value: 'specific_case_other', text: 'To address a specific case/scenario that someone else shared' },
  { value: 'general_issue_own', text: 'To address a general issue that I thought of' },
  { value: 'general_issue_other', text: 'To address a general issue that someone else shared' },
  { value: 'other', text: 'Other' },
];
