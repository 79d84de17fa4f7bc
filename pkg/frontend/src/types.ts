// Shapes mirror the /api/v1 report schema. The viewer never derives
// signal values of its own: everything rendered exists verbatim here.

export type FacetName = "context" | "trustworthiness" | "thoroughness";

export type BadgeLevel = "none" | "yellow" | "red";

export interface Badge {
  level: BadgeLevel;
  open_issues: number;
}

export type IssueStatus = "open" | "dismissed" | "resolved";

export interface Issue {
  id: string;
  facet: FacetName;
  kind: string;
  status: IssueStatus;
  group: string;
  message: string;
  domain?: string;
  snippet_id?: string;
  option_id?: string;
  criterion_id?: string;
  age_days?: number;
}

export interface SignalGroup {
  name: string;
  state: string; // ok | no_data | unavailable | not_provided | unverified
  data: Record<string, unknown>;
}

export interface FacetPanel {
  badge: Badge;
  groups: SignalGroup[];
  issues: Issue[];
}

export interface NamedRef {
  id: string;
  name: string;
}

export interface TableCell {
  option_id: string;
  criterion_id: string;
  snippet_ids: string[];
}

export interface SnippetCard {
  id: string;
  excerpt: string;
  rating: string | null;
  source_url: string;
}

export interface TableView {
  options: NamedRef[];
  criteria: NamedRef[];
  cells: TableCell[];
  snippets: SnippetCard[];
}

export interface Detection {
  name: string;
  category: string;
  version: string | null;
  source: string;
}

export interface Popularity {
  kind: "upvotes" | "claps";
  count: number;
  accepted: boolean | null;
}

export interface SnippetAnnotation {
  domain: string | null;
  domain_trusted: boolean;
  popularity: Popularity | null;
  last_updated: string | null;
  age_days: number | null;
  age_unknown: boolean;
  detections: Detection[];
  contains_code: boolean;
  code_example_count: number;
  has_surroundings: boolean;
  timeline_shade: number | null;
}

export interface TimelinePage {
  url: string;
  entered_at: string;
  shade_index: number;
  snippet_ids: string[];
}

export interface TimelineEntry {
  query: string | null;
  at: string;
  shade_index: number;
  snippet_ids: string[];
  pages: TimelinePage[];
}

export interface Timeline {
  entries: TimelineEntry[];
  node_count: number;
}

export interface Report {
  schema_version: number;
  table_id: string;
  title: string;
  now: string;
  table: TableView;
  facets: Record<FacetName, FacetPanel>;
  snippet_annotations: Record<string, SnippetAnnotation>;
}

export interface Snapshot {
  snippet_id: string;
  surroundings: string;
  highlight: { start: number; end: number };
  includes_question_block: boolean;
}

export interface Adjustment {
  action: "add_trusted" | "remove_trusted" | "dismiss" | "set_threshold";
  table_id: string;
  now?: string;
  domain?: string;
  issue_id?: string;
  field?: string;
  value?: number;
}

export const FACETS: FacetName[] = ["context", "trustworthiness", "thoroughness"];

export const GROUP_TITLES: Record<FacetName, string[]> = {
  context: ["Search Queries", "Languages, Frameworks, and Platforms",
            "Snippet Surroundings"],
  trustworthiness: ["Domains", "Evidence Snippets", "Task Author"],
  thoroughness: ["Research Process", "Commonly Searched for Alternatives",
                 "Code Examples"],
};
