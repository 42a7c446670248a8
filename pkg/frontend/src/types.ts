// Wire types mirroring the service's JSON documents.

export type Polarity = "attack" | "support";
export type NodeRole = "root" | "pro" | "con";
export type Direction = "nondecrease" | "nonincrease" | "none";

export interface ArgumentDoc {
  id: string;
  text: string;
  base_score: number | null;
}

export interface RelationDoc {
  source: string;
  target: string;
  polarity: Polarity;
}

export interface FrameworkDoc {
  root: string;
  arguments: ArgumentDoc[];
  relations: RelationDoc[];
  strengths?: Record<string, Record<string, number>>;
}

export interface NewArgumentDoc {
  text: string;
  polarity: Polarity;
  base_score: number;
  parent: string;
}

export type EditDoc =
  | { kind: "set_base_score"; target: string; new_score: number }
  | { kind: "add_argument"; target: string; new_argument: NewArgumentDoc }
  | { kind: "remove_argument"; target: string };

export interface DiffDoc {
  edit: Record<string, unknown>;
  before_root_strength: number;
  after_root_strength: number;
  before_label: boolean;
  after_label: boolean;
  predicted_direction: Direction;
  strength_deltas: Record<string, number>;
  flipped: boolean;
}

export interface SessionView {
  session_id: string;
  semantics: string;
  qbaf: FrameworkDoc;
  root_strength: number;
  label: boolean;
  polarity: Record<string, NodeRole>;
  history: DiffDoc[];
  diff?: DiffDoc;
}

export interface VerifyRequest {
  claim: string;
  context?: string;
  method?: string;
  semantics?: string;
  depth?: number;
  mock?: boolean;
  seed?: number;
}

export interface VerifyResponse {
  method: string;
  label: boolean;
  root_strength: number;
  transcript: Array<Record<string, string>>;
  session_id?: string;
  qbaf?: FrameworkDoc;
  polarity?: Record<string, NodeRole>;
}

/** Strengths for the session's semantics, keyed by argument id. */
export function strengthsOf(view: SessionView): Record<string, number> {
  return view.qbaf.strengths?.[view.semantics] ?? {};
}
