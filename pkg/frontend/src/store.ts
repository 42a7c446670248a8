import type { ApiClient } from "./api.js";
import type { DiffDoc, EditDoc, FrameworkDoc, SessionView } from "./types.js";

export type Listener = (view: SessionView) => void;

/**
 * Client-side session state. Edits go straight to the server; undo is
 * implemented by opening a fresh session from the initial framework and
 * replaying a prefix of the edit history, so the server stays the single
 * source of truth for every strength value shown.
 */
export class SessionStore {
  private view: SessionView | null = null;
  private initial: FrameworkDoc | null = null;
  private listeners: Listener[] = [];
  lastDiff: DiffDoc | null = null;

  constructor(private readonly api: ApiClient) {}

  get current(): SessionView {
    if (!this.view) throw new Error("no session open");
    return this.view;
  }

  get isOpen(): boolean {
    return this.view !== null;
  }

  subscribe(listener: Listener): () => void {
    this.listeners.push(listener);
    return () => {
      this.listeners = this.listeners.filter((l) => l !== listener);
    };
  }

  /** Adopt a server view as the session start (e.g. fresh from /verify). */
  adopt(view: SessionView): void {
    this.view = view;
    this.initial = stripStrengths(view.qbaf);
    this.lastDiff = null;
    this.emit();
  }

  async openFromDocument(doc: FrameworkDoc, semantics?: string): Promise<void> {
    this.adopt(await this.api.openSession(doc, semantics));
  }

  async contest(edit: EditDoc): Promise<DiffDoc> {
    const view = await this.api.contest(this.current.session_id, edit);
    this.view = view;
    this.lastDiff = view.diff ?? view.history[view.history.length - 1] ?? null;
    this.emit();
    if (!this.lastDiff) throw new Error("server returned no diff");
    return this.lastDiff;
  }

  /**
   * Roll back to the state after the first `keep` edits. `keep` of 0
   * restores the original framework.
   */
  async undoTo(keep: number): Promise<void> {
    if (!this.initial) throw new Error("no session open");
    const replay = this.current.history
      .slice(0, keep)
      .map((diff) => diff.edit as unknown as EditDoc);
    let view = await this.api.openSession(this.initial, this.current.semantics);
    for (const edit of replay) {
      view = await this.api.contest(view.session_id, edit);
    }
    this.view = view;
    this.lastDiff = null;
    this.emit();
  }

  private emit(): void {
    if (!this.view) return;
    for (const listener of this.listeners) listener(this.view);
  }
}

function stripStrengths(doc: FrameworkDoc): FrameworkDoc {
  return {
    root: doc.root,
    arguments: doc.arguments.map((a) => ({ ...a })),
    relations: doc.relations.map((r) => ({ ...r })),
  };
}
