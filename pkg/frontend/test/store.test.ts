import { beforeEach, describe, expect, it } from "vitest";

import { ApiClient } from "../src/api";
import { SessionStore } from "../src/store";
import { strengthsOf, type SessionView } from "../src/types";
import { FakeService, flipDocument } from "./fake-service";

describe("SessionStore", () => {
  let service: FakeService;
  let store: SessionStore;

  beforeEach(() => {
    service = new FakeService();
    store = new SessionStore(new ApiClient("http://host", service.fetch));
  });

  it("opens a session and exposes the server's evaluation", async () => {
    await store.openFromDocument(flipDocument());
    const view = store.current;
    expect(view.root_strength).toBeCloseTo(0.35, 10);
    expect(view.label).toBe(false);
    expect(view.polarity).toEqual({ r: "root", sup: "pro", att: "con" });
    expect(strengthsOf(view).att).toBeCloseTo(0.9, 10);
  });

  it("lowering the attacker's slider value flips the verdict", async () => {
    await store.openFromDocument(flipDocument());
    const diff = await store.contest({
      kind: "set_base_score",
      target: "att",
      new_score: 0.5,
    });
    expect(diff.flipped).toBe(true);
    expect(diff.predicted_direction).toBe("nondecrease");
    expect(store.current.label).toBe(true);
    // The ribbon value and the banner value come from the same response.
    expect(diff.after_root_strength).toBe(store.current.root_strength);
    expect(store.current.root_strength).toBeCloseTo(0.55, 10);
  });

  it("notifies subscribers on every state change", async () => {
    const seen: SessionView[] = [];
    store.subscribe((view) => seen.push(view));
    await store.openFromDocument(flipDocument());
    await store.contest({ kind: "set_base_score", target: "sup", new_score: 0.8 });
    expect(seen).toHaveLength(2);
    expect(seen[1]!.history).toHaveLength(1);
  });

  it("undo to the start restores the original verdict in a fresh session", async () => {
    await store.openFromDocument(flipDocument());
    const firstId = store.current.session_id;
    await store.contest({ kind: "set_base_score", target: "att", new_score: 0.5 });
    expect(store.current.label).toBe(true);

    await store.undoTo(0);
    expect(store.current.session_id).not.toBe(firstId);
    expect(store.current.root_strength).toBeCloseTo(0.35, 10);
    expect(store.current.label).toBe(false);
    expect(store.current.history).toHaveLength(0);
    expect(store.lastDiff).toBeNull();
  });

  it("undo to a midpoint replays exactly that prefix of edits", async () => {
    await store.openFromDocument(flipDocument());
    await store.contest({ kind: "set_base_score", target: "att", new_score: 0.5 });
    await store.contest({ kind: "set_base_score", target: "sup", new_score: 0.2 });
    const afterBoth = store.current.root_strength;

    await store.undoTo(1);
    expect(store.current.history).toHaveLength(1);
    expect(store.current.root_strength).toBeCloseTo(0.55, 10);
    expect(store.current.root_strength).not.toBeCloseTo(afterBoth, 10);
  });

  it("adding and removing an argument round-trips", async () => {
    await store.openFromDocument(flipDocument());
    const added = await store.contest({
      kind: "add_argument",
      target: "rebut",
      new_argument: {
        text: "counters the attacker",
        polarity: "attack",
        base_score: 0.8,
        parent: "att",
      },
    });
    expect(added.predicted_direction).toBe("nondecrease");
    expect(store.current.qbaf.arguments).toHaveLength(4);

    await store.contest({ kind: "remove_argument", target: "rebut" });
    expect(store.current.qbaf.arguments).toHaveLength(3);
    expect(store.current.root_strength).toBeCloseTo(0.35, 10);
  });

  it("keeps state unchanged when the server rejects an edit", async () => {
    await store.openFromDocument(flipDocument());
    await expect(
      store.contest({ kind: "set_base_score", target: "att", new_score: 2 }),
    ).rejects.toMatchObject({ status: 422 });
    expect(store.current.root_strength).toBeCloseTo(0.35, 10);
    expect(store.current.history).toHaveLength(0);
  });
});
