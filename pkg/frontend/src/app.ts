import { ApiClient, ApiError } from "./api.js";
import { layoutTree } from "./layout.js";
import { SessionStore } from "./store.js";
import type { DiffDoc, Polarity, SessionView } from "./types.js";
import { strengthsOf } from "./types.js";

const SVG_NS = "http://www.w3.org/2000/svg";
const CELL_W = 130;
const CELL_H = 110;
const MARGIN = 50;

const ROLE_COLOURS: Record<string, string> = {
  root: "#4a6fa5",
  pro: "#3a8f5f",
  con: "#b5484d",
};

export function mountApp(rootEl: HTMLElement, baseUrl: string): void {
  const api = new ApiClient(baseUrl);
  const store = new SessionStore(api);
  let selected: string | null = null;

  rootEl.innerHTML = `
    <header>
      <h1>claimarg explorer</h1>
      <form id="verify-form">
        <input id="claim-input" placeholder="Enter a claim to verify" size="48" required />
        <select id="semantics-select"><option>df-quad</option><option>qem</option></select>
        <label><input type="checkbox" id="mock-check" checked /> offline backend</label>
        <button type="submit">Verify</button>
      </form>
      <div id="banner" class="banner" hidden></div>
      <div id="ribbon" class="ribbon" hidden></div>
      <div id="error" class="error" hidden></div>
    </header>
    <main>
      <svg id="tree"></svg>
      <aside>
        <section id="inspector" hidden></section>
        <section id="history-panel" hidden>
          <h2>Edit history</h2>
          <ol id="history"></ol>
          <button id="undo-all" type="button">Undo everything</button>
        </section>
      </aside>
    </main>
  `;

  const $ = <T extends HTMLElement>(id: string) =>
    rootEl.querySelector<T>(`#${id}`)!;
  const banner = $("banner");
  const ribbon = $("ribbon");
  const errorBox = $("error");
  const svg = rootEl.querySelector<SVGSVGElement>("#tree")!;
  const inspector = $("inspector");
  const historyPanel = $("history-panel");
  const historyList = $<HTMLOListElement>("history");

  const showError = (err: unknown) => {
    errorBox.hidden = false;
    errorBox.textContent =
      err instanceof ApiError ? `server: ${err.message}` : String(err);
  };
  const clearError = () => {
    errorBox.hidden = true;
  };

  $("verify-form").addEventListener("submit", async (event) => {
    event.preventDefault();
    clearError();
    const claim = $<HTMLInputElement>("claim-input").value;
    const semantics = $<HTMLSelectElement>("semantics-select").value;
    const mock = $<HTMLInputElement>("mock-check").checked;
    try {
      const verdict = await api.verify({ claim, semantics, mock });
      if (!verdict.session_id) throw new Error("method returned no framework");
      store.adopt(await api.getSession(verdict.session_id));
    } catch (err) {
      showError(err);
    }
  });

  $("undo-all").addEventListener("click", () => {
    store.undoTo(0).catch(showError);
  });

  store.subscribe((view) => {
    selected = selected && view.polarity[selected] ? selected : null;
    renderBanner(view);
    renderRibbon(store.lastDiff);
    renderTree(view);
    renderInspector(view);
    renderHistory(view);
  });

  function renderBanner(view: SessionView): void {
    banner.hidden = false;
    banner.className = `banner ${view.label ? "verdict-true" : "verdict-false"}`;
    banner.textContent =
      `${view.label ? "TRUE" : "FALSE"} · root strength ` +
      `${view.root_strength.toFixed(4)} · ${view.semantics}`;
  }

  function renderRibbon(diff: DiffDoc | null): void {
    if (!diff) {
      ribbon.hidden = true;
      return;
    }
    const observed =
      diff.after_root_strength > diff.before_root_strength
        ? "increase"
        : diff.after_root_strength < diff.before_root_strength
          ? "decrease"
          : "no change";
    ribbon.hidden = false;
    ribbon.textContent =
      `root ${diff.before_root_strength.toFixed(4)} → ` +
      `${diff.after_root_strength.toFixed(4)} · predicted ` +
      `${diff.predicted_direction}, observed ${observed}` +
      (diff.flipped ? " · VERDICT FLIPPED" : "");
  }

  function renderTree(view: SessionView): void {
    const layout = layoutTree(view.qbaf);
    const strengths = strengthsOf(view);
    svg.innerHTML = "";
    svg.setAttribute("width", String(layout.width * CELL_W + 2 * MARGIN));
    svg.setAttribute("height", String(layout.height * CELL_H + 2 * MARGIN));
    const px = (x: number) => MARGIN + x * CELL_W + CELL_W / 2;
    const py = (y: number) => MARGIN + y * CELL_H + CELL_H / 2;

    for (const edge of layout.edges) {
      const line = document.createElementNS(SVG_NS, "line");
      line.setAttribute("x1", String(px(edge.from.x)));
      line.setAttribute("y1", String(py(edge.from.y)));
      line.setAttribute("x2", String(px(edge.to.x)));
      line.setAttribute("y2", String(py(edge.to.y)));
      line.setAttribute(
        "stroke",
        edge.polarity === "attack" ? ROLE_COLOURS.con! : ROLE_COLOURS.pro!,
      );
      line.setAttribute(
        "stroke-dasharray",
        edge.polarity === "attack" ? "6 3" : "none",
      );
      line.setAttribute("stroke-width", "2");
      svg.appendChild(line);
    }

    for (const node of layout.nodes) {
      const role = view.polarity[node.id] ?? "pro";
      const strength = strengths[node.id] ?? 0;
      const group = document.createElementNS(SVG_NS, "g");
      group.setAttribute("data-node", node.id);
      group.addEventListener("click", () => {
        selected = node.id;
        renderInspector(view);
      });

      const circle = document.createElementNS(SVG_NS, "circle");
      circle.setAttribute("cx", String(px(node.x)));
      circle.setAttribute("cy", String(py(node.y)));
      circle.setAttribute("r", String(14 + 14 * strength));
      circle.setAttribute("fill", ROLE_COLOURS[role] ?? "#888");
      circle.setAttribute("fill-opacity", "0.85");
      if (node.id === selected) {
        circle.setAttribute("stroke", "#222");
        circle.setAttribute("stroke-width", "3");
      }
      group.appendChild(circle);

      const label = document.createElementNS(SVG_NS, "text");
      label.setAttribute("x", String(px(node.x)));
      label.setAttribute("y", String(py(node.y) + 44));
      label.setAttribute("text-anchor", "middle");
      label.setAttribute("font-size", "11");
      label.textContent = `${node.id} σ=${strength.toFixed(3)}`;
      group.appendChild(label);
      svg.appendChild(group);
    }
  }

  function renderInspector(view: SessionView): void {
    if (!selected) {
      inspector.hidden = true;
      return;
    }
    const id = selected;
    const arg = view.qbaf.arguments.find((a) => a.id === id);
    if (!arg) {
      inspector.hidden = true;
      return;
    }
    const tau = arg.base_score ?? 0;
    const role = view.polarity[id];
    inspector.hidden = false;
    inspector.innerHTML = `
      <h2>${id} <small>(${role})</small></h2>
      <p>${arg.text || "(no text)"}</p>
      <label>base score <span id="tau-value">${Math.round(tau * 100)}</span>/100
        <input type="range" id="tau-slider" min="0" max="100" value="${Math.round(tau * 100)}" />
      </label>
      <form id="add-form">
        <input id="add-text" placeholder="New argument text" required />
        <select id="add-polarity">
          <option value="support">supports</option>
          <option value="attack">attacks</option>
        </select>
        <input id="add-score" type="number" min="0" max="100" value="50" size="4" />
        <button type="submit">Add under ${id}</button>
      </form>
      ${role === "root" ? "" : `<button id="remove-btn" type="button">Remove ${id} and its subtree</button>`}
    `;

    const slider = inspector.querySelector<HTMLInputElement>("#tau-slider")!;
    slider.addEventListener("change", () => {
      clearError();
      store
        .contest({
          kind: "set_base_score",
          target: id,
          new_score: Number(slider.value) / 100,
        })
        .catch(showError);
    });
    slider.addEventListener("input", () => {
      inspector.querySelector("#tau-value")!.textContent = slider.value;
    });

    inspector.querySelector("#add-form")!.addEventListener("submit", (event) => {
      event.preventDefault();
      clearError();
      const text = inspector.querySelector<HTMLInputElement>("#add-text")!.value;
      const polarity = inspector.querySelector<HTMLSelectElement>("#add-polarity")!
        .value as Polarity;
      const score =
        Number(inspector.querySelector<HTMLInputElement>("#add-score")!.value) / 100;
      store
        .contest({
          kind: "add_argument",
          target: freshId(view),
          new_argument: { text, polarity, base_score: score, parent: id },
        })
        .catch(showError);
    });

    inspector.querySelector("#remove-btn")?.addEventListener("click", () => {
      clearError();
      selected = null;
      store.contest({ kind: "remove_argument", target: id }).catch(showError);
    });
  }

  function renderHistory(view: SessionView): void {
    historyPanel.hidden = false;
    historyList.innerHTML = "";
    view.history.forEach((diff, index) => {
      const item = document.createElement("li");
      const edit = diff.edit as { kind?: string; target?: string };
      item.textContent =
        `${edit.kind ?? "edit"} ${edit.target ?? ""}: ` +
        `${diff.before_root_strength.toFixed(3)} → ${diff.after_root_strength.toFixed(3)}` +
        (diff.flipped ? " (flip) " : " ");
      const undo = document.createElement("button");
      undo.type = "button";
      undo.textContent = "undo to here";
      undo.addEventListener("click", () => {
        clearError();
        store.undoTo(index).catch(showError);
      });
      item.appendChild(undo);
      historyList.appendChild(item);
    });
  }
}

function freshId(view: SessionView): string {
  const existing = new Set(view.qbaf.arguments.map((a) => a.id));
  let n = existing.size;
  while (existing.has(`u${n}`)) n += 1;
  return `u${n}`;
}
