/**
 * DOM wiring for the selection UI.
 *
 * Every mutation round-trips through the service and re-renders from the
 * server's state; the only client-side state is which cluster the detail
 * pane is showing.
 */

import { ApiError, Client } from "./api";
import {
  CLUSTER_COLUMNS,
  MODE_LABELS,
  authorsLine,
  clusterRow,
  distanceCell,
  firstUndecided,
  hashAbbrev,
  paperLabel,
  previewText,
  progressText,
  summaryText,
} from "./render";
import type { ClustersResponse, MetaResponse, Mode, Status } from "./types";

const client = new Client();

let corpusHash = "";
let selectedClusterId: number | null = null;

function byId<T extends HTMLElement>(id: string): T {
  const element = document.getElementById(id);
  if (element === null) throw new Error(`missing element #${id}`);
  return element as T;
}

function showError(error: unknown): void {
  const banner = byId<HTMLDivElement>("banner");
  if (error instanceof ApiError && error.isStaleCorpus) {
    banner.textContent =
      "The corpus changed on the server. Reload the page to continue.";
  } else if (error instanceof ApiError) {
    banner.textContent = `Request failed: ${error.message}`;
  } else {
    banner.textContent = `Request failed: ${String(error)}`;
  }
  banner.hidden = false;
}

function clearError(): void {
  byId<HTMLDivElement>("banner").hidden = true;
}

async function mutate(action: () => Promise<unknown>): Promise<void> {
  try {
    clearError();
    await action();
    await refresh();
  } catch (error) {
    showError(error);
  }
}

function renderMeta(meta: MetaResponse): void {
  byId("query-name").textContent = meta.query_name;
  byId("corpus-info").textContent =
    `${meta.n_records} records, ${meta.n_clusters} groups, ` +
    `corpus ${hashAbbrev(meta.corpus_hash)}`;
  const select = byId<HTMLSelectElement>("mode");
  select.replaceChildren(
    ...meta.modes.map((mode) => {
      const option = document.createElement("option");
      option.value = mode;
      option.textContent = MODE_LABELS[mode];
      return option;
    }),
  );
  select.value = meta.presentation_mode;
  byId<HTMLInputElement>("cutoff").value = String(meta.cutoff);
}

function decisionButton(
  label: string,
  verdict: Status,
  clusterId: number,
): HTMLButtonElement {
  const button = document.createElement("button");
  button.textContent = label;
  button.addEventListener("click", (event) => {
    event.stopPropagation();
    void mutate(() => client.decide(clusterId, verdict, corpusHash));
  });
  return button;
}

function renderClusterTable(body: ClustersResponse): void {
  const table = byId<HTMLTableElement>("clusters");
  const head = document.createElement("tr");
  for (const column of [...CLUSTER_COLUMNS, "actions"]) {
    const cell = document.createElement("th");
    cell.textContent = column;
    head.appendChild(cell);
  }
  const rows = [head];
  for (const view of body.clusters) {
    const row = document.createElement("tr");
    row.classList.add(view.status);
    if (view.id === selectedClusterId) row.classList.add("selected");
    for (const cellText of clusterRow(view)) {
      const cell = document.createElement("td");
      cell.textContent = cellText;
      row.appendChild(cell);
    }
    const actions = document.createElement("td");
    if (view.status === "undecided") {
      actions.append(
        decisionButton("accept", "accepted", view.id),
        decisionButton("reject", "rejected", view.id),
      );
    } else {
      actions.append(decisionButton("undo", "undecided", view.id));
    }
    row.appendChild(actions);
    row.addEventListener("click", () => void showDetail(view.id));
    rows.push(row);
  }
  table.replaceChildren(...rows);
  byId("progress").textContent = progressText(body.clusters);

  const next = firstUndecided(body.clusters);
  byId("next-hint").textContent =
    next === null
      ? "All groups decided."
      : `Next undecided: group ${next.id} (distance ${distanceCell(next)})`;
}

async function showDetail(clusterId: number): Promise<void> {
  selectedClusterId = clusterId;
  const body = await client.cluster(clusterId);
  const cluster = body.cluster;
  byId("detail-title").textContent =
    `Group ${cluster.id}: ${cluster.paper_count} papers, ` +
    `${cluster.citations} citations, ${cluster.period}`;
  const list = byId<HTMLUListElement>("detail-members");
  list.replaceChildren(
    ...cluster.members.map((paper) => {
      const item = document.createElement("li");
      const title = document.createElement("strong");
      title.textContent = paperLabel(paper);
      const meta = document.createElement("div");
      meta.textContent = `${authorsLine(paper)} · ${paper.source}`;
      const address = document.createElement("div");
      address.className = "address";
      address.textContent = paper.addresses.join(" | ");
      item.append(title, meta, address);
      if (paper.id === cluster.representative_id) {
        item.classList.add("representative");
      }
      return item;
    }),
  );
  await refreshClusterTable();
}

async function refreshPreview(): Promise<void> {
  const label = byId("preview");
  try {
    const cutoff = Number(byId<HTMLInputElement>("cutoff").value);
    const body = await client.previewAutoReject(cutoff);
    label.textContent = previewText(body.count, cutoff);
  } catch (error) {
    if (error instanceof ApiError && error.status === 400) {
      label.textContent = "Accept a group to enable the cutoff.";
    } else {
      throw error;
    }
  }
}

async function refreshClusterTable(): Promise<void> {
  renderClusterTable(await client.clusters());
}

async function refresh(): Promise<void> {
  const [clusters, selection] = await Promise.all([
    client.clusters(),
    client.selection(),
  ]);
  corpusHash = clusters.corpus_hash;
  renderClusterTable(clusters);
  byId("summary").textContent = summaryText(selection.summary);
  byId<HTMLSelectElement>("mode").value = clusters.presentation_mode;
  await refreshPreview();
}

function wireControls(): void {
  byId<HTMLSelectElement>("mode").addEventListener("change", (event) => {
    const mode = (event.target as HTMLSelectElement).value as Mode;
    void mutate(() => client.setMode(mode, corpusHash));
  });
  byId<HTMLInputElement>("cutoff").addEventListener("change", (event) => {
    const cutoff = Number((event.target as HTMLInputElement).value);
    void mutate(() => client.setCutoff(cutoff, corpusHash));
  });
  byId<HTMLButtonElement>("auto-reject").addEventListener("click", () => {
    void mutate(() => client.autoReject(corpusHash));
  });
  byId<HTMLButtonElement>("accept-rest").addEventListener("click", () => {
    void mutate(() => client.decideAll("accepted", corpusHash));
  });
  byId<HTMLButtonElement>("reject-rest").addEventListener("click", () => {
    void mutate(() => client.decideAll("rejected", corpusHash));
  });
  byId<HTMLButtonElement>("export").addEventListener("click", () => {
    void (async () => {
      try {
        clearError();
        const text = await client.exportText();
        const blob = new Blob([text], { type: "text/plain" });
        const link = document.createElement("a");
        link.href = URL.createObjectURL(blob);
        link.download = "selection-export.txt";
        link.click();
        URL.revokeObjectURL(link.href);
      } catch (error) {
        showError(error);
      }
    })();
  });
}

async function init(): Promise<void> {
  try {
    const meta = await client.meta();
    corpusHash = meta.corpus_hash;
    renderMeta(meta);
    wireControls();
    await refresh();
    const clusters = await client.clusters();
    const next = firstUndecided(clusters.clusters);
    if (next !== null) await showDetail(next.id);
  } catch (error) {
    showError(error);
  }
}

void init();
