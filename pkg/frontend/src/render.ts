/**
 * Pure view-model helpers: server JSON in, display strings out.
 *
 * Nothing here computes distances, ordering or any other selection logic;
 * the server decides those and this module only formats what it said.
 */

import type {
  ClusterView,
  Mode,
  PaperView,
  SelectionSummary,
  Status,
} from "./types";

export const MODE_LABELS: Record<Mode, string> = {
  by_citations: "citations",
  by_size: "group size",
  by_distance_to_selected: "distance to selected",
};

export const STATUS_SYMBOLS: Record<Status, string> = {
  accepted: "+",
  rejected: "-",
  undecided: "·",
};

/** Server-formatted distance with the fixed-width padding stripped. */
export function distanceCell(view: ClusterView): string {
  return view.distance_display.trim();
}

export function statusCell(status: Status): string {
  return `${STATUS_SYMBOLS[status]} ${status}`;
}

/** Table cells for one cluster row, in column order. */
export function clusterRow(view: ClusterView): string[] {
  return [
    String(view.id),
    String(view.paper_count),
    String(view.citations),
    view.period,
    distanceCell(view),
    statusCell(view.status),
  ];
}

export const CLUSTER_COLUMNS = [
  "group",
  "papers",
  "citations",
  "period",
  "distance",
  "status",
];

/**
 * First undecided cluster in the order the server sent. The argument is
 * already presentation-ordered, so index order is review order.
 */
export function firstUndecided(clusters: ClusterView[]): ClusterView | null {
  for (const view of clusters) {
    if (view.status === "undecided") return view;
  }
  return null;
}

export function statusCounts(clusters: ClusterView[]): Record<Status, number> {
  const counts: Record<Status, number> = {
    accepted: 0,
    rejected: 0,
    undecided: 0,
  };
  for (const view of clusters) counts[view.status] += 1;
  return counts;
}

export function authorsLine(paper: PaperView): string {
  return paper.authors.join("; ");
}

/** One-line paper summary: title, then source (already year-annotated). */
export function paperLabel(paper: PaperView): string {
  const cites = paper.citations === 1 ? "1 citation" : `${paper.citations} citations`;
  return `${paper.title} (${cites})`;
}

export function periodLabel(summary: SelectionSummary): string {
  if (summary.year_min === null || summary.year_max === null) {
    return "????-????";
  }
  return `${summary.year_min}-${summary.year_max}`;
}

export function summaryText(summary: SelectionSummary | null): string {
  if (summary === null) return "Nothing accepted yet";
  const perPaper = summary.citations_per_paper.toFixed(2);
  return (
    `${summary.papers} papers, ${summary.citations} citations ` +
    `(${perPaper}/paper), period ${periodLabel(summary)}, ` +
    `h-index ${summary.h_index}`
  );
}

export function previewText(count: number, cutoff: number): string {
  const groups = count === 1 ? "1 group" : `${count} groups`;
  return `${groups} beyond cutoff ${cutoff.toFixed(1)}`;
}

export function hashAbbrev(corpusHash: string): string {
  return corpusHash.slice(0, 12);
}

/** Progress line for the header, e.g. "2 accepted, 1 rejected, 1 open". */
export function progressText(clusters: ClusterView[]): string {
  const counts = statusCounts(clusters);
  return (
    `${counts.accepted} accepted, ${counts.rejected} rejected, ` +
    `${counts.undecided} open`
  );
}
