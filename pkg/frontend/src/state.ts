// Single state container; every view-state change flows through update(),
// which keeps invariants and notifies subscribers in order.

import type { TagSelection } from "./types.js";

export const VIEW_NAMES = [
  "timeline",
  "severity",
  "case_detail",
  "perpetrator_status",
  "platforms",
  "organizations",
  "deeper_analysis",
  "audit",
] as const;

export type ViewName = (typeof VIEW_NAMES)[number];

export interface YearRange {
  from: number;
  to: number;
}

export interface ViewState {
  activeView: ViewName;
  yearRange: YearRange | null;
  selectedTags: TagSelection[];
  selectedCaseId: string | null;
  selectedGroupId: string | null;
}

export function initialState(): ViewState {
  return {
    activeView: "timeline",
    yearRange: null,
    selectedTags: [],
    selectedCaseId: null,
    selectedGroupId: null,
  };
}

type Listener = (state: ViewState) => void;

export class StateContainer {
  private state: ViewState;
  private listeners: Listener[] = [];

  constructor(state: ViewState = initialState()) {
    this.state = state;
  }

  get(): ViewState {
    return this.state;
  }

  update(partial: Partial<ViewState>): void {
    const next = { ...this.state, ...partial };
    if (next.yearRange && next.yearRange.from > next.yearRange.to) {
      next.yearRange = { from: next.yearRange.to, to: next.yearRange.from };
    }
    this.state = next;
    for (const listener of [...this.listeners]) listener(next);
  }

  subscribe(listener: Listener): () => void {
    this.listeners.push(listener);
    return () => {
      this.listeners = this.listeners.filter((l) => l !== listener);
    };
  }
}

export function toggleTag(tags: TagSelection[], selection: TagSelection): TagSelection[] {
  const exists = tags.some(
    (t) => t.category === selection.category && t.tag === selection.tag,
  );
  if (exists) {
    return tags.filter(
      (t) => !(t.category === selection.category && t.tag === selection.tag),
    );
  }
  return [...tags, selection];
}
