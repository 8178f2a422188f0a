// Inline text highlighting from server-provided spans. Rendering never
// alters the text content: the concatenation of all emitted nodes equals
// the input text exactly, and overlapping spans merge into one mark.

export interface SpanRange {
  start: number;
  end: number;
}

export function mergeSpans(spans: SpanRange[]): SpanRange[] {
  const sorted = spans
    .filter((s) => s.end > s.start)
    .map((s) => ({ start: s.start, end: s.end }))
    .sort((a, b) => a.start - b.start || a.end - b.end);
  const merged: SpanRange[] = [];
  for (const span of sorted) {
    const last = merged[merged.length - 1];
    // strict overlap only; touching spans stay separate marks
    if (last && span.start < last.end) {
      last.end = Math.max(last.end, span.end);
    } else {
      merged.push(span);
    }
  }
  return merged;
}

export function renderHighlighted(
  text: string,
  spans: SpanRange[],
  doc: Document = document,
): DocumentFragment {
  const fragment = doc.createDocumentFragment();
  let cursor = 0;
  for (const span of mergeSpans(spans)) {
    const start = Math.max(0, Math.min(span.start, text.length));
    const end = Math.max(start, Math.min(span.end, text.length));
    if (start > cursor) {
      fragment.appendChild(doc.createTextNode(text.slice(cursor, start)));
    }
    const mark = doc.createElement("mark");
    mark.textContent = text.slice(start, end);
    fragment.appendChild(mark);
    cursor = end;
  }
  if (cursor < text.length) {
    fragment.appendChild(doc.createTextNode(text.slice(cursor)));
  }
  return fragment;
}
