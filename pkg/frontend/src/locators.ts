/** Locator chips: canonical text plus click-to-scroll page targeting. */

import type { LocatorDict } from "./api";

export function formatLocator(locator: LocatorDict): string {
  const path = locator.section_path?.join(".");
  switch (locator.kind) {
    case "section":
      return `Section ${path}`;
    case "section_lines": {
      const [a, b] = locator.line_range ?? [0, 0];
      return `Section ${path}. L${a}-L${b}`;
    }
    case "page":
      return `Page ${locator.page}`;
    case "page_figure":
      return `Page ${locator.page}. Figure ${locator.figure}`;
    case "figure":
      return `Figure ${locator.figure}`;
    case "table":
      return `Table ${locator.table}`;
    default:
      return locator.kind;
  }
}

/** Page a locator points at, when it names one directly. */
export function locatorPage(locator: LocatorDict): number | null {
  return locator.page ?? null;
}

export function renderLocatorChip(
  locator: LocatorDict,
  onJump: (page: number) => void,
): HTMLElement {
  const chip = document.createElement("span");
  chip.className = "locator-chip";
  chip.textContent = formatLocator(locator);
  const page = locatorPage(locator);
  if (page !== null) {
    chip.classList.add("locator-chip-linked");
    chip.title = `Scroll to page ${page}`;
    chip.addEventListener("click", () => onJump(page));
  }
  return chip;
}
