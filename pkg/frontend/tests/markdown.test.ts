import { describe, expect, it } from "vitest";

import { renderMarkdown } from "../src/markdown";

function renderToElement(source: string): HTMLElement {
  const host = document.createElement("div");
  host.appendChild(renderMarkdown(source));
  return host;
}

describe("renderMarkdown", () => {
  it("renders headings, paragraphs and bullets", () => {
    const host = renderToElement("## Summary\nSolid work overall.\n\n- first point\n- second point\n");
    expect(host.querySelector("h2")?.textContent).toBe("Summary");
    expect(host.querySelector("p")?.textContent).toBe("Solid work overall.");
    const items = [...host.querySelectorAll("li")].map((li) => li.textContent);
    expect(items).toEqual(["first point", "second point"]);
  });

  it("renders bold and inline code", () => {
    const host = renderToElement("This is **important** and `exact`.");
    expect(host.querySelector("strong")?.textContent).toBe("important");
    expect(host.querySelector("code")?.textContent).toBe("exact");
  });

  it("never executes or materializes html from model output", () => {
    const host = renderToElement(
      '## Title\n<script>window.pwned = true</script>\n<img src=x onerror="window.pwned2 = true">\n',
    );
    expect(host.querySelector("script")).toBeNull();
    expect(host.querySelector("img")).toBeNull();
    expect((window as unknown as Record<string, unknown>).pwned).toBeUndefined();
    expect((window as unknown as Record<string, unknown>).pwned2).toBeUndefined();
    // The markup stays visible as literal text.
    expect(host.textContent).toContain("<script>");
  });

  it("keeps event-handler-looking text inert inside emphasis", () => {
    const host = renderToElement('**<a href="javascript:alert(1)">x</a>**');
    expect(host.querySelector("a")).toBeNull();
    expect(host.querySelector("strong")?.textContent).toContain("javascript:");
  });

  it("groups consecutive paragraph lines", () => {
    const host = renderToElement("line one\nline two\n\nline three");
    const paragraphs = [...host.querySelectorAll("p")].map((p) => p.textContent);
    expect(paragraphs).toEqual(["line one line two", "line three"]);
  });
});
