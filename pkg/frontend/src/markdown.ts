/** Markdown renderer that can never execute model-supplied HTML.
 *
 * Every piece of source text enters the DOM through text nodes only; markup
 * in the input (script tags, event handlers, anything) stays literal text.
 * Supports the subset reviews use: ATX headings, bullet lists, paragraphs,
 * **bold** and `inline code`.
 */

const HEADING = /^(#{1,6})\s+(.*)$/;
const BULLET = /^\s*[-*+]\s+(.*)$/;

function renderInline(target: HTMLElement, text: string): void {
  // Split on **bold** and `code` spans; everything lands in text nodes.
  const pattern = /(\*\*[^*]+\*\*|`[^`]+`)/g;
  let last = 0;
  for (const match of text.matchAll(pattern)) {
    const index = match.index ?? 0;
    if (index > last) {
      target.appendChild(document.createTextNode(text.slice(last, index)));
    }
    const token = match[0];
    if (token.startsWith("**")) {
      const strong = document.createElement("strong");
      strong.textContent = token.slice(2, -2);
      target.appendChild(strong);
    } else {
      const code = document.createElement("code");
      code.textContent = token.slice(1, -1);
      target.appendChild(code);
    }
    last = index + token.length;
  }
  if (last < text.length) {
    target.appendChild(document.createTextNode(text.slice(last)));
  }
}

export function renderMarkdown(source: string): DocumentFragment {
  const fragment = document.createDocumentFragment();
  let list: HTMLUListElement | null = null;
  let paragraph: string[] = [];

  const flushParagraph = () => {
    if (paragraph.length) {
      const p = document.createElement("p");
      renderInline(p, paragraph.join(" "));
      fragment.appendChild(p);
      paragraph = [];
    }
  };
  const flushList = () => {
    list = null;
  };

  for (const rawLine of source.split(/\r?\n/)) {
    const line = rawLine.trimEnd();
    if (!line.trim()) {
      flushParagraph();
      flushList();
      continue;
    }
    const heading = HEADING.exec(line);
    if (heading) {
      flushParagraph();
      flushList();
      const element = document.createElement(`h${heading[1].length}`);
      renderInline(element, heading[2]);
      fragment.appendChild(element);
      continue;
    }
    const bullet = BULLET.exec(line);
    if (bullet) {
      flushParagraph();
      if (!list) {
        list = document.createElement("ul");
        fragment.appendChild(list);
      }
      const item = document.createElement("li");
      renderInline(item, bullet[1]);
      list.appendChild(item);
      continue;
    }
    flushList();
    paragraph.push(line.trim());
  }
  flushParagraph();
  return fragment;
}
