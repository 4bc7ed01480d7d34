/** Minimal view tree: plain objects renderable to HTML text (tests) or real
 * DOM nodes (browser). Keeps the view models framework-free. */

export interface VNode {
  tag: string;
  attrs: Record<string, string>;
  children: (VNode | string)[];
  onClick?: () => void;
}

export function h(
  tag: string,
  attrs: Record<string, string> = {},
  children: (VNode | string)[] = [],
  onClick?: () => void,
): VNode {
  return { tag, attrs, children, onClick };
}

const VOID_TAGS = new Set(['input', 'img', 'br', 'hr']);

function escapeHtml(text: string): string {
  return text
    .replace(/&/g, '&amp;')
    .replace(/</g, '&lt;')
    .replace(/>/g, '&gt;')
    .replace(/"/g, '&quot;');
}

export function renderToString(node: VNode | string): string {
  if (typeof node === 'string') {
    return escapeHtml(node);
  }
  const attrs = Object.entries(node.attrs)
    .map(([k, v]) => ` ${k}="${escapeHtml(v)}"`)
    .join('');
  if (VOID_TAGS.has(node.tag)) {
    return `<${node.tag}${attrs}>`;
  }
  const children = node.children.map(renderToString).join('');
  return `<${node.tag}${attrs}>${children}</${node.tag}>`;
}

/** Browser-side mount; unused in tests. */
export function mount(node: VNode | string, parent: HTMLElement): void {
  if (typeof node === 'string') {
    parent.appendChild(document.createTextNode(node));
    return;
  }
  const el = document.createElement(node.tag);
  for (const [key, value] of Object.entries(node.attrs)) {
    el.setAttribute(key, value);
  }
  if (node.onClick) {
    el.addEventListener('click', node.onClick);
  }
  for (const child of node.children) {
    mount(child, el);
  }
  parent.appendChild(el);
}

export function findAll(node: VNode | string, predicate: (n: VNode) => boolean): VNode[] {
  if (typeof node === 'string') {
    return [];
  }
  const here = predicate(node) ? [node] : [];
  return here.concat(...node.children.map((c) => findAll(c, predicate)));
}
