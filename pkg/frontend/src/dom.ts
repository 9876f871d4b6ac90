/** Tiny DOM construction helpers. User-controlled strings only ever land
 * in text nodes, never in markup or attribute values. */

type Child = Node | string | null | undefined;

export function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  options: {
    className?: string;
    text?: string;
    attrs?: Record<string, string>;
    onClick?: (event: MouseEvent) => void;
  } = {},
  ...children: Child[]
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (options.className) {
    node.className = options.className;
  }
  if (options.text !== undefined) {
    node.textContent = options.text;
  }
  for (const [name, value] of Object.entries(options.attrs ?? {})) {
    node.setAttribute(name, value);
  }
  if (options.onClick) {
    node.addEventListener("click", options.onClick as EventListener);
  }
  for (const child of children) {
    if (child !== null && child !== undefined) {
      node.append(child);
    }
  }
  return node;
}

export function clear(node: HTMLElement): void {
  while (node.firstChild) {
    node.removeChild(node.firstChild);
  }
}

export function labeledInput(
  label: string,
  attrs: Record<string, string>,
): { wrapper: HTMLElement; input: HTMLInputElement } {
  const input = el("input", { attrs });
  const wrapper = el("label", { className: "field" }, el("span", { text: label }), input);
  return { wrapper, input };
}
