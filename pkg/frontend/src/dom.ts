/** Small DOM construction helpers (no framework). */

export function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  attrs: Record<string, string> = {},
  children: (Node | string)[] = [],
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  for (const [key, value] of Object.entries(attrs)) {
    if (key === 'class') node.className = value;
    else node.setAttribute(key, value);
  }
  for (const child of children) {
    node.append(child);
  }
  return node;
}

export function clear(node: HTMLElement): void {
  while (node.firstChild) node.removeChild(node.firstChild);
}

export function option(value: string, label?: string, selected = false): HTMLOptionElement {
  const node = el('option', { value }, [label ?? value]);
  node.selected = selected;
  return node;
}

/**
 * Inline failure panel with a retry hook; pages render this instead of
 * ever going blank on API errors.
 */
export function errorPanel(message: string, retry: () => void): HTMLElement {
  const button = el('button', { class: 'retry' }, ['Retry']);
  button.addEventListener('click', retry);
  return el('div', { class: 'error-panel', role: 'alert' }, [
    el('span', {}, [`Request failed: ${message}`]),
    button,
  ]);
}

export function triggerDownload(blob: Blob, filename: string): void {
  const url = URL.createObjectURL(blob);
  const anchor = el('a', { href: url, download: filename });
  document.body.append(anchor);
  anchor.click();
  anchor.remove();
  URL.revokeObjectURL(url);
}
