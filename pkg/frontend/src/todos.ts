/** Interactive to-do checklist synced to the service.
 *
 * A tick PATCHes the server and reconciles with the acknowledged item; on
 * failure the checkbox reverts and the error surfaces. Progress is always
 * recomputed from server-acknowledged flags, never from the optimistic UI.
 * At most one PATCH is in flight per todo index.
 */

import type { ApiClient, Review, TodoItem } from "./api";
import { renderLocatorChip } from "./locators";
import { applyServerTodo, progressOf } from "./state";

export interface TodoListController {
  element: HTMLElement;
  review: () => Review;
}

export interface TodoListCallbacks {
  onReview: (review: Review) => void;
  onError: (message: string) => void;
  onJumpToPage: (page: number) => void;
}

export function renderTodoList(
  api: ApiClient,
  initial: Review,
  callbacks: TodoListCallbacks,
): TodoListController {
  let review = initial;
  const container = document.createElement("div");
  container.className = "todo-panel";

  const heading = document.createElement("h2");
  heading.textContent = "Revision checklist";
  container.appendChild(heading);

  const progressLine = document.createElement("div");
  progressLine.className = "todo-progress";
  container.appendChild(progressLine);

  const banner = document.createElement("div");
  banner.className = "todo-banner";
  banner.hidden = true;
  banner.textContent = "All revisions ticked. Ready to resubmit!";
  container.appendChild(banner);

  const list = document.createElement("ul");
  list.className = "todo-list";
  container.appendChild(list);

  const inflight = new Set<number>();

  const refreshProgress = () => {
    const progress = progressOf(review.todos);
    progressLine.textContent = `Progress: ${progress.done}/${progress.total}`;
    progressLine.dataset.done = String(progress.done);
    progressLine.dataset.total = String(progress.total);
    banner.hidden = !progress.complete;
  };

  const renderItem = (item: TodoItem): HTMLLIElement => {
    const row = document.createElement("li");
    row.className = "todo-item";
    const label = document.createElement("label");
    const checkbox = document.createElement("input");
    checkbox.type = "checkbox";
    checkbox.checked = item.done;
    checkbox.dataset.index = String(item.index);

    checkbox.addEventListener("change", async () => {
      if (inflight.has(item.index)) {
        checkbox.checked = !checkbox.checked;
        return;
      }
      const requested = checkbox.checked;
      inflight.add(item.index);
      checkbox.disabled = true;
      try {
        const acked = await api.patchTodo(review.id, item.index, requested);
        review = applyServerTodo(review, acked);
        checkbox.checked = acked.done;
        callbacks.onReview(review);
      } catch (error) {
        checkbox.checked = !requested; // revert: the server never saw it
        callbacks.onError(error instanceof Error ? error.message : String(error));
      } finally {
        inflight.delete(item.index);
        checkbox.disabled = false;
        refreshProgress();
      }
    });

    const text = document.createElement("span");
    text.className = "todo-text";
    text.textContent = `${item.action}: ${item.objective} `;
    text.appendChild(renderLocatorChip(item.locator, callbacks.onJumpToPage));

    label.appendChild(checkbox);
    label.appendChild(text);
    row.appendChild(label);
    return row;
  };

  for (const item of review.todos) {
    list.appendChild(renderItem(item));
  }
  refreshProgress();

  return { element: container, review: () => review };
}
