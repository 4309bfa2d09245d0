/** View-state helpers. Progress always derives from server-acknowledged
 * todo flags; optimistic values never feed the fraction. */

import type { Review, TodoItem } from "./api";

export interface Progress {
  done: number;
  total: number;
  fraction: number;
  complete: boolean;
}

export function progressOf(todos: readonly TodoItem[]): Progress {
  const total = todos.length;
  const done = todos.filter((t) => t.done).length;
  return {
    done,
    total,
    fraction: total ? done / total : 0,
    complete: total > 0 && done === total,
  };
}

/** Replace one todo with the server's acknowledged version. */
export function applyServerTodo(review: Review, acked: TodoItem): Review {
  const todos = review.todos.map((t) => (t.index === acked.index ? acked : t));
  return { ...review, todos };
}

export interface SessionRef {
  manuscriptId: string;
  jobId: string;
  reviewId: string;
}

const SESSION_KEY = "reviewforge-session";

export function saveSession(storage: Storage, ref: SessionRef): void {
  storage.setItem(SESSION_KEY, JSON.stringify(ref));
}

export function loadSession(storage: Storage): SessionRef | null {
  const raw = storage.getItem(SESSION_KEY);
  if (!raw) return null;
  try {
    const parsed = JSON.parse(raw) as Partial<SessionRef>;
    if (parsed.manuscriptId && parsed.jobId && parsed.reviewId) {
      return parsed as SessionRef;
    }
  } catch {
    // fall through: corrupt entry is treated as no session
  }
  return null;
}

export function clearSession(storage: Storage): void {
  storage.removeItem(SESSION_KEY);
}
