/** Typed client for the review service HTTP API. */

export interface LocatorDict {
  kind: string;
  section_path?: number[];
  page?: number;
  figure?: number;
  table?: number;
  line_range?: [number, number];
}

export interface TodoItem {
  index: number;
  action: string;
  objective: string;
  locator: LocatorDict;
  done: boolean;
}

export interface Review {
  id: string;
  manuscript_id: string;
  venue: string;
  summary: string;
  dimension_comments: Record<string, string>;
  strengths: string[];
  weaknesses: string[];
  todos: TodoItem[];
  raw_markdown: string;
  validation?: string[];
}

export interface Job {
  id: string;
  manuscript_id: string;
  venue: string;
  mode: string;
  use_rag: boolean;
  state: string;
  error: string;
  review_id: string;
  timestamps: Record<string, number>;
}

export interface Venue {
  venue: string;
  dimensions: string[];
  has_index: boolean;
}

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    message: string,
    readonly detail: string = "",
  ) {
    super(message);
    this.name = "ApiError";
  }
}

export type FetchLike = typeof fetch;

export class ApiClient {
  constructor(
    private readonly baseUrl: string = "",
    private readonly fetchImpl: FetchLike = (...args) => fetch(...args),
  ) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await this.fetchImpl(this.baseUrl + path, init);
    if (!response.ok) {
      let code = "http_error";
      let message = `HTTP ${response.status}`;
      let detail = "";
      try {
        const body = (await response.json()) as Record<string, string>;
        code = body.code ?? code;
        message = body.message ?? message;
        detail = body.detail ?? "";
      } catch {
        // non-JSON error body: keep the status message
      }
      throw new ApiError(response.status, code, message, detail);
    }
    return (await response.json()) as T;
  }

  uploadManuscript(data: Blob | ArrayBuffer): Promise<{ id: string }> {
    return this.request("/api/manuscripts", { method: "POST", body: data as BodyInit });
  }

  startReview(
    manuscriptId: string,
    venue: string,
    mode: string,
    useRag: boolean,
  ): Promise<{ job_id: string }> {
    return this.request(`/api/manuscripts/${manuscriptId}/reviews`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ venue, mode, use_rag: useRag }),
    });
  }

  getJob(jobId: string): Promise<Job> {
    return this.request(`/api/jobs/${jobId}`);
  }

  getReview(reviewId: string): Promise<Review> {
    return this.request(`/api/reviews/${reviewId}`);
  }

  patchTodo(reviewId: string, index: number, done: boolean): Promise<TodoItem> {
    return this.request(`/api/reviews/${reviewId}/todos/${index}`, {
      method: "PATCH",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ done }),
    });
  }

  listVenues(): Promise<Venue[]> {
    return this.request("/api/venues");
  }

  pageImageUrl(manuscriptId: string, page: number): string {
    return `${this.baseUrl}/api/manuscripts/${manuscriptId}/pages/${page}`;
  }
}
