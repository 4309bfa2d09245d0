/** Application shell: upload, configure, run, read, tick.
 *
 * The UI holds no review logic; everything displayed is fetched from the
 * service, and a page reload rebuilds the same view from the persisted
 * session reference plus server state.
 */

import { ApiClient, ApiError, Job, Review } from "./api";
import { renderMarkdown } from "./markdown";
import { pollJob, PollOptions } from "./poll";
import { loadSession, saveSession } from "./state";
import { renderTodoList } from "./todos";

const JOB_STAGES = ["queued", "ingesting", "retrieving", "generating", "parsing", "done"];

export interface AppOptions {
  poll?: PollOptions;
  storage?: Storage;
}

export class App {
  private manuscriptId: string | null = null;
  private jobId: string | null = null;
  private cancelPoll: (() => void) | null = null;

  constructor(
    private readonly root: HTMLElement,
    private readonly api: ApiClient,
    private readonly options: AppOptions = {},
  ) {}

  private get storage(): Storage {
    return this.options.storage ?? window.localStorage;
  }

  async start(): Promise<void> {
    this.root.innerHTML = "";
    this.root.appendChild(this.buildLayout());
    await this.populateVenues();
    const session = loadSession(this.storage);
    if (session) {
      this.manuscriptId = session.manuscriptId;
      this.setStatus("Restored previous session.");
      try {
        const review = await this.api.getReview(session.reviewId);
        this.showReview(review);
      } catch {
        this.setStatus("Previous review is gone; upload to start again.");
      }
    }
  }

  // -- layout

  private buildLayout(): HTMLElement {
    const main = document.createElement("main");
    main.className = "app";

    const title = document.createElement("h1");
    title.textContent = "Pre-submission review";
    main.appendChild(title);

    main.appendChild(this.buildUploadZone());
    main.appendChild(this.buildControls());

    const status = document.createElement("div");
    status.id = "status";
    status.className = "status";
    main.appendChild(status);

    const stages = document.createElement("ol");
    stages.id = "stages";
    stages.className = "stages";
    for (const stage of JOB_STAGES) {
      const item = document.createElement("li");
      item.dataset.stage = stage;
      item.textContent = stage;
      stages.appendChild(item);
    }
    stages.hidden = true;
    main.appendChild(stages);

    const toast = document.createElement("div");
    toast.id = "toast";
    toast.className = "toast";
    toast.hidden = true;
    main.appendChild(toast);

    const review = document.createElement("section");
    review.id = "review";
    main.appendChild(review);

    const thumbs = document.createElement("div");
    thumbs.id = "thumbs";
    thumbs.className = "thumbs";
    main.appendChild(thumbs);

    return main;
  }

  private buildUploadZone(): HTMLElement {
    const zone = document.createElement("div");
    zone.id = "upload-zone";
    zone.className = "upload-zone";
    zone.textContent = "Drop a PDF here or ";

    const picker = document.createElement("input");
    picker.type = "file";
    picker.id = "file-input";
    picker.accept = "application/pdf";
    picker.addEventListener("change", () => {
      const file = picker.files?.[0];
      if (file) void this.upload(file);
    });
    zone.appendChild(picker);

    zone.addEventListener("dragover", (event) => {
      event.preventDefault();
      zone.classList.add("drag");
    });
    zone.addEventListener("dragleave", () => zone.classList.remove("drag"));
    zone.addEventListener("drop", (event) => {
      event.preventDefault();
      zone.classList.remove("drag");
      const file = event.dataTransfer?.files?.[0];
      if (file) void this.upload(file);
    });
    return zone;
  }

  private buildControls(): HTMLElement {
    const bar = document.createElement("div");
    bar.className = "controls";

    const venue = document.createElement("select");
    venue.id = "venue-select";
    bar.appendChild(venue);

    const mode = document.createElement("select");
    mode.id = "mode-select";
    for (const value of ["multimodal", "text_only", "image_only"]) {
      const option = document.createElement("option");
      option.value = value;
      option.textContent = value;
      mode.appendChild(option);
    }
    bar.appendChild(mode);

    const ragLabel = document.createElement("label");
    const rag = document.createElement("input");
    rag.type = "checkbox";
    rag.id = "rag-toggle";
    rag.checked = true;
    ragLabel.appendChild(rag);
    ragLabel.appendChild(document.createTextNode(" use venue corpus (RAG)"));
    bar.appendChild(ragLabel);

    const run = document.createElement("button");
    run.id = "run-button";
    run.textContent = "Generate review";
    run.addEventListener("click", () => void this.run());
    bar.appendChild(run);

    return bar;
  }

  // -- behavior

  private async populateVenues(): Promise<void> {
    const select = this.root.querySelector<HTMLSelectElement>("#venue-select");
    if (!select) return;
    try {
      const venues = await this.api.listVenues();
      select.innerHTML = "";
      for (const venue of venues) {
        const option = document.createElement("option");
        option.value = venue.venue;
        option.textContent = venue.has_index ? `${venue.venue} (corpus)` : venue.venue;
        select.appendChild(option);
      }
    } catch (error) {
      this.showError(error);
    }
  }

  async upload(file: Blob): Promise<void> {
    this.setStatus("Uploading…");
    try {
      const body = await file.arrayBuffer();
      const { id } = await this.api.uploadManuscript(body);
      this.manuscriptId = id;
      this.setStatus(`Manuscript ${id} ready.`);
    } catch (error) {
      // Ingest errors surface verbatim (e.g. scanned PDFs without text).
      this.showError(error);
      this.setStatus("Upload failed.");
    }
  }

  async run(): Promise<void> {
    if (!this.manuscriptId) {
      this.showToast("Upload a manuscript first.");
      return;
    }
    const venue = this.root.querySelector<HTMLSelectElement>("#venue-select")?.value ?? "default";
    const mode = this.root.querySelector<HTMLSelectElement>("#mode-select")?.value ?? "multimodal";
    const useRag = this.root.querySelector<HTMLInputElement>("#rag-toggle")?.checked ?? true;

    this.cancelPoll?.();
    try {
      const { job_id } = await this.api.startReview(this.manuscriptId, venue, mode, useRag);
      this.jobId = job_id;
      this.setStatus(`Review job ${job_id} started.`);
      this.showStages("queued");
      const handle = pollJob(this.api, job_id, (job) => this.showStages(job.state), this.options.poll);
      this.cancelPoll = handle.cancel;
      const job = await handle.done;
      await this.finishJob(job);
    } catch (error) {
      this.showError(error);
      this.setStatus("Review failed to start.");
    }
  }

  private async finishJob(job: Job): Promise<void> {
    if (job.state === "failed") {
      this.showToast(`Review failed: ${job.error}`);
      this.setStatus("Review failed.");
      return;
    }
    if (job.state !== "done") return;
    const review = await this.api.getReview(job.review_id);
    if (this.manuscriptId && this.jobId) {
      saveSession(this.storage, {
        manuscriptId: this.manuscriptId,
        jobId: this.jobId,
        reviewId: review.id,
      });
    }
    this.showReview(review);
    this.setStatus("Review ready.");
  }

  private showReview(review: Review): void {
    const section = this.root.querySelector<HTMLElement>("#review");
    if (!section) return;
    section.innerHTML = "";

    const markdownHost = document.createElement("article");
    markdownHost.className = "markdown";
    markdownHost.appendChild(renderMarkdown(review.raw_markdown));
    section.appendChild(markdownHost);

    const todos = renderTodoList(this.api, review, {
      onReview: () => undefined,
      onError: (message) => this.showToast(message),
      onJumpToPage: (page) => this.jumpToPage(page),
    });
    section.appendChild(todos.element);

    this.renderThumbnails(review.manuscript_id);
  }

  private renderThumbnails(manuscriptId: string): void {
    const strip = this.root.querySelector<HTMLElement>("#thumbs");
    if (!strip || !manuscriptId) return;
    strip.innerHTML = "";
    // Thumbnails degrade silently: a missing page simply does not render.
    for (let page = 1; page <= 40; page += 1) {
      const img = document.createElement("img");
      img.loading = "lazy";
      img.className = "thumb";
      img.id = `thumb-page-${page}`;
      img.alt = `page ${page}`;
      img.src = this.api.pageImageUrl(manuscriptId, page);
      img.addEventListener("error", () => img.remove());
      strip.appendChild(img);
    }
  }

  private jumpToPage(page: number): void {
    const img = this.root.querySelector<HTMLElement>(`#thumb-page-${page}`);
    img?.scrollIntoView?.({ behavior: "smooth", block: "center" });
    img?.classList.add("thumb-highlight");
  }

  private showStages(current: string): void {
    const stages = this.root.querySelector<HTMLElement>("#stages");
    if (!stages) return;
    stages.hidden = false;
    const reached = JOB_STAGES.indexOf(current);
    stages.querySelectorAll("li").forEach((item, index) => {
      item.classList.toggle("stage-active", item.dataset.stage === current);
      item.classList.toggle("stage-done", reached >= 0 && index < reached);
    });
  }

  private setStatus(text: string): void {
    const status = this.root.querySelector<HTMLElement>("#status");
    if (status) status.textContent = text;
  }

  private showToast(message: string): void {
    const toast = this.root.querySelector<HTMLElement>("#toast");
    if (!toast) return;
    toast.textContent = message;
    toast.hidden = false;
    setTimeout(() => (toast.hidden = true), 4000);
  }

  private showError(error: unknown): void {
    if (error instanceof ApiError) {
      this.showToast(`${error.message}${error.detail ? ` (${error.detail})` : ""}`);
    } else {
      this.showToast(error instanceof Error ? error.message : String(error));
    }
  }
}
