/** Job polling: 1s interval backing off to 5s, cancelable. */

import type { ApiClient, Job } from "./api";

export interface PollOptions {
  initialMs?: number;
  maxMs?: number;
  factor?: number;
  wait?: (ms: number) => Promise<void>;
}

export interface PollHandle {
  done: Promise<Job>;
  cancel: () => void;
}

const defaultWait = (ms: number) => new Promise<void>((resolve) => setTimeout(resolve, ms));

export function pollJob(
  api: ApiClient,
  jobId: string,
  onUpdate: (job: Job) => void,
  options: PollOptions = {},
): PollHandle {
  const { initialMs = 1000, maxMs = 5000, factor = 1.5, wait = defaultWait } = options;
  let cancelled = false;

  const done = (async () => {
    let delay = initialMs;
    for (;;) {
      const job = await api.getJob(jobId);
      if (cancelled) return job;
      onUpdate(job);
      if (job.state === "done" || job.state === "failed") {
        return job;
      }
      await wait(delay);
      if (cancelled) return job;
      delay = Math.min(maxMs, delay * factor);
    }
  })();

  return { done, cancel: () => (cancelled = true) };
}
