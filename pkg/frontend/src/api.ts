/**
 * Client for the local analysis service.
 *
 * Analysis requests carry sequence numbers: a response is reported stale
 * (and must not be displayed) unless it answers the newest request issued,
 * so the panel can never show results older than the latest edit.
 */

import { AnalysisDoc } from "./editor.js";
import { ProjectDoc } from "./model.js";

export type FetchLike = (url: string, init?: {
  method?: string;
  headers?: Record<string, string>;
  body?: string;
}) => Promise<{ status: number; text(): Promise<string> }>;

export interface AnalyzeOutcome {
  doc: AnalysisDoc | null;
  stale: boolean;
  offline: boolean;
  errors: unknown[] | null;
}

export class EngineClient {
  private seq = 0;

  constructor(private base: string = "",
              private fetchImpl: FetchLike = fetch as unknown as FetchLike) {}

  private async post(path: string, body: unknown) {
    const r = await this.fetchImpl(this.base + path, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(body),
    });
    return { status: r.status, text: await r.text() };
  }

  /** Validity and cost analysis; dim overrides feed the what-if loop. */
  async analyze(project: ProjectDoc, dims?: Record<string, number>,
                mode?: string): Promise<AnalyzeOutcome> {
    const mySeq = ++this.seq;
    let status: number;
    let text: string;
    try {
      ({ status, text } = await this.post("/api/analyze", {
        project, ...(dims ? { dims } : {}), ...(mode ? { mode } : {}),
      }));
    } catch {
      return { doc: null, stale: mySeq !== this.seq, offline: true, errors: null };
    }
    const stale = mySeq !== this.seq;
    const body = JSON.parse(text);
    if (status === 200 || status === 422) {
      if (body.networks !== undefined) {
        return { doc: body as AnalysisDoc, stale, offline: false, errors: null };
      }
      return { doc: null, stale, offline: false, errors: body.errors ?? [] };
    }
    return { doc: null, stale, offline: false, errors: body.errors ?? [] };
  }

  async validate(project: ProjectDoc) {
    const { status, text } = await this.post("/api/validate", { project });
    if (status !== 200) throw new Error(`validate failed: ${text}`);
    return JSON.parse(text) as {
      valid: boolean;
      project_errors: unknown[];
      networks: Record<string, unknown[]>;
    };
  }

  /** Emitted source text; throws with the report when the project is invalid. */
  async exportCode(project: ProjectDoc, lang: string,
                   functionName: string): Promise<string> {
    const { status, text } = await this.post("/api/export", {
      project, lang, function_name: functionName,
    });
    if (status !== 200) throw new Error(`export failed (${status}): ${text}`);
    return text;
  }

  async contract(project: ProjectDoc, net: number, env: number,
                 tensors: Record<string, { shape: number[]; data: number[] }>) {
    const { status, text } = await this.post("/api/contract", {
      project, net, env, tensors,
    });
    if (status !== 200) throw new Error(`contract failed (${status}): ${text}`);
    return JSON.parse(text) as { shape: number[]; data: number[] };
  }

  async health(): Promise<boolean> {
    try {
      const r = await this.fetchImpl(this.base + "/api/health");
      return r.status === 200;
    } catch {
      return false;
    }
  }
}

/** Trailing-edge debounce used by the live analysis loop. */
export function debounce<A extends unknown[]>(
  fn: (...args: A) => void, waitMs: number): (...args: A) => void {
  let timer: ReturnType<typeof setTimeout> | null = null;
  return (...args: A) => {
    if (timer !== null) clearTimeout(timer);
    timer = setTimeout(() => fn(...args), waitMs);
  };
}
