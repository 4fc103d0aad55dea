// Thin typed client over the pattern service. All editor traffic goes
// through here; there is no direct file access.

import type { AssemblyView, PatternView, ViewPatch } from "./model.js";

export interface EditResultWire {
  accepted: boolean;
  reason: string | null;
  detail: string | null;
  revision: number | null;
  affected_seams: string[];
  matching_diffs: Record<string, { before: number[][]; after: number[][] }>;
  view_patch: ViewPatch;
}

export interface EditResponse {
  status: number;
  revision: number;
  result?: EditResultWire;
  error?: string;
  detail?: string;
  server_revision?: number;
}

export class ApiError extends Error {
  constructor(
    public status: number,
    public reason: string,
    public detail: string,
  ) {
    super(`${reason}: ${detail}`);
  }
}

export class Api {
  constructor(public base: string) {}

  private async json(method: string, path: string, body?: unknown) {
    const resp = await fetch(this.base + path, {
      method,
      headers: body === undefined ? {} : { "Content-Type": "application/json" },
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    const text = await resp.text();
    let data: any = text;
    const ctype = resp.headers.get("Content-Type") ?? "";
    if (ctype.startsWith("application/json")) data = JSON.parse(text);
    return { status: resp.status, data };
  }

  async templates(): Promise<{ id: string; name: string }[]> {
    const { data } = await this.json("GET", "/templates");
    return data;
  }

  async createPattern(config?: Record<string, unknown>): Promise<{
    id: string;
    revision: number;
    view: PatternView;
  }> {
    const { status, data } = await this.json("POST", "/patterns", {
      config: config ?? {},
    });
    if (status !== 201) throw new ApiError(status, data.error, data.detail);
    return data;
  }

  async createFromTemplate(
    name: string,
    phase1Only = false,
  ): Promise<{ id: string; revision: number; view: PatternView }> {
    const { status, data } = await this.json("POST", "/patterns", {
      from_template: name,
      phase1_only: phase1Only,
    });
    if (status !== 201) throw new ApiError(status, data.error, data.detail);
    return data;
  }

  async getPattern(id: string): Promise<{ view: PatternView; doc: unknown }> {
    const { status, data } = await this.json("GET", `/patterns/${id}`);
    if (status !== 200) throw new ApiError(status, data.error, data.detail);
    return data;
  }

  /** The canonical on-disk serialization, byte-exact. */
  async getPatternFile(id: string): Promise<string> {
    const resp = await fetch(`${this.base}/patterns/${id}/file`);
    if (!resp.ok) throw new ApiError(resp.status, "NotFound", id);
    return await resp.text();
  }

  async applyEdit(
    id: string,
    revision: number,
    op: Record<string, unknown>,
  ): Promise<EditResponse> {
    const { status, data } = await this.json("POST", `/patterns/${id}/edits`, {
      revision,
      op,
    });
    return { status, ...data };
  }

  async undo(id: string, revision: number): Promise<{
    status: number;
    revision: number;
    view: PatternView;
  }> {
    const { status, data } = await this.json("POST", `/patterns/${id}/undo`, {
      revision,
    });
    return { status, ...data };
  }

  async decompose(
    id: string,
    opts: { supply?: Record<string, number | null>; budget_s?: number } = {},
  ): Promise<AssemblyView> {
    const { status, data } = await this.json(
      "POST",
      `/patterns/${id}/decompose`,
      opts,
    );
    if (status !== 200) {
      throw new ApiError(status, data.error ?? "DecomposeFailed", data.detail ?? "");
    }
    return data;
  }

  async exportSvg(id: string, sheetWidthCm: number): Promise<string> {
    const resp = await fetch(
      `${this.base}/patterns/${id}/export/svg?sheet_width=${sheetWidthCm}`,
    );
    if (!resp.ok) {
      throw new ApiError(resp.status, "ExportFailed", await resp.text());
    }
    return await resp.text();
  }

  async exportInstructions(id: string): Promise<{
    instructions: unknown;
    markdown: string;
  }> {
    const { status, data } = await this.json(
      "GET",
      `/patterns/${id}/export/instructions`,
    );
    if (status !== 200) throw new ApiError(status, data.error, data.detail);
    return data;
  }

  async exportMesh(
    id: string,
    offsets: Record<string, [number, number]>,
  ): Promise<{ objs: Record<string, string>; sidecar: string; threads: number }> {
    const { status, data } = await this.json(
      "POST",
      `/patterns/${id}/export/mesh`,
      { offsets },
    );
    if (status !== 200) throw new ApiError(status, data.error, data.detail);
    return data;
  }
}
