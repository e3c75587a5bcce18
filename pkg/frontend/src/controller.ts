// Interaction wiring: clicks and searches become service commands.
// Errors surface through the toast callback; failed searches leave the
// current session untouched.

import { ServiceClient } from "./client";
import { CorpusRoll } from "./roll";
import { ServiceError, WordRef } from "./types";
import { LineGlyph, MapViewModel } from "./viewmodel";

export interface ControllerHooks {
  onToast?: (message: string) => void;
  /** called with the new session id after a successful search */
  onSessionChange?: (sessionId: string) => void;
}

export class MapController {
  sessionId: string | null = null;

  constructor(
    private client: ServiceClient,
    private viewModel: MapViewModel,
    private roll: CorpusRoll,
    private hooks: ControllerHooks = {},
  ) {}

  /** Text search: a fresh session replaces the current one on success. */
  async search(lang: string, word: string): Promise<boolean> {
    const seed: WordRef = { lang, word };
    try {
      const created = await this.client.createSession(seed, this.currentLangs());
      this.sessionId = created.session_id;
      this.viewModel.resetFromSnapshot(created.snapshot);
      this.hooks.onSessionChange?.(created.session_id);
      return true;
    } catch (error) {
      if (error instanceof ServiceError) {
        this.hooks.onToast?.(`${error.code}: ${error.message}`);
        return false; // session unchanged
      }
      throw error;
    }
  }

  /** Word click: exactly one recenter request. */
  async clickWord(word: WordRef): Promise<void> {
    if (!this.sessionId) {
      return;
    }
    try {
      await this.client.recenter(this.sessionId, word);
    } catch (error) {
      if (error instanceof ServiceError) {
        this.hooks.onToast?.(`${error.code}: ${error.message}`);
        return;
      }
      throw error;
    }
  }

  /** Line click: fetch that edge's raw material into the corpus roll. */
  async clickLine(line: LineGlyph, n = 8): Promise<void> {
    if (!this.sessionId) {
      return;
    }
    try {
      const batch = await this.client.examples(this.sessionId, n,
        { u: line.u, v: line.v });
      this.roll.prependBatch(batch.examples);
    } catch (error) {
      if (error instanceof ServiceError) {
        this.hooks.onToast?.(`${error.code}: ${error.message}`);
        return;
      }
      throw error;
    }
  }

  /** Click dispatch: words win over lines; empty space does nothing. */
  async clickAt(screenX: number, screenY: number): Promise<void> {
    const word = this.viewModel.wordAt(screenX, screenY);
    if (word) {
      await this.clickWord(word);
      return;
    }
    const line = this.viewModel.lineAt(screenX, screenY);
    if (line) {
      await this.clickLine(line);
    }
  }

  private currentLangs(): [string, string][] {
    const langs = new Set<string>();
    for (const word of this.viewModel.state.words.values()) {
      langs.add(word.ref.lang);
    }
    const sorted = [...langs].sort();
    if (sorted.length < 2) {
      return [["en", "ja"]];
    }
    const pairs: [string, string][] = [];
    for (let i = 1; i < sorted.length; i++) {
      pairs.push([sorted[0], sorted[i]]);
    }
    return pairs;
  }
}
