/* tslint:disable */
/* eslint-disable */

export class Demo {
    free(): void;
    [Symbol.dispose](): void;
    /**
     * Runs one utterance through the pipeline. Returns the turn as JSON:
     * reply, status, matched intent and parameters, request belief and
     * scene version.
     */
    chat(text: string): string;
    /**
     * Classifies without acting: intent, parameters and confidence.
     */
    classify(text: string): string;
    constructor();
    /**
     * Where `prototype` would land for the given position tokens, without
     * changing the scene.
     */
    preview(prototype: string, pos_x: string, pos_y: string): string;
    reset(): void;
    /**
     * Current scene snapshot as JSON.
     */
    scene(): string;
    /**
     * Catalog names and the position vocabulary, for building menus.
     */
    vocabulary(): string;
}

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly __wbg_demo_free: (a: number, b: number) => void;
    readonly demo_chat: (a: number, b: number, c: number) => [number, number];
    readonly demo_classify: (a: number, b: number, c: number) => [number, number];
    readonly demo_new: () => number;
    readonly demo_preview: (a: number, b: number, c: number, d: number, e: number, f: number, g: number) => [number, number];
    readonly demo_reset: (a: number) => void;
    readonly demo_scene: (a: number) => [number, number];
    readonly demo_vocabulary: (a: number) => [number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __wbindgen_malloc: (a: number, b: number) => number;
    readonly __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
    readonly __wbindgen_free: (a: number, b: number, c: number) => void;
    readonly __wbindgen_start: () => void;
}

export type SyncInitInput = BufferSource | WebAssembly.Module;

/**
 * Instantiates the given `module`, which can either be bytes or
 * a precompiled `WebAssembly.Module`.
 *
 * @param {{ module: SyncInitInput }} module - Passing `SyncInitInput` directly is deprecated.
 *
 * @returns {InitOutput}
 */
export function initSync(module: { module: SyncInitInput } | SyncInitInput): InitOutput;

/**
 * If `module_or_path` is {RequestInfo} or {URL}, makes a request and
 * for everything else, calls `WebAssembly.instantiate` directly.
 *
 * @param {{ module_or_path: InitInput | Promise<InitInput> }} module_or_path - Passing `InitInput` directly is deprecated.
 *
 * @returns {Promise<InitOutput>}
 */
export default function __wbg_init (module_or_path?: { module_or_path: InitInput | Promise<InitInput> } | InitInput | Promise<InitInput>): Promise<InitOutput>;
