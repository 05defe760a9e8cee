/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const __wbg_demo_free: (a: number, b: number) => void;
export const demo_chat: (a: number, b: number, c: number) => [number, number];
export const demo_classify: (a: number, b: number, c: number) => [number, number];
export const demo_new: () => number;
export const demo_preview: (a: number, b: number, c: number, d: number, e: number, f: number, g: number) => [number, number];
export const demo_reset: (a: number) => void;
export const demo_scene: (a: number) => [number, number];
export const demo_vocabulary: (a: number) => [number, number];
export const __wbindgen_externrefs: WebAssembly.Table;
export const __wbindgen_malloc: (a: number, b: number) => number;
export const __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __wbindgen_start: () => void;
