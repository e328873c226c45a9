/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const __wbg_playsession_free: (a: number, b: number) => void;
export const graph: (a: number, b: number) => [number, number, number, number];
export const playsession_announce: (a: number, b: number, c: number) => [number, number];
export const playsession_new: (a: number, b: number, c: number) => [number, number, number];
export const playsession_take: (a: number, b: number) => [number, number];
export const playsession_transcript: (a: number) => [number, number, number, number];
export const playsession_view: (a: number) => [number, number];
export const reduce: (a: number, b: number, c: number) => [number, number, number, number];
export const solve: (a: number, b: number, c: number, d: number) => [number, number, number, number];
export const __wbindgen_externrefs: WebAssembly.Table;
export const __wbindgen_malloc: (a: number, b: number) => number;
export const __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
export const __externref_table_dealloc: (a: number) => void;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __wbindgen_start: () => void;
