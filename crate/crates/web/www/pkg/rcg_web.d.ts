/* tslint:disable */
/* eslint-disable */

export class PlaySession {
    free(): void;
    [Symbol.dispose](): void;
    announce(arcs: Uint32Array): void;
    constructor(text: string, human_traveler: boolean);
    take(arc: number): void;
    transcript(): string;
    view(): string;
}

/**
 * Vertices, arcs and parameters of an `.rcg` instance, for drawing.
 */
export function graph(text: string): string;

/**
 * Reduces a QDIMACS formula; `loose` selects the larger budget.
 */
export function reduce(text: string, loose: boolean): string;

/**
 * Solves an `.rcg` instance with `mode` = `memo` or `dfs`.
 */
export function solve(text: string, mode: string): string;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly __wbg_playsession_free: (a: number, b: number) => void;
    readonly graph: (a: number, b: number) => [number, number, number, number];
    readonly playsession_announce: (a: number, b: number, c: number) => [number, number];
    readonly playsession_new: (a: number, b: number, c: number) => [number, number, number];
    readonly playsession_take: (a: number, b: number) => [number, number];
    readonly playsession_transcript: (a: number) => [number, number, number, number];
    readonly playsession_view: (a: number) => [number, number];
    readonly reduce: (a: number, b: number, c: number) => [number, number, number, number];
    readonly solve: (a: number, b: number, c: number, d: number) => [number, number, number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __wbindgen_malloc: (a: number, b: number) => number;
    readonly __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
    readonly __externref_table_dealloc: (a: number) => void;
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
