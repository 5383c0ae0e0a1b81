/* tslint:disable */
/* eslint-disable */

/**
 * Names of the bundled problem files.
 */
export function bundled(): string;

/**
 * Text of a bundled problem file.
 */
export function bundled_text(name: string): string;

/**
 * Outer or inner daseinisation of `diag(entries)` at every context, with
 * the interval values at each character of `context`.
 */
export function daseinise_diagonal(source: string, closure_name: string, entries: Float64Array, mode: string, context: string): string;

/**
 * Nodes and covering edges of the context poset.
 */
export function hasse(source: string, closure_name: string): string;

/**
 * Propositions and observables defined by a problem.
 */
export function names(source: string): string;

/**
 * Truth value of `prop` in the normalised state with the given real and
 * imaginary amplitudes.
 */
export function truth(source: string, closure_name: string, prop: string, re: Float64Array, im: Float64Array): string;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly bundled: () => [number, number];
    readonly bundled_text: (a: number, b: number) => [number, number, number, number];
    readonly daseinise_diagonal: (a: number, b: number, c: number, d: number, e: number, f: number, g: number, h: number, i: number, j: number) => [number, number, number, number];
    readonly hasse: (a: number, b: number, c: number, d: number) => [number, number, number, number];
    readonly names: (a: number, b: number) => [number, number, number, number];
    readonly truth: (a: number, b: number, c: number, d: number, e: number, f: number, g: number, h: number, i: number, j: number) => [number, number, number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __wbindgen_free: (a: number, b: number, c: number) => void;
    readonly __wbindgen_malloc: (a: number, b: number) => number;
    readonly __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
    readonly __externref_table_dealloc: (a: number) => void;
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
