/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const bundled: () => [number, number];
export const bundled_text: (a: number, b: number) => [number, number, number, number];
export const daseinise_diagonal: (a: number, b: number, c: number, d: number, e: number, f: number, g: number, h: number, i: number, j: number) => [number, number, number, number];
export const hasse: (a: number, b: number, c: number, d: number) => [number, number, number, number];
export const names: (a: number, b: number) => [number, number, number, number];
export const truth: (a: number, b: number, c: number, d: number, e: number, f: number, g: number, h: number, i: number, j: number) => [number, number, number, number];
export const __wbindgen_externrefs: WebAssembly.Table;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __wbindgen_malloc: (a: number, b: number) => number;
export const __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
export const __externref_table_dealloc: (a: number) => void;
export const __wbindgen_start: () => void;
