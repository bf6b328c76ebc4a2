/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const height_law: (a: number, b: number, c: number, d: bigint) => [number, number, number, number];
export const patience: (a: number, b: number, c: number, d: bigint) => [number, number, number, number];
export const png_diagram: (a: number, b: number, c: number, d: number, e: bigint, f: number) => [number, number, number, number];
export const __wbindgen_externrefs: WebAssembly.Table;
export const __externref_table_dealloc: (a: number) => void;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __wbindgen_malloc: (a: number, b: number) => number;
export const __wbindgen_start: () => void;
