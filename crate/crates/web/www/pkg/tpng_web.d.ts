/* tslint:disable */
/* eslint-disable */

/**
 * Histogram of H(1,1) over `samples` runs next to the exact law recovered from
 * the Schur measure side (for 0 < t < 1).
 */
export function height_law(theta: number, t: number, samples: number, seed: bigint): string;

/**
 * Piles (top card first) after sorting `deck`, a permutation of 1..N.
 */
export function patience(deck: Uint32Array, t: number, seed: bigint): string;

/**
 * One t-PNG sample on [0, chi] x [0, eta] with intensity theta^2: nucleations,
 * ray segments, crossings, broken lines and heights on a `grid` x `grid` mesh.
 */
export function png_diagram(chi: number, eta: number, theta: number, t: number, seed: bigint, grid: number): string;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly height_law: (a: number, b: number, c: number, d: bigint) => [number, number, number, number];
    readonly patience: (a: number, b: number, c: number, d: bigint) => [number, number, number, number];
    readonly png_diagram: (a: number, b: number, c: number, d: number, e: bigint, f: number) => [number, number, number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __externref_table_dealloc: (a: number) => void;
    readonly __wbindgen_free: (a: number, b: number, c: number) => void;
    readonly __wbindgen_malloc: (a: number, b: number) => number;
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
