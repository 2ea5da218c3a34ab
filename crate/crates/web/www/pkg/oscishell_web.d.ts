/* tslint:disable */
/* eslint-disable */

/**
 * Nodal curves of the path state at `t` as a standalone SVG document.
 */
export function contour_svg(name: string, shell: number, t: number, window: number): string;

/**
 * Diagnosis report as JSON; coefficients need not be normalized.
 */
export function diagnose(shell: number, coeffs: Float64Array, alpha: number): string;

/**
 * `[{t, n_domains, s_dom}, ...]` on a uniform grid of `steps` points.
 */
export function domain_scan(name: string, shell: number, steps: number): string;

export function path_coeffs(name: string, shell: number, t: number): Float64Array;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly contour_svg: (a: number, b: number, c: number, d: number, e: number) => [number, number, number, number];
    readonly diagnose: (a: number, b: number, c: number, d: number) => [number, number, number, number];
    readonly domain_scan: (a: number, b: number, c: number, d: number) => [number, number, number, number];
    readonly path_coeffs: (a: number, b: number, c: number, d: number) => [number, number, number, number];
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
