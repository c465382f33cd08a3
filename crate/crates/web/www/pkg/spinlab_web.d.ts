/* tslint:disable */
/* eslint-disable */

/**
 * Sphere map on a grid of `n_theta × n_phi` points, row-major in theta.
 */
export class SphereMap {
    private constructor();
    free(): void;
    [Symbol.dispose](): void;
    phi(): Float64Array;
    theta(): Float64Array;
    values(): Float64Array;
    readonly n_phi: number;
    readonly n_theta: number;
}

export function bjj_sweep(n: number, lambda_min: number, lambda_max: number, count: number): Float64Array;

export function oat_curve(n: number, chit_max: number, count: number): Float64Array;

export function sphere_map(n: number, kind: string, state: string, param: number): SphereMap;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly __wbg_spheremap_free: (a: number, b: number) => void;
    readonly bjj_sweep: (a: number, b: number, c: number, d: number) => [number, number, number, number];
    readonly oat_curve: (a: number, b: number, c: number) => [number, number, number, number];
    readonly sphere_map: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number, number];
    readonly spheremap_n_phi: (a: number) => number;
    readonly spheremap_n_theta: (a: number) => number;
    readonly spheremap_phi: (a: number) => [number, number];
    readonly spheremap_theta: (a: number) => [number, number];
    readonly spheremap_values: (a: number) => [number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __externref_table_dealloc: (a: number) => void;
    readonly __wbindgen_free: (a: number, b: number, c: number) => void;
    readonly __wbindgen_malloc: (a: number, b: number) => number;
    readonly __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
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
