/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const __wbg_spheremap_free: (a: number, b: number) => void;
export const bjj_sweep: (a: number, b: number, c: number, d: number) => [number, number, number, number];
export const oat_curve: (a: number, b: number, c: number) => [number, number, number, number];
export const sphere_map: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number, number];
export const spheremap_n_phi: (a: number) => number;
export const spheremap_n_theta: (a: number) => number;
export const spheremap_phi: (a: number) => [number, number];
export const spheremap_theta: (a: number) => [number, number];
export const spheremap_values: (a: number) => [number, number];
export const __wbindgen_externrefs: WebAssembly.Table;
export const __externref_table_dealloc: (a: number) => void;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __wbindgen_malloc: (a: number, b: number) => number;
export const __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
export const __wbindgen_start: () => void;
