/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const __wbg_simulation_free: (a: number, b: number) => void;
export const apollonius_circle: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number, number, number];
export const dominance_grid: (a: number, b: number, c: number, d: number, e: number, f: number, g: number) => [number, number, number, number];
export const membership_at: (a: number, b: number, c: number, d: number) => [number, number, number, number];
export const membership_curves: (a: number, b: number, c: number, d: number) => [number, number, number, number];
export const simulate: (a: number, b: number, c: number, d: number, e: number) => [number, number, number];
export const simulation_captured: (a: number) => number;
export const simulation_duration: (a: number) => number;
export const simulation_final_distance: (a: number) => number;
export const simulation_training_captures: (a: number) => number;
export const simulation_trajectory: (a: number) => [number, number];
export const __wbindgen_externrefs: WebAssembly.Table;
export const __externref_table_dealloc: (a: number) => void;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __wbindgen_malloc: (a: number, b: number) => number;
export const __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
export const __wbindgen_start: () => void;
