/* tslint:disable */
/* eslint-disable */

/**
 * Outcome of [`simulate`].
 */
export class Simulation {
    private constructor();
    free(): void;
    [Symbol.dispose](): void;
    captured(): boolean;
    duration(): number;
    final_distance(): number;
    training_captures(): number;
    /**
     * `[px, py, pz, ex, ey, ez]` per step, starting with the initial state.
     */
    trajectory(): Float64Array;
}

/**
 * Dominance sphere cut by the plane `z`: `[cx, cy, cz, radius]`, with P and
 * E both placed at height `z`.
 */
export function apollonius_circle(px: number, py: number, ex: number, ey: number, z: number, ratio: number): Float64Array;

/**
 * Region codes on an `n` by `n` grid over `[0, size]^2` at the agents'
 * height, row-major from y = 0: 0 evader, 1 boundary, 2 pursuer.
 */
export function dominance_grid(px: number, py: number, ex: number, ey: number, ratio: number, size: number, n: number): Uint8Array;

/**
 * Memberships of `x` in each of `count` evenly spaced triangles over `[lo, hi]`.
 */
export function membership_at(lo: number, hi: number, count: number, x: number): Float64Array;

/**
 * Memberships of `count` evenly spaced triangles over `[lo, hi]` sampled
 * at `samples` points: `count` consecutive rows of `samples` values.
 */
export function membership_curves(lo: number, hi: number, count: number, samples: number): Float64Array;

/**
 * Trains both agents on built-in scenario `scenario` (1-4) for `episodes`
 * episodes without obstacles, then plays one noise-free episode.
 */
export function simulate(scenario: number, seed: number, episodes: number, steering: string): Simulation;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly __wbg_simulation_free: (a: number, b: number) => void;
    readonly apollonius_circle: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number, number, number];
    readonly dominance_grid: (a: number, b: number, c: number, d: number, e: number, f: number, g: number) => [number, number, number, number];
    readonly membership_at: (a: number, b: number, c: number, d: number) => [number, number, number, number];
    readonly membership_curves: (a: number, b: number, c: number, d: number) => [number, number, number, number];
    readonly simulate: (a: number, b: number, c: number, d: number, e: number) => [number, number, number];
    readonly simulation_captured: (a: number) => number;
    readonly simulation_duration: (a: number) => number;
    readonly simulation_final_distance: (a: number) => number;
    readonly simulation_training_captures: (a: number) => number;
    readonly simulation_trajectory: (a: number) => [number, number];
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
