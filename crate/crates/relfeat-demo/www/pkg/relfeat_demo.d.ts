/* tslint:disable */
/* eslint-disable */

export class Playground {
    free(): void;
    [Symbol.dispose](): void;
    /**
     * Max cluster size over the ideal ⌈n/c⌉ for the same partition.
     */
    cluster_balance(c: number, seed: number): number;
    /**
     * Total weight of edges crossing the same partition.
     */
    cluster_edge_cut(c: number, seed: number): number;
    /**
     * Cluster id per node for a c-way partition.
     */
    cluster_labels(c: number, seed: number): Uint32Array;
    edge_count(): number;
    /**
     * Edge endpoints as flat (i, j) pairs.
     */
    edges(): Uint32Array;
    /**
     * Presets: "bridge" (two triangles joined by one edge), "blocks"
     * (four planted communities) and "geometric" (random geometric
     * graph). `n` is ignored by the bridge preset.
     */
    constructor(preset: string, n: number, seed: number);
    node_count(): number;
    /**
     * Interleaved x, y in [0, 1].
     */
    positions(): Float64Array;
    /**
     * Steady-state visit distribution of a walk restarting at `source`.
     * `walk_weight` in (0, 1) is the r swept in the experiments: the walk
     * follows edges with weight r and restarts with weight 1 - r.
     */
    rwr_heat(source: number, walk_weight: number): Float64Array;
    /**
     * Exact hop distance from `source` per node: 0 for the source itself,
     * -1 beyond `d_max` or unreachable.
     */
    shell_depths(source: number, d_max: number): Int32Array;
}

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly __wbg_playground_free: (a: number, b: number) => void;
    readonly playground_cluster_balance: (a: number, b: number, c: number) => [number, number, number];
    readonly playground_cluster_edge_cut: (a: number, b: number, c: number) => [number, number, number];
    readonly playground_cluster_labels: (a: number, b: number, c: number) => [number, number, number, number];
    readonly playground_edge_count: (a: number) => number;
    readonly playground_edges: (a: number) => [number, number];
    readonly playground_new: (a: number, b: number, c: number, d: number) => [number, number, number];
    readonly playground_node_count: (a: number) => number;
    readonly playground_positions: (a: number) => [number, number];
    readonly playground_rwr_heat: (a: number, b: number, c: number) => [number, number, number, number];
    readonly playground_shell_depths: (a: number, b: number, c: number) => [number, number, number, number];
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
