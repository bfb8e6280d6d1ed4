/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const __wbg_playground_free: (a: number, b: number) => void;
export const playground_cluster_balance: (a: number, b: number, c: number) => [number, number, number];
export const playground_cluster_edge_cut: (a: number, b: number, c: number) => [number, number, number];
export const playground_cluster_labels: (a: number, b: number, c: number) => [number, number, number, number];
export const playground_edge_count: (a: number) => number;
export const playground_edges: (a: number) => [number, number];
export const playground_new: (a: number, b: number, c: number, d: number) => [number, number, number];
export const playground_node_count: (a: number) => number;
export const playground_positions: (a: number) => [number, number];
export const playground_rwr_heat: (a: number, b: number, c: number) => [number, number, number, number];
export const playground_shell_depths: (a: number, b: number, c: number) => [number, number, number, number];
export const __wbindgen_externrefs: WebAssembly.Table;
export const __externref_table_dealloc: (a: number) => void;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __wbindgen_malloc: (a: number, b: number) => number;
export const __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
export const __wbindgen_start: () => void;
