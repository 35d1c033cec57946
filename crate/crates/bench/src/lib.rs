// SPDX-License-Identifier: Apache-2.0

//! Criterion benchmarks for `quadclass`; see `benches/core.rs`.
//! Run with `cargo bench -p quadclass-bench`.
