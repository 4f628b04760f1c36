//! Benchmarks for the nicecone workspace live in `benches/`.
