//! Workbench for translation-based block ciphers viewed through space
//! embeddings: bit-packed GF(2) linear algebra, the epsilon/alpha
//! embeddings, rank-distribution distinguishers, s-extendibility tests and
//! group-order linearization bounds.

// indices into bit-packed structures double as chunk offsets, so plain
// range loops read better than iterator adaptors here
#![allow(clippy::needless_range_loop)]

pub mod algebra;
pub mod bounds;
pub mod ciphers;
pub mod embed;
pub mod experiment;
pub mod extend;
pub mod rankstats;
