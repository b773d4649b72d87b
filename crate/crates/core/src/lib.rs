//! Conceptual domain adaptation.
//!
//! Deep de-noising auto-encoders are trained separately on a source and a
//! target domain; their top-layer codes are binarized and the target code is
//! re-wired onto the source code by a constrained binary mapping matrix found
//! with a genetic search. A 1-NN classifier trained on source codes then
//! labels the re-wired target codes.
//!
//! Module map:
//!
//! * [`dataio`] – IDX / USPS text loaders, right-angle rotation, braille
//!   synthesis, balanced seeded subsampling.
//! * [`autoencoder`] – layer-wise de-noising auto-encoder training, encoding,
//!   binarization and model serialization.
//! * [`mapping`] – mapping matrices, genome encoding, adjustment degree,
//!   block concatenation and locality diagnostics.
//! * [`gasearch`] – fitness of a mapping and the genetic / exhaustive search.
//! * [`evalkit`] – exact L1 nearest neighbour, the adaptation methods and
//!   baselines.
//! * [`harness`] – scenario configs, model cache, sweeps and CSV output.

pub mod autoencoder;
pub mod dataio;
pub mod evalkit;
pub mod gasearch;
pub mod harness;
pub mod mapping;
pub mod par;

mod seeds;

pub use seeds::derive_seed;
