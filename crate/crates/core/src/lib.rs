//! Orthogonal multiple access with correlated binary sources.
//!
//! `n` sensors observe noisy copies of a common bit stream, channel-encode
//! their observations independently and send them over orthogonal AWGN links
//! to a single access point. This crate covers the three sides of that
//! scenario:
//!
//! * [`region`]: the exact feasible capacity region (joint entropies,
//!   characteristic points, membership and 2-D boundary projections).
//! * [`jcd`]: joint channel decoding, where the component decoders
//!   ([`conv`] for serially concatenated convolutional codes, [`ldpc`] for
//!   LDPC codes) exchange soft information through connection nodes that
//!   exploit the source correlation, plus a Monte Carlo BER harness.
//! * [`exit`]: density-evolution/EXIT machinery that locates the balanced
//!   and unbalanced operating points of a concrete code.
//!
//! Every LLR in the crate uses the convention `ln P(bit = 0) / P(bit = 1)`.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod channel;
pub mod conv;
pub mod error;
pub mod exit;
pub mod jcd;
pub mod ldpc;
pub mod llr;
pub mod region;
pub mod rng;
pub mod source;

pub use channel::ChannelConfig;
pub use conv::{RationalGenerator, ScccCode};
pub use error::{Error, Result};
pub use exit::{ExitPoint, NumericPdf};
pub use jcd::{CodeInstance, ConnectionNode, JcdConfig};
pub use ldpc::{DegreeDistributions, LdpcCode};
pub use llr::{LlrBlock, LLR_CLIP};
pub use region::{CharacteristicPoints, FeasibleRegion};
pub use source::{CorrelationModel, SourceBlock};
