//! Exact-arithmetic decision procedures for total positivity (TP) and total
//! non-negativity (TN) of order `k`.
//!
//! Every verdict is computed over arbitrary-precision rationals, so the
//! strict/non-strict sign dichotomies that define TP and TN are decided
//! exactly. Five independent routes are provided:
//!
//! * all minors ([`tpcheck::is_tpk_all_minors`], [`tpcheck::is_tnk_all_minors`]),
//! * contiguous minors ([`tpcheck::is_tpk_contiguous`]),
//! * sign non-reversal at a single alternating test vector per window
//!   ([`tpcheck::is_tpk_snr_single`], [`tpcheck::is_tnk_snr_single`]),
//! * variation diminution at a single test vector per window
//!   ([`tpcheck::is_tp_vd_single`], [`tpcheck::is_tn_vd_single`]),
//! * uniqueness of a linear complementarity problem at a single `q` per
//!   window ([`lcp::is_tpk_lcp_single`]).
//!
//! Negative verdicts carry a [`Certificate`] that can be replayed against the
//! input matrix.

pub mod error;
pub mod lcp;
pub mod matcore;
pub mod pfkarlin;
pub mod serde_util;
pub mod signs;
pub mod tpcheck;

pub use error::{Error, Result};
pub use matcore::{Rational, RationalMatrix, Vector};
pub use tpcheck::{Certificate, Class, Verdict};
