//! Independent numerical oracles: adaptive quadrature, Kolmogorov-Smirnov
//! distance, and the closed-form auditor.

pub mod audit;
pub mod ks;
pub mod quad;

pub use audit::{audit_closed_forms, audit_many, AuditCheck, OracleReport, Verdict, AUDIT_TOL};
pub use ks::{construction_ks, ks_critical_1pct, ks_distance, ks_suite, KsCase};
pub use quad::{integrate, integrate_about, quad_integral};
