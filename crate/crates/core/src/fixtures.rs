//! Bundled example specifications.

/// A telemedicine project under the GDPR and an EDPB guideline.
pub const GDPR_EXAMPLE: &str = include_str!("../fixtures/gdpr_example.amr");
