//! The `.amr` textual specification format.
//!
//! ```text
//! act GDPR { kind: regulation title: "General Data Protection Regulation" }
//! jurisdiction EU_domestic { criteria: [loc:EU] }
//! rel GDPR applies_within EU_domestic
//! accept M1 by requirements_engineer
//! ```
//!
//! `#` starts a comment that runs to the end of the line.

mod lexer;
mod parser;
mod serialize;

pub use parser::{parse, ParseResult};
pub use serialize::serialize;
