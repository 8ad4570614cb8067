//! Bundled example grammars.

/// One sentence rule with agreement and a nominative-before-finite LP rule.
pub const AGREEMENT: &str = include_str!("../fixtures/agreement.g");
/// [`AGREEMENT`] without its LP rule.
pub const AGREEMENT_FREE: &str = include_str!("../fixtures/agreement_free.g");
/// A grammar whose LP violation only shows up after a sister is built.
pub const LATE_VIOLATION: &str = include_str!("../fixtures/late_violation.g");
/// Order checks that stay open to the end of the parse.
pub const DEFERRED: &str = include_str!("../fixtures/deferred.g");
