//! Scheme files bundled with the binary, addressed as `@name`.

use fatsep_core::exactlin::FieldSpec;
use fatsep_core::scheme::FatPointScheme;
use fatsep_core::{Error, Result};

/// `(name, scheme JSON)`. `ci37` is the doubled CI(3,7) grid minus `(1:3:7)`;
/// its point 20 is `(1:3:6)`, which has multiplicity one in `ci37-z1`.
pub const FIXTURES: &[(&str, &str)] = &[
    ("example2", include_str!("../fixtures/example2.json")),
    ("1P", include_str!("../fixtures/1P.json")),
    ("2P", include_str!("../fixtures/2P.json")),
    ("3P", include_str!("../fixtures/3P.json")),
    ("4P", include_str!("../fixtures/4P.json")),
    ("ci37", include_str!("../fixtures/ci37.json")),
    ("ci37-z1", include_str!("../fixtures/ci37-z1.json")),
    ("ci234", include_str!("../fixtures/ci234.json")),
];

/// 1-based index of `(1:3:6)` in `ci37` and `ci37-z1`.
pub const CI37_POINT: usize = 20;

pub fn fixture_text(name: &str) -> Result<&'static str> {
    FIXTURES
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, text)| *text)
        .ok_or_else(|| {
            let names: Vec<&str> = FIXTURES.iter().map(|(n, _)| *n).collect();
            Error::InvalidInput(format!("unknown fixture '@{name}' (available: {})", names.join(", ")))
        })
}

pub fn fixture(name: &str, field: Option<FieldSpec>) -> Result<FatPointScheme> {
    FatPointScheme::from_json_str(fixture_text(name)?, field)
}

/// Reads a scheme from `@name`, `-` (stdin) or a file path.
pub fn load_scheme(source: &str, field: Option<FieldSpec>) -> Result<FatPointScheme> {
    if let Some(name) = source.strip_prefix('@') {
        return fixture(name, field);
    }
    let text = if source == "-" {
        std::io::read_to_string(std::io::stdin()).map_err(|e| Error::InvalidInput(format!("cannot read stdin: {e}")))?
    } else {
        std::fs::read_to_string(source).map_err(|e| Error::InvalidInput(format!("cannot read {source}: {e}")))?
    };
    FatPointScheme::from_json_str(&text, field)
}
