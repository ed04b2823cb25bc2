use alloc::string::ToString;

use super::{parse, DslError, Presentation};

macro_rules! entries {
    ($($name:literal),* $(,)?) => {
        const ENTRIES: &[(&str, &str)] = &[
            $(($name, include_str!(concat!("../../catalog/", $name, ".pres"))),)*
        ];
    };
}

entries![
    "brj-2-3",
    "cartan-A1",
    "cartan-A1-N2",
    "cartan-A1-N4",
    "cartan-A1-N5",
    "cartan-A1-N6",
    "cartan-A1-N7",
    "cartan-A2-N2",
    "cartan-A2-N3",
    "cartan-A2-N5",
    "cartan-A2-N5-skew",
    "cartan-A2-N5-sym",
    "cartan-B2-N5",
    "cartan-B3-N3",
    "cartan-G2",
    "linking-A1xA1",
    "standard-B2",
    "standard-G2",
    "standard-G2-b",
    "standard-G2-c",
    "super-A2-cartan",
    "super-A2-minus",
    "super-A2-mixed",
    "super-A3-1",
    "super-A3-2",
    "super-A3-3",
    "super-A3-4",
    "ufo-7",
];

/// Names of the bundled entries, in catalog order.
pub fn catalog_names() -> impl Iterator<Item = &'static str> {
    ENTRIES.iter().map(|(n, _)| *n)
}

/// Source text of a bundled entry.
pub fn catalog_source(name: &str) -> Result<&'static str, DslError> {
    ENTRIES
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, s)| *s)
        .ok_or_else(|| DslError::UnknownCatalogEntry(name.to_string()))
}

pub fn catalog(name: &str) -> Result<Presentation, DslError> {
    parse(catalog_source(name)?)
}
