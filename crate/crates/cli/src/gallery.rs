//! Scenarios bundled with the binary.

use crate::scenario::{Scenario, ScenarioError};

pub const GALLERY: [(&str, &str); 7] = [
    ("flat_n2", include_str!("../gallery/flat_n2.json")),
    ("flat_n3", include_str!("../gallery/flat_n3.json")),
    ("E2", include_str!("../gallery/E2.json")),
    ("E3_ricciflat", include_str!("../gallery/E3_ricciflat.json")),
    ("cotton_n2", include_str!("../gallery/cotton_n2.json")),
    ("curved_n3", include_str!("../gallery/curved_n3.json")),
    ("nonspecial_n2", include_str!("../gallery/nonspecial_n2.json")),
];

pub fn source(name: &str) -> Option<&'static str> {
    GALLERY.iter().find(|(n, _)| *n == name).map(|(_, s)| *s)
}

pub fn load(name: &str) -> Option<Result<Scenario, ScenarioError>> {
    source(name).map(Scenario::from_json)
}

/// Every bundled scenario, in gallery order.
pub fn all() -> Vec<Scenario> {
    GALLERY.iter().map(|(name, src)| Scenario::from_json(src).unwrap_or_else(|e| panic!("gallery {name}: {e}"))).collect()
}
