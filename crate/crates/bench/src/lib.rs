//! Inputs shared by the germlab benchmarks.

use germlab_core::doc::named_fixture;
use germlab_core::fixtures::{self, RandomParams};
use germlab_core::{FellBundle, LineBundle, RefPolicy};

/// JSON text of a named fixture, as the CLI would read it.
pub fn fixture_text(name: &str) -> String {
    named_fixture(name)
        .unwrap_or_else(|| panic!("unknown fixture {name}"))
        .to_json()
}

/// A bundle with the line bundle built from it.
pub struct Prepared {
    pub name: String,
    pub bundle: FellBundle,
    pub line: LineBundle,
}

impl Prepared {
    pub fn new(name: impl Into<String>, bundle: FellBundle) -> Self {
        let line = LineBundle::build(&bundle, RefPolicy::First).expect("fixture builds a line bundle");
        Self {
            name: name.into(),
            bundle,
            line,
        }
    }
}

/// The flip, the semilattice and a few seeded random fixtures.
pub fn prepared_set(random: u64) -> Vec<Prepared> {
    let params = RandomParams::acceptance();
    let mut v = vec![
        Prepared::new("z2-flip", fixtures::z2_flip()),
        Prepared::new("semilattice", fixtures::semilattice()),
    ];
    v.extend((0..random).map(|seed| Prepared::new(format!("random-{seed}"), fixtures::random_bundle(seed, &params))));
    v
}
