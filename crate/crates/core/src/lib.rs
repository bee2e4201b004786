//! Groupoids of germs, Fell line bundles and convolution algebras built from
//! semi-abelian saturated Fell bundles over finite inverse semigroups.

pub mod cartanlab;
pub mod convalg;
pub mod doc;
pub mod fellbundle;
pub mod fixtures;
pub mod germgpd;
pub mod invsgp;
pub mod linebundle;
pub mod linalg;
pub mod pipeline;
pub mod spaces;

pub use fellbundle::{FellBundle, FiberElement};
pub use germgpd::{Germ, GermGroupoid};
pub use invsgp::{Elem, InverseSemigroup};
pub use linebundle::{LineBundle, RefPolicy, Section};
pub use spaces::{Action, OpenSet, PartialHomeo, Point, Space};
