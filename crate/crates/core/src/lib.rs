//! Open reaction networks as decorated cospans: composition, mass-action
//! dynamics and steady-state black-boxing.
//!
//! ```
//! use orn_core::{dsl, dynamics::{emit_equations, grey_box, EquationFormat}};
//!
//! let f = dsl::parse("species A B\ntransition t: A -> B @ 2\ninput 1 -> A\noutput 2 -> B\n").unwrap();
//! let g = dsl::parse("species C\ninput 2 -> C\n").unwrap();
//! let gf = f.then(&g).unwrap();
//! assert_eq!(
//!     emit_equations(&grey_box(&gf), EquationFormat::Text),
//!     "dA/dt = -2*A + I_1\ndB/dt = 2*A\n"
//! );
//! ```

pub mod blackbox;
pub mod cli;
pub mod cospan;
pub mod dsl;
pub mod dynamics;
pub mod error;
pub mod finset;
pub mod io;
pub mod laws;
pub mod lexer;
pub mod poly;
pub mod rational;
pub mod reaction;

pub use cospan::{compose, Cospan, Decoration, OpenDecorated, EQUIVALENCE_SEARCH_CAP};
pub use dynamics::{OpenDynam, PolyField};
pub use error::{Error, ParseError, Result};
pub use finset::{coproduct, pushout, FinFun, FinSet};
pub use poly::{Monomial, Poly};
pub use rational::Rational;
pub use reaction::{Complex, OpenRxNet, PetriView, RxNet, Transition};
