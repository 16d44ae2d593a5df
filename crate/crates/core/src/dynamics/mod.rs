//! Open dynamical systems: mass-action fields, boundary flows, simulation.

mod equations;
mod field;
mod flow;
mod simulate;

pub use equations::{emit_equations, parse_equations, EquationFormat, ParsedEquations};
pub use field::{
    grey_box, mass_action_field, pullback, pushforward, CompiledField, OpenDynam, PolyField,
};
pub(crate) use field::check_len;
pub use flow::{assignments, boundary_flow, open_rate_rhs, FlowSpec, OpenRateRhs, TimeFn};
pub use simulate::{simulate, simulate_with, SimOptions, Trajectory};
