//! C interface to `orn-core`.
//!
//! Networks and trajectories are opaque handles. Every fallible call
//! returns an [`OrnStatus`]; on failure, [`orn_last_error_message`] describes
//! the error on the calling thread. Strings returned through out-pointers are
//! owned by the caller and released with [`orn_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, c_int, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use orn_core::blackbox::{sample_blackbox, SampleOptions};
use orn_core::dsl;
use orn_core::dynamics::{emit_equations, grey_box, simulate, EquationFormat, FlowSpec, Trajectory};
use orn_core::io::{to_json, TupleDocument};
use orn_core::{Error, OpenRxNet};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OrnStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    Domain = 4,
    Panic = 5,
}

/// An open reaction network with rates.
pub struct OrnNet(OpenRxNet);

/// A simulated trajectory: rows of `(t, c)`.
pub struct OrnTrajectory(Trajectory);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', "\\0");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).expect("nul bytes replaced"));
}

fn fail(status: OrnStatus, msg: impl Into<String>) -> OrnStatus {
    set_error(msg);
    status
}

fn domain(e: Error) -> OrnStatus {
    let status = match e {
        Error::Parse(_) => OrnStatus::Parse,
        _ => OrnStatus::Domain,
    };
    fail(status, e.to_string())
}

/// Runs `body`, turning panics into [`OrnStatus::Panic`].
fn guard(body: impl FnOnce() -> OrnStatus) -> OrnStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(status) => {
            if status == OrnStatus::Ok {
                set_error("");
            }
            status
        }
        Err(_) => fail(OrnStatus::Panic, "internal panic"),
    }
}

unsafe fn c_str<'a>(s: *const c_char) -> Result<&'a str, OrnStatus> {
    if s.is_null() {
        return Err(fail(OrnStatus::NullPointer, "null string"));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|_| fail(OrnStatus::InvalidUtf8, "string is not UTF-8"))
}

unsafe fn net<'a>(p: *const OrnNet) -> Result<&'a OpenRxNet, OrnStatus> {
    p.as_ref()
        .map(|n| &n.0)
        .ok_or_else(|| fail(OrnStatus::NullPointer, "null network handle"))
}

unsafe fn put_net(out: *mut *mut OrnNet, value: OpenRxNet) -> OrnStatus {
    *out = Box::into_raw(Box::new(OrnNet(value)));
    OrnStatus::Ok
}

unsafe fn put_string(out: *mut *mut c_char, value: String) -> OrnStatus {
    match CString::new(value) {
        Ok(s) => {
            *out = s.into_raw();
            OrnStatus::Ok
        }
        Err(_) => fail(OrnStatus::Domain, "output contains a nul byte"),
    }
}

macro_rules! try_status {
    ($e:expr) => {
        match $e {
            Ok(v) => v,
            Err(s) => return s,
        }
    };
}

macro_rules! check_out {
    ($out:expr) => {
        if $out.is_null() {
            return fail(OrnStatus::NullPointer, "null output pointer");
        }
    };
}

/// Message for the last failed call on this thread; empty after a success.
/// Valid until the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn orn_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Parses `.orn` text.
///
/// # Safety
/// `text` must be a valid nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn orn_net_parse(text: *const c_char, out: *mut *mut OrnNet) -> OrnStatus {
    guard(|| {
        check_out!(out);
        let src = try_status!(c_str(text));
        match dsl::parse(src) {
            Ok(n) => put_net(out, n),
            Err(e) => domain(e),
        }
    })
}

/// # Safety
/// `net` must come from this library and not be freed twice. Null is a no-op.
#[no_mangle]
pub unsafe extern "C" fn orn_net_free(net: *mut OrnNet) {
    if !net.is_null() {
        drop(Box::from_raw(net));
    }
}

/// `g ∘ f`: glues the outputs of `f` to the inputs of `g`.
///
/// # Safety
/// Handles must be valid; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn orn_net_compose(
    f: *const OrnNet,
    g: *const OrnNet,
    out: *mut *mut OrnNet,
) -> OrnStatus {
    guard(|| {
        check_out!(out);
        let (f, g) = (try_status!(net(f)), try_status!(net(g)));
        match f.then(g) {
            Ok(n) => put_net(out, n),
            Err(e) => domain(e),
        }
    })
}

/// # Safety
/// Handles must be valid; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn orn_net_tensor(
    a: *const OrnNet,
    b: *const OrnNet,
    out: *mut *mut OrnNet,
) -> OrnStatus {
    guard(|| {
        check_out!(out);
        let (a, b) = (try_status!(net(a)), try_status!(net(b)));
        put_net(out, a.tensor(b))
    })
}

/// # Safety
/// `a` must be valid; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn orn_net_dagger(a: *const OrnNet, out: *mut *mut OrnNet) -> OrnStatus {
    guard(|| {
        check_out!(out);
        put_net(out, try_status!(net(a)).dagger())
    })
}

/// Number of species in the apex.
///
/// # Safety
/// `a` must be valid; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn orn_net_species_count(a: *const OrnNet, out: *mut usize) -> OrnStatus {
    guard(|| {
        check_out!(out);
        *out = try_status!(net(a)).apex().len();
        OrnStatus::Ok
    })
}

/// Canonical `.orn` text.
///
/// # Safety
/// `a` must be valid; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn orn_net_render(a: *const OrnNet, out: *mut *mut c_char) -> OrnStatus {
    guard(|| {
        check_out!(out);
        put_string(out, dsl::render(try_status!(net(a))))
    })
}

/// Open rate equations; nonzero `latex` selects LaTeX output.
///
/// # Safety
/// `a` must be valid; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn orn_net_equations(
    a: *const OrnNet,
    latex: c_int,
    out: *mut *mut c_char,
) -> OrnStatus {
    guard(|| {
        check_out!(out);
        let format = if latex != 0 {
            EquationFormat::Latex
        } else {
            EquationFormat::Text
        };
        put_string(out, emit_equations(&grey_box(try_status!(net(a))), format))
    })
}

/// RK4 simulation from `c0` (species in canonical order). `inflow` and
/// `outflow` use the command-line syntax `point=expr,…` and may be null.
///
/// # Safety
/// `c0` must point to `len` doubles; strings must be nul-terminated or null;
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn orn_net_simulate(
    a: *const OrnNet,
    c0: *const f64,
    len: usize,
    inflow: *const c_char,
    outflow: *const c_char,
    t_end: f64,
    dt: f64,
    out: *mut *mut OrnTrajectory,
) -> OrnStatus {
    guard(|| {
        check_out!(out);
        let sys = grey_box(try_status!(net(a)));
        if c0.is_null() && len > 0 {
            return fail(OrnStatus::NullPointer, "null initial state");
        }
        let state = if len == 0 {
            &[][..]
        } else {
            std::slice::from_raw_parts(c0, len)
        };
        let optional = |s: *const c_char| if s.is_null() { Ok("") } else { c_str(s) };
        let (inflow, outflow) = (try_status!(optional(inflow)), try_status!(optional(outflow)));
        let flows = match FlowSpec::parse(inflow, outflow) {
            Ok(f) => f,
            Err(e) => return domain(e),
        };
        match simulate(&sys, state, &flows, t_end, dt) {
            Ok(t) => {
                *out = Box::into_raw(Box::new(OrnTrajectory(t)));
                OrnStatus::Ok
            }
            Err(e) => domain(e),
        }
    })
}

/// Number of rows, or 0 for a null handle.
///
/// # Safety
/// `t` must be valid or null.
#[no_mangle]
pub unsafe extern "C" fn orn_trajectory_rows(t: *const OrnTrajectory) -> usize {
    t.as_ref().map_or(0, |t| t.0.rows.len())
}

/// Number of species per row, or 0 for a null handle.
///
/// # Safety
/// `t` must be valid or null.
#[no_mangle]
pub unsafe extern "C" fn orn_trajectory_species(t: *const OrnTrajectory) -> usize {
    t.as_ref().map_or(0, |t| t.0.species.len())
}

/// Copies row `row` into `time` and `values[0..len]`.
///
/// # Safety
/// `t` must be valid; `time` writable; `values` must have room for `len`
/// doubles.
#[no_mangle]
pub unsafe extern "C" fn orn_trajectory_row(
    t: *const OrnTrajectory,
    row: usize,
    time: *mut f64,
    values: *mut f64,
    len: usize,
) -> OrnStatus {
    guard(|| {
        let Some(t) = t.as_ref() else {
            return fail(OrnStatus::NullPointer, "null trajectory handle");
        };
        check_out!(time);
        let Some((tv, c)) = t.0.rows.get(row) else {
            return fail(OrnStatus::Domain, format!("row {row} out of range"));
        };
        if len != c.len() {
            return fail(
                OrnStatus::Domain,
                format!("buffer holds {len} values, row has {}", c.len()),
            );
        }
        if len > 0 {
            check_out!(values);
            ptr::copy_nonoverlapping(c.as_ptr(), values, len);
        }
        *time = *tv;
        OrnStatus::Ok
    })
}

/// # Safety
/// `t` must come from this library and not be freed twice. Null is a no-op.
#[no_mangle]
pub unsafe extern "C" fn orn_trajectory_free(t: *mut OrnTrajectory) {
    if !t.is_null() {
        drop(Box::from_raw(t));
    }
}

/// Samples the steady-state relation and returns it as JSON.
///
/// # Safety
/// `a` must be valid; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn orn_net_blackbox_json(
    a: *const OrnNet,
    samples: usize,
    seed: u64,
    out: *mut *mut c_char,
) -> OrnStatus {
    guard(|| {
        check_out!(out);
        let sys = grey_box(try_status!(net(a)));
        match sample_blackbox(&sys, &SampleOptions::new(samples, seed)) {
            Ok(tuples) => {
                let doc = TupleDocument::new("ffi", &sys, tuples.into_iter().map(|s| s.tuple).collect());
                put_string(out, to_json(&doc))
            }
            Err(e) => domain(e),
        }
    })
}

/// # Safety
/// `s` must come from this library and not be freed twice. Null is a no-op.
#[no_mangle]
pub unsafe extern "C" fn orn_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
