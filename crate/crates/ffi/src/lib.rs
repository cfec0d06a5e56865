//! C ABI over `fourlevel`.
//!
//! Every function returns an [`FmStatus`]. On failure a message is kept in
//! thread-local storage and can be read with [`fm_last_error`]. Results are
//! written through caller-provided out pointers; time series and design
//! results are opaque handles released with their `_free` function.
//!
//! Couplings are angular frequencies in radians per unit time.

#![allow(clippy::missing_safety_doc)]

use fourlevel::dynamics::TransferSolution;
use fourlevel::triples::TransferMatch;
use fourlevel::{
    amplitudes_closed_form, build_hamiltonian, couplings_from_pair, design_search, detect_transfer_condition,
    enumerate_primitive, euclid_triple, hopf_map, oracle_propagate, population_series, propagate_factored,
    transfer_time, CouplingSet, DesignProblem, DesignResult, Error, OddPair, PythTriple, StateAmplitudes, TimeSeries,
};
use num_complex::Complex64;
use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FmStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    InvalidPair = 3,
    InvalidState = 4,
    NotSymmetric = 5,
    DegenerateInput = 6,
    NotLadder = 7,
    InvalidCoordinates = 8,
    DisconnectedSector = 9,
    NoDynamics = 10,
    NumericalFailure = 11,
    NoConvergence = 12,
    IndexOutOfRange = 13,
    Panic = 14,
}

impl From<&Error> for FmStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::InvalidArgument(_) => FmStatus::InvalidArgument,
            Error::DegenerateInput { .. } => FmStatus::DegenerateInput,
            Error::NotLadder { .. } => FmStatus::NotLadder,
            Error::InvalidCoordinates(_) => FmStatus::InvalidCoordinates,
            Error::InvalidState { .. } => FmStatus::InvalidState,
            Error::DisconnectedSector { .. } => FmStatus::DisconnectedSector,
            Error::NoDynamics => FmStatus::NoDynamics,
            Error::InvalidPair(_) => FmStatus::InvalidPair,
            Error::NotSymmetric { .. } => FmStatus::NotSymmetric,
            Error::NumericalFailure(_) => FmStatus::NumericalFailure,
            Error::NoConvergence { .. } => FmStatus::NoConvergence,
        }
    }
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct FmCouplings {
    pub v12: f64,
    pub v23: f64,
    pub v34: f64,
    pub v14: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct FmHopf {
    pub xi0: f64,
    pub xi1: f64,
    pub xi2: f64,
    pub xi3: f64,
}

/// `vL tau = q pi/2`, `vR tau = p pi/2`.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct FmTransfer {
    pub tau: f64,
    pub p: u64,
    pub q: u64,
    pub omega: f64,
    pub v_l: f64,
    pub v_r: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct FmTriple {
    pub a: u64,
    pub b: u64,
    pub c: u64,
}

/// Mode amplitudes `a1..a4` split into real and imaginary parts.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct FmAmplitudes {
    pub re: [f64; 4],
    pub im: [f64; 4],
}

/// Opaque time series from [`fm_series_new`].
pub struct FmSeries(TimeSeries);

/// Opaque optimizer result from [`fm_design_search`].
pub struct FmDesign(DesignResult);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn fail(status: FmStatus, msg: impl Into<String>) -> FmStatus {
    set_error(msg.into());
    status
}

/// Runs `f`, turning errors and panics into status codes.
fn guard(f: impl FnOnce() -> Result<(), FmStatus>) -> FmStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => FmStatus::Ok,
        Ok(Err(status)) => status,
        Err(_) => fail(FmStatus::Panic, "internal panic"),
    }
}

fn lib_err(e: Error) -> FmStatus {
    let status = FmStatus::from(&e);
    fail(status, e.to_string())
}

unsafe fn read<'a, T>(p: *const T, name: &str) -> Result<&'a T, FmStatus> {
    p.as_ref()
        .ok_or_else(|| fail(FmStatus::NullPointer, format!("{name} is null")))
}

unsafe fn write<T>(p: *mut T, value: T, name: &str) -> Result<(), FmStatus> {
    if p.is_null() {
        return Err(fail(FmStatus::NullPointer, format!("{name} is null")));
    }
    p.write(value);
    Ok(())
}

fn couplings(c: &FmCouplings) -> Result<CouplingSet, FmStatus> {
    CouplingSet::new(c.v12, c.v23, c.v34, c.v14).map_err(lib_err)
}

fn to_fm_couplings(c: &CouplingSet) -> FmCouplings {
    FmCouplings {
        v12: c.v12,
        v23: c.v23,
        v34: c.v34,
        v14: c.v14,
    }
}

fn to_fm_transfer(s: &TransferSolution) -> FmTransfer {
    FmTransfer {
        tau: s.tau,
        p: s.p,
        q: s.q,
        omega: s.omega,
        v_l: s.v_l,
        v_r: s.v_r,
    }
}

fn to_fm_triple(t: &PythTriple) -> FmTriple {
    FmTriple { a: t.a, b: t.b, c: t.c }
}

fn to_fm_amplitudes(s: &StateAmplitudes) -> FmAmplitudes {
    let a = s.as_array();
    FmAmplitudes {
        re: a.map(|z| z.re),
        im: a.map(|z| z.im),
    }
}

fn from_fm_amplitudes(a: &FmAmplitudes) -> StateAmplitudes {
    StateAmplitudes::from_array(std::array::from_fn(|i| Complex64::new(a.re[i], a.im[i])))
}

unsafe fn write_match(
    m: Option<TransferMatch>,
    triple: *mut FmTriple,
    solution: *mut FmTransfer,
    found: *mut bool,
) -> Result<(), FmStatus> {
    write(found, m.is_some(), "found")?;
    if let Some(m) = m {
        if !triple.is_null() {
            triple.write(to_fm_triple(&m.triple));
        }
        if !solution.is_null() {
            solution.write(to_fm_transfer(&m.solution));
        }
    }
    Ok(())
}

/// Message for the last failed call on this thread, or null. The pointer
/// stays valid until the next `fm_` call on the same thread.
#[no_mangle]
pub extern "C" fn fm_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn fm_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

#[no_mangle]
pub unsafe extern "C" fn fm_hopf_map(c: *const FmCouplings, out: *mut FmHopf) -> FmStatus {
    guard(|| {
        let x = hopf_map(&couplings(read(c, "c")?)?).map_err(lib_err)?;
        write(
            out,
            FmHopf {
                xi0: x.xi0,
                xi1: x.xi1,
                xi2: x.xi2,
                xi3: x.xi3,
            },
            "out",
        )
    })
}

/// Real amplitudes `a1(t)`, `a3(t)` starting from mode 1.
#[no_mangle]
pub unsafe extern "C" fn fm_closed_form(c: *const FmCouplings, t: f64, a1: *mut f64, a3: *mut f64) -> FmStatus {
    guard(|| {
        let (x1, x3) = amplitudes_closed_form(&couplings(read(c, "c")?)?, t).map_err(lib_err)?;
        write(a1, x1, "a1")?;
        write(a3, x3, "a3")
    })
}

/// Evolves `psi0` to time `t` through the factored propagator.
#[no_mangle]
pub unsafe extern "C" fn fm_propagate(
    c: *const FmCouplings,
    psi0: *const FmAmplitudes,
    t: f64,
    out: *mut FmAmplitudes,
) -> FmStatus {
    guard(|| {
        let psi = from_fm_amplitudes(read(psi0, "psi0")?);
        let r = propagate_factored(&couplings(read(c, "c")?)?, &psi, t).map_err(lib_err)?;
        write(out, to_fm_amplitudes(&r), "out")
    })
}

/// Evolves `psi0` to time `t` by diagonalizing the 4x4 Hamiltonian.
#[no_mangle]
pub unsafe extern "C" fn fm_oracle_propagate(
    c: *const FmCouplings,
    psi0: *const FmAmplitudes,
    t: f64,
    out: *mut FmAmplitudes,
) -> FmStatus {
    guard(|| {
        let psi = from_fm_amplitudes(read(psi0, "psi0")?);
        let h = build_hamiltonian(&couplings(read(c, "c")?)?).map_err(lib_err)?;
        let r = oracle_propagate(&h, &psi, t).map_err(lib_err)?;
        write(out, to_fm_amplitudes(&r), "out")
    })
}

/// First complete 1->3 transfer time. `*found` is false when the couplings
/// never transfer completely.
#[no_mangle]
pub unsafe extern "C" fn fm_transfer_time(
    c: *const FmCouplings,
    tol: f64,
    out: *mut FmTransfer,
    found: *mut bool,
) -> FmStatus {
    guard(|| {
        let sol = transfer_time(&couplings(read(c, "c")?)?, tol).map_err(lib_err)?;
        write(found, sol.is_some(), "found")?;
        match sol {
            Some(s) => write(out, to_fm_transfer(&s), "out"),
            None => Ok(()),
        }
    })
}

#[no_mangle]
pub unsafe extern "C" fn fm_euclid_triple(p: u64, q: u64, out: *mut FmTriple) -> FmStatus {
    guard(|| {
        let pair = OddPair::new(p, q).map_err(lib_err)?;
        write(out, to_fm_triple(&euclid_triple(&pair)), "out")
    })
}

/// Writes up to `cap` primitive triples with hypotenuse at most `c_max`
/// into `buf` and the total count into `*count`. Pass `buf = NULL` and
/// `cap = 0` to query the count.
#[no_mangle]
pub unsafe extern "C" fn fm_triples(c_max: u64, buf: *mut FmTriple, cap: usize, count: *mut usize) -> FmStatus {
    guard(|| {
        let all = enumerate_primitive(c_max);
        if cap > 0 && buf.is_null() {
            return Err(fail(FmStatus::NullPointer, "buf is null"));
        }
        for (i, t) in all.iter().take(cap).enumerate() {
            buf.add(i).write(to_fm_triple(t));
        }
        write(count, all.len(), "count")
    })
}

/// Ladder couplings whose first complete transfer happens at `tau`.
#[no_mangle]
pub unsafe extern "C" fn fm_couplings_from_pair(
    p: u64,
    q: u64,
    tau: f64,
    out: *mut FmCouplings,
    solution: *mut FmTransfer,
) -> FmStatus {
    guard(|| {
        let pair = OddPair::new(p, q).map_err(lib_err)?;
        let (c, s) = couplings_from_pair(&pair, tau).map_err(lib_err)?;
        write(out, to_fm_couplings(&c), "out")?;
        if !solution.is_null() {
            solution.write(to_fm_transfer(&s));
        }
        Ok(())
    })
}

/// Checks the Pythagorean transfer condition. `triple` and `solution` may be
/// null; they are written only when `*found` is true.
#[no_mangle]
pub unsafe extern "C" fn fm_detect(
    c: *const FmCouplings,
    tol: f64,
    triple: *mut FmTriple,
    solution: *mut FmTransfer,
    found: *mut bool,
) -> FmStatus {
    guard(|| {
        let m = detect_transfer_condition(&couplings(read(c, "c")?)?, tol).map_err(lib_err)?;
        write_match(m, triple, solution, found)
    })
}

/// Samples the evolution from mode 1 on `steps + 1` uniform points of
/// `[0, t_max]`.
#[no_mangle]
pub unsafe extern "C" fn fm_series_new(
    c: *const FmCouplings,
    t_max: f64,
    steps: usize,
    out: *mut *mut FmSeries,
) -> FmStatus {
    guard(|| {
        let s = population_series(&couplings(read(c, "c")?)?, t_max, steps).map_err(lib_err)?;
        write(out, Box::into_raw(Box::new(FmSeries(s))), "out")
    })
}

/// Number of samples, or 0 for a null handle.
#[no_mangle]
pub unsafe extern "C" fn fm_series_len(s: *const FmSeries) -> usize {
    s.as_ref().map_or(0, |s| s.0.times.len())
}

#[no_mangle]
pub unsafe extern "C" fn fm_series_get(
    s: *const FmSeries,
    index: usize,
    t: *mut f64,
    amplitudes: *mut FmAmplitudes,
) -> FmStatus {
    guard(|| {
        let s = &read(s, "series")?.0;
        if index >= s.times.len() {
            return Err(fail(
                FmStatus::IndexOutOfRange,
                format!("index {index} >= {}", s.times.len()),
            ));
        }
        write(t, s.times[index], "t")?;
        write(amplitudes, to_fm_amplitudes(&s.amplitudes[index]), "amplitudes")
    })
}

#[no_mangle]
pub unsafe extern "C" fn fm_series_free(s: *mut FmSeries) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// Multistart search for couplings reaching mode 3 at `tau`, every coupling
/// bounded to `[lo, hi]`. `diamond` also frees `v14`. `starts = 0` picks
/// the default.
#[no_mangle]
pub unsafe extern "C" fn fm_design_search(
    tau: f64,
    lo: f64,
    hi: f64,
    seed: u64,
    starts: usize,
    diamond: bool,
    out: *mut *mut FmDesign,
) -> FmStatus {
    guard(|| {
        let mut prob = if diamond {
            DesignProblem::diamond(tau, lo, hi, seed)
        } else {
            DesignProblem::ladder(tau, lo, hi, seed)
        };
        if starts > 0 {
            prob.starts = starts;
        }
        let r = design_search(&prob).map_err(lib_err)?;
        write(out, Box::into_raw(Box::new(FmDesign(r))), "out")
    })
}

#[no_mangle]
pub unsafe extern "C" fn fm_design_couplings(d: *const FmDesign, out: *mut FmCouplings) -> FmStatus {
    guard(|| write(out, to_fm_couplings(&read(d, "design")?.0.couplings), "out"))
}

/// `1 - |a3(tau)|²` at the returned couplings, or NaN for a null handle.
#[no_mangle]
pub unsafe extern "C" fn fm_design_infidelity(d: *const FmDesign) -> f64 {
    d.as_ref().map_or(f64::NAN, |d| d.0.infidelity)
}

#[no_mangle]
pub unsafe extern "C" fn fm_design_match(
    d: *const FmDesign,
    triple: *mut FmTriple,
    solution: *mut FmTransfer,
    found: *mut bool,
) -> FmStatus {
    guard(|| write_match(read(d, "design")?.0.matched, triple, solution, found))
}

#[no_mangle]
pub unsafe extern "C" fn fm_design_free(d: *mut FmDesign) {
    if !d.is_null() {
        drop(Box::from_raw(d));
    }
}
