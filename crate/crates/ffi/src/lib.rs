// Copyright 2026 The actopt Authors
// SPDX-License-Identifier: Apache-2.0

//! C ABI over `actopt-core`.
//!
//! Netlists and profiles cross the boundary as opaque handles owned by the
//! caller and released with the matching `*_free`. Every fallible call
//! returns an [`AoStatus`]; on failure [`ao_last_error`] describes it. Strings
//! handed out by this library are released with [`ao_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use actopt_core::blif::{emit_blif, parse_blif};
use actopt_core::equiv::{check_equiv, Verdict};
use actopt_core::netlist::Netlist;
use actopt_core::opt::{run_pass, OptConfig, OptError, ThresholdMode, Transforms};
use actopt_core::pipeline::{compare_power, PipelineError};
use actopt_core::power::{PowerConfig, PowerError};
use actopt_core::profile::{read_profile, write_profile, ActivityProfile};
use actopt_core::sim::simulate;
use actopt_core::stimulus::generate_stimulus;

/// Parsed netlist.
pub struct AoNetlist(Netlist);

/// Per-net toggle counters.
pub struct AoProfile(ActivityProfile);

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AoStatus {
    Ok = 0,
    NullArgument,
    InvalidUtf8,
    ParseError,
    SimError,
    ProfileMismatch,
    ZeroBaseline,
    InvalidConfig,
    UnknownNet,
    Panic,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AoThresholdMode {
    Median = 0,
    Percentile,
    Absolute,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AoVerdict {
    Equivalent = 0,
    Mismatch,
    Inconclusive,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AoOptConfig {
    pub threshold_mode: AoThresholdMode,
    /// Percentile in (0, 100) or absolute toggle count; ignored for the median.
    pub threshold_value: f64,
    pub shannon_split: bool,
    pub driver_duplicate: bool,
    /// Negative means unlimited.
    pub max_area_growth_pct: f64,
    pub min_fanout_for_duplication: usize,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AoPowerConfig {
    pub supply_voltage: f64,
    pub clock_freq: f64,
    pub c_base: f64,
    pub c_per_fanout: f64,
    pub c_dup_overhead: f64,
    pub fanout_exponent: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct AoPowerSummary {
    pub baseline_w: f64,
    pub optimized_w: f64,
    pub baseline_luts: usize,
    pub optimized_luts: usize,
    /// Positive is power saved.
    pub power_pct: f64,
    /// Positive is area grown.
    pub area_pct: f64,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

type Res<T> = Result<T, (AoStatus, String)>;

fn err<T>(status: AoStatus, msg: impl ToString) -> Res<T> {
    Err((status, msg.to_string()))
}

/// Run `f`, record any failure, and turn panics into [`AoStatus::Panic`].
fn guard(f: impl FnOnce() -> Res<()>) -> AoStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => AoStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(&msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            AoStatus::Panic
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char) -> Res<&'a str> {
    if p.is_null() {
        return err(AoStatus::NullArgument, "null string argument");
    }
    CStr::from_ptr(p)
        .to_str()
        .or_else(|_| err(AoStatus::InvalidUtf8, "string argument is not UTF-8"))
}

unsafe fn ref_arg<'a, T>(p: *const T) -> Res<&'a T> {
    p.as_ref().ok_or((AoStatus::NullArgument, "null argument".to_string()))
}

unsafe fn put<T>(out: *mut T, v: T) -> Res<()> {
    if out.is_null() {
        return err(AoStatus::NullArgument, "null output pointer");
    }
    out.write(v);
    Ok(())
}

fn c_string(s: String) -> *mut c_char {
    CString::new(s).map_or(ptr::null_mut(), CString::into_raw)
}

fn pipeline_status(e: &PipelineError) -> AoStatus {
    match e {
        PipelineError::Power(PowerError::ZeroBaseline(_)) => AoStatus::ZeroBaseline,
        PipelineError::Power(PowerError::BadConfig(_)) => AoStatus::InvalidConfig,
        PipelineError::Power(_) | PipelineError::Equiv(_) => AoStatus::ProfileMismatch,
        _ => AoStatus::SimError,
    }
}

/// Message for the last failed call on this thread. Valid until the next call
/// into this library from the same thread; never null.
#[no_mangle]
pub extern "C" fn ao_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Release a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn ao_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parse BLIF text into a new netlist handle.
///
/// # Safety
/// `blif` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ao_netlist_parse(blif: *const c_char, out: *mut *mut AoNetlist) -> AoStatus {
    guard(|| {
        let text = str_arg(blif)?;
        let nl = parse_blif(text).or_else(|e| err(AoStatus::ParseError, e))?;
        put(out, Box::into_raw(Box::new(AoNetlist(nl))))
    })
}

/// # Safety
/// `nl` must come from this library and not have been freed. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn ao_netlist_free(nl: *mut AoNetlist) {
    if !nl.is_null() {
        drop(Box::from_raw(nl));
    }
}

/// Canonical BLIF text of a netlist; free with [`ao_string_free`].
///
/// # Safety
/// `nl` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ao_netlist_emit(nl: *const AoNetlist, out: *mut *mut c_char) -> AoStatus {
    guard(|| put(out, c_string(emit_blif(&ref_arg(nl)?.0))))
}

/// LUT count (cells with at least one input); 0 for null.
///
/// # Safety
/// `nl` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ao_netlist_area_luts(nl: *const AoNetlist) -> usize {
    nl.as_ref().map_or(0, |n| n.0.area_luts())
}

/// Simulate under generated random stimulus.
///
/// # Safety
/// `nl` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ao_simulate(nl: *const AoNetlist, cycles: u64, seed: u64, out: *mut *mut AoProfile) -> AoStatus {
    guard(|| {
        let nl = &ref_arg(nl)?.0;
        let stim = generate_stimulus(nl, cycles, seed).or_else(|e| err(AoStatus::SimError, e))?;
        let p = simulate(nl, &stim).or_else(|e| err(AoStatus::SimError, e))?;
        put(out, Box::into_raw(Box::new(AoProfile(p))))
    })
}

/// # Safety
/// `text` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ao_profile_read(text: *const c_char, out: *mut *mut AoProfile) -> AoStatus {
    guard(|| {
        let p = read_profile(str_arg(text)?).or_else(|e| err(AoStatus::ParseError, e))?;
        put(out, Box::into_raw(Box::new(AoProfile(p))))
    })
}

/// Profile text; free with [`ao_string_free`].
///
/// # Safety
/// `p` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ao_profile_write(p: *const AoProfile, out: *mut *mut c_char) -> AoStatus {
    guard(|| put(out, c_string(write_profile(&ref_arg(p)?.0))))
}

/// Toggle count of one net.
///
/// # Safety
/// `p` must be a live handle, `net` a NUL-terminated string, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ao_profile_counter(p: *const AoProfile, net: *const c_char, out: *mut u64) -> AoStatus {
    guard(|| {
        let name = str_arg(net)?;
        let c = ref_arg(p)?
            .0
            .counter(name)
            .ok_or((AoStatus::UnknownNet, format!("unknown net `{name}`")))?;
        put(out, c)
    })
}

/// # Safety
/// `p` must come from this library and not have been freed. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn ao_profile_free(p: *mut AoProfile) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

#[no_mangle]
pub extern "C" fn ao_opt_config_default() -> AoOptConfig {
    let d = OptConfig::default();
    AoOptConfig {
        threshold_mode: AoThresholdMode::Median,
        threshold_value: 0.0,
        shannon_split: d.transforms.shannon_split,
        driver_duplicate: d.transforms.driver_duplicate,
        max_area_growth_pct: -1.0,
        min_fanout_for_duplication: d.min_fanout_for_duplication,
    }
}

#[no_mangle]
pub extern "C" fn ao_power_config_default() -> AoPowerConfig {
    let d = PowerConfig::default();
    AoPowerConfig {
        supply_voltage: d.supply_voltage,
        clock_freq: d.clock_freq,
        c_base: d.c_base,
        c_per_fanout: d.c_per_fanout,
        c_dup_overhead: d.c_dup_overhead,
        fanout_exponent: d.fanout_exponent,
    }
}

fn opt_config(c: &AoOptConfig) -> Res<OptConfig> {
    let threshold = match c.threshold_mode {
        AoThresholdMode::Median => ThresholdMode::Median,
        AoThresholdMode::Percentile => {
            let q = c.threshold_value;
            if !(q > 0.0 && q < 100.0) {
                return err(AoStatus::InvalidConfig, OptError::BadPercentile(q));
            }
            ThresholdMode::Percentile(q)
        }
        AoThresholdMode::Absolute => {
            let v = c.threshold_value;
            if !(v >= 0.0 && v.is_finite() && v.fract() == 0.0) {
                return err(AoStatus::InvalidConfig, "absolute threshold must be a nonnegative integer");
            }
            ThresholdMode::Absolute(v as u64)
        }
    };
    if c.min_fanout_for_duplication < 2 {
        return err(AoStatus::InvalidConfig, "min_fanout_for_duplication must be at least 2");
    }
    Ok(OptConfig {
        threshold,
        transforms: Transforms {
            shannon_split: c.shannon_split,
            driver_duplicate: c.driver_duplicate,
        },
        max_area_growth_pct: (c.max_area_growth_pct >= 0.0).then_some(c.max_area_growth_pct),
        min_fanout_for_duplication: c.min_fanout_for_duplication,
    })
}

fn power_config(c: &AoPowerConfig) -> PowerConfig {
    PowerConfig {
        supply_voltage: c.supply_voltage,
        clock_freq: c.clock_freq,
        c_base: c.c_base,
        c_per_fanout: c.c_per_fanout,
        c_dup_overhead: c.c_dup_overhead,
        fanout_exponent: c.fanout_exponent,
    }
}

/// Run the optimization pass. `report` (optional, may be null) receives the
/// pass report text; free it with [`ao_string_free`].
///
/// # Safety
/// Handles must be live, `cfg` valid, `out` writable, `report` null or writable.
#[no_mangle]
pub unsafe extern "C" fn ao_run_pass(
    nl: *const AoNetlist,
    profile: *const AoProfile,
    cfg: *const AoOptConfig,
    out: *mut *mut AoNetlist,
    report: *mut *mut c_char,
) -> AoStatus {
    guard(|| {
        let nl = &ref_arg(nl)?.0;
        let p = &ref_arg(profile)?.0;
        let cfg = opt_config(ref_arg(cfg)?)?;
        let (opt, rep) = run_pass(nl, p, &cfg).or_else(|e| {
            let status = match e {
                OptError::Profile(_) => AoStatus::ProfileMismatch,
                _ => AoStatus::InvalidConfig,
            };
            err(status, e)
        })?;
        if out.is_null() {
            return err(AoStatus::NullArgument, "null output pointer");
        }
        if !report.is_null() {
            report.write(c_string(rep.to_text()));
        }
        put(out, Box::into_raw(Box::new(AoNetlist(opt))))
    })
}

/// Modeled power of `base` and `opt` under one shared generated stimulus.
///
/// # Safety
/// Handles must be live, `cfg` valid, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ao_compare_power(
    base: *const AoNetlist,
    opt: *const AoNetlist,
    cycles: u64,
    seed: u64,
    cfg: *const AoPowerConfig,
    out: *mut AoPowerSummary,
) -> AoStatus {
    guard(|| {
        let base = &ref_arg(base)?.0;
        let opt = &ref_arg(opt)?.0;
        let cfg = power_config(ref_arg(cfg)?);
        let stim = generate_stimulus(base, cycles, seed).or_else(|e| err(AoStatus::SimError, e))?;
        let (_, _, rb, ro) = compare_power(base, opt, &stim, &cfg).map_err(|e| (pipeline_status(&e), e.to_string()))?;
        let d = ro.delta.expect("optimized report carries a delta");
        put(
            out,
            AoPowerSummary {
                baseline_w: rb.total_power,
                optimized_w: ro.total_power,
                baseline_luts: rb.area_luts,
                optimized_luts: ro.area_luts,
                power_pct: d.power_pct,
                area_pct: d.area_pct,
            },
        )
    })
}

/// Equivalence check: exhaustive for small combinational netlists, otherwise
/// lockstep over `cycles` generated cycles. `coverage` may be null.
///
/// # Safety
/// Handles must be live, `verdict` writable, `coverage` null or writable.
#[no_mangle]
pub unsafe extern "C" fn ao_check_equiv(
    a: *const AoNetlist,
    b: *const AoNetlist,
    cycles: u64,
    seed: u64,
    verdict: *mut AoVerdict,
    coverage: *mut u64,
) -> AoStatus {
    guard(|| {
        let a = &ref_arg(a)?.0;
        let b = &ref_arg(b)?.0;
        let stim = generate_stimulus(a, cycles, seed).or_else(|e| err(AoStatus::SimError, e))?;
        let (_, r) = check_equiv(a, b, &stim).or_else(|e| err(AoStatus::ProfileMismatch, e))?;
        let v = match r.verdict {
            Verdict::Equivalent => AoVerdict::Equivalent,
            Verdict::Mismatch => AoVerdict::Mismatch,
            Verdict::Inconclusive => AoVerdict::Inconclusive,
        };
        if !coverage.is_null() {
            coverage.write(r.coverage);
        }
        put(verdict, v)
    })
}
