// Copyright 2026 The actopt Authors
// SPDX-License-Identifier: Apache-2.0

use std::ffi::{c_char, CStr, CString};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::ptr;

use actopt::*;

const AND_OR: &str = ".model m\n.inputs a b c\n.outputs y z\n.names a b t\n11 1\n\
    .names t c y\n1- 1\n-1 1\n.names t z\n1 1\n.end\n";

fn cstr(s: &str) -> CString {
    CString::new(s).unwrap()
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(ao_last_error()) }.to_string_lossy().into_owned()
}

fn parse(text: &str) -> *mut AoNetlist {
    let mut nl = ptr::null_mut();
    let src = cstr(text);
    assert_eq!(unsafe { ao_netlist_parse(src.as_ptr(), &mut nl) }, AoStatus::Ok);
    nl
}

fn take_string(p: *mut c_char) -> String {
    let s = unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned();
    unsafe { ao_string_free(p) };
    s
}

#[test]
fn parse_emit_and_free() {
    let nl = parse(AND_OR);
    assert_eq!(unsafe { ao_netlist_area_luts(nl) }, 3);
    let mut text = ptr::null_mut();
    assert_eq!(unsafe { ao_netlist_emit(nl, &mut text) }, AoStatus::Ok);
    let emitted = take_string(text);
    assert_eq!(emitted, actopt_core::emit_blif(&actopt_core::parse_blif(AND_OR).unwrap()));
    unsafe { ao_netlist_free(nl) };
}

#[test]
fn errors_are_reported() {
    let mut nl = ptr::null_mut();
    let bad = cstr(".model x\n.inputs a\n.outputs y\n.names a y\n2 1\n.end\n");
    assert_eq!(unsafe { ao_netlist_parse(bad.as_ptr(), &mut nl) }, AoStatus::ParseError);
    assert!(nl.is_null());
    assert!(last_error().starts_with("5:1:"), "{}", last_error());
    assert_eq!(unsafe { ao_netlist_parse(ptr::null(), &mut nl) }, AoStatus::NullArgument);
    let ok = cstr(AND_OR);
    assert_eq!(unsafe { ao_netlist_parse(ok.as_ptr(), ptr::null_mut()) }, AoStatus::NullArgument);
    let mut prof = ptr::null_mut();
    assert_eq!(unsafe { ao_simulate(ptr::null(), 10, 1, &mut prof) }, AoStatus::NullArgument);
    let nl = parse(AND_OR);
    assert_eq!(unsafe { ao_simulate(nl, 1, 1, &mut prof) }, AoStatus::SimError);
    unsafe {
        ao_netlist_free(nl);
        ao_netlist_free(ptr::null_mut());
        ao_profile_free(ptr::null_mut());
        ao_string_free(ptr::null_mut());
    }
}

#[test]
fn simulate_profile_round_trip() {
    let nl = parse(AND_OR);
    let mut prof = ptr::null_mut();
    assert_eq!(unsafe { ao_simulate(nl, 256, 9, &mut prof) }, AoStatus::Ok);
    let mut text = ptr::null_mut();
    assert_eq!(unsafe { ao_profile_write(prof, &mut text) }, AoStatus::Ok);
    let text = take_string(text);
    assert!(text.starts_with("simopt-profile v1 cycles=256 "));
    let mut again = ptr::null_mut();
    let src = cstr(&text);
    assert_eq!(unsafe { ao_profile_read(src.as_ptr(), &mut again) }, AoStatus::Ok);
    let (mut a, mut b) = (0u64, 0u64);
    let net = cstr("y");
    unsafe {
        assert_eq!(ao_profile_counter(prof, net.as_ptr(), &mut a), AoStatus::Ok);
        assert_eq!(ao_profile_counter(again, net.as_ptr(), &mut b), AoStatus::Ok);
    }
    assert_eq!(a, b);
    assert!(a > 0 && a <= 256);
    unsafe {
        ao_profile_free(prof);
        ao_profile_free(again);
        ao_netlist_free(nl);
    }
}

#[test]
fn pass_power_and_check() {
    let nl = parse(AND_OR);
    let mut prof = ptr::null_mut();
    assert_eq!(unsafe { ao_simulate(nl, 1024, 3, &mut prof) }, AoStatus::Ok);
    let cfg = ao_opt_config_default();
    assert_eq!(cfg.min_fanout_for_duplication, 2);
    let mut opt = ptr::null_mut();
    let mut report = ptr::null_mut();
    assert_eq!(unsafe { ao_run_pass(nl, prof, &cfg, &mut opt, &mut report) }, AoStatus::Ok);
    let report = take_string(report);
    assert!(report.contains("summary "), "{report}");
    assert!(unsafe { ao_netlist_area_luts(opt) } > 3);

    let mut v = AoVerdict::Mismatch;
    let mut coverage = 0;
    assert_eq!(unsafe { ao_check_equiv(nl, opt, 100, 1, &mut v, &mut coverage) }, AoStatus::Ok);
    assert_eq!((v, coverage), (AoVerdict::Equivalent, 8));

    let pcfg = ao_power_config_default();
    let mut sum = AoPowerSummary::default();
    assert_eq!(unsafe { ao_compare_power(nl, opt, 1024, 3, &pcfg, &mut sum) }, AoStatus::Ok);
    assert_eq!(sum.baseline_luts, 3);
    assert!(sum.area_pct > 0.0);
    assert!(sum.optimized_w >= sum.baseline_w);

    let bad = AoOptConfig {
        threshold_mode: AoThresholdMode::Percentile,
        threshold_value: 150.0,
        ..cfg
    };
    let mut other = ptr::null_mut();
    assert_eq!(
        unsafe { ao_run_pass(nl, prof, &bad, &mut other, ptr::null_mut()) },
        AoStatus::InvalidConfig
    );
    let zero = AoPowerConfig { c_base: 0.0, ..pcfg };
    assert_eq!(unsafe { ao_compare_power(nl, opt, 64, 3, &zero, &mut sum) }, AoStatus::InvalidConfig);
    unsafe {
        ao_netlist_free(opt);
        ao_profile_free(prof);
        ao_netlist_free(nl);
    }
}

#[test]
fn profile_mismatch_is_distinct() {
    let nl = parse(AND_OR);
    let text = cstr("simopt-profile v1 cycles=4 digest=0000000000000000\nzz 1\n");
    let mut prof = ptr::null_mut();
    assert_eq!(unsafe { ao_profile_read(text.as_ptr(), &mut prof) }, AoStatus::Ok);
    let cfg = ao_opt_config_default();
    let mut opt = ptr::null_mut();
    assert_eq!(
        unsafe { ao_run_pass(nl, prof, &cfg, &mut opt, ptr::null_mut()) },
        AoStatus::ProfileMismatch
    );
    unsafe {
        ao_profile_free(prof);
        ao_netlist_free(nl);
    }
}

fn header() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("include")
}

#[test]
fn header_declares_the_api() {
    let h = std::fs::read_to_string(header().join("actopt.h")).unwrap();
    for sym in [
        "typedef struct AoNetlist AoNetlist;",
        "AO_STATUS_PROFILE_MISMATCH",
        "ao_netlist_parse(",
        "ao_simulate(",
        "ao_run_pass(",
        "ao_compare_power(",
        "ao_check_equiv(",
        "ao_last_error(",
        "ao_string_free(",
    ] {
        assert!(h.contains(sym), "missing {sym}");
    }
}

/// Build and run a C program against the header and static library.
#[test]
fn c_program_links_and_runs() {
    let Ok(cc) = which_cc() else {
        eprintln!("no C compiler found; skipping");
        return;
    };
    let exe = std::env::current_exe().unwrap();
    let target = exe.parent().unwrap().parent().unwrap();
    let lib = target.join("libactopt.a");
    if !lib.exists() {
        eprintln!("{} not built; skipping", lib.display());
        return;
    }
    let out = Path::new(env!("CARGO_TARGET_TMPDIR")).join("actopt_smoke");
    let src = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/c/smoke.c");
    let status = Command::new(&cc)
        .args(["-std=c11", "-Wall", "-Werror", "-I"])
        .arg(header())
        .arg(&src)
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&out)
        .status()
        .unwrap();
    assert!(status.success(), "C build failed");
    let run = Command::new(&out).output().unwrap();
    assert!(run.status.success(), "exit {:?}", run.status.code());
    let stdout = String::from_utf8(run.stdout).unwrap();
    assert!(stdout.starts_with("q0=512 q1=256 luts=2->"), "{stdout}");
}

fn which_cc() -> Result<String, ()> {
    for cc in ["cc", "gcc", "clang"] {
        if Command::new(cc).arg("--version").output().is_ok() {
            return Ok(cc.to_string());
        }
    }
    Err(())
}
