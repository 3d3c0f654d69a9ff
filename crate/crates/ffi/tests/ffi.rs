use std::ffi::CStr;
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use dressed_ffi::*;

fn reference() -> *mut DressedModel {
    let mut m = ptr::null_mut();
    assert_eq!(unsafe { dressed_model_new(0.5, 1.0, 0.01, &mut m) }, DressedStatus::Ok);
    assert!(!m.is_null());
    m
}

fn last_error() -> String {
    let mut buf = [0 as std::ffi::c_char; 512];
    let n = unsafe { dressed_last_error(buf.as_mut_ptr(), buf.len()) };
    assert!(n > 0);
    unsafe { CStr::from_ptr(buf.as_ptr()) }.to_string_lossy().into_owned()
}

#[test]
fn moments_match_the_library() {
    let m = reference();
    let mut out = DressedMoments::default();
    assert_eq!(unsafe { dressed_model_moments(m, &mut out) }, DressedStatus::Ok);
    let params = dressed::model::ModelParams::reduced(0.5, 1.0, 0.01).unwrap();
    let pi = dressed::fano::pi_distribution(&params, &Default::default()).unwrap();
    let direct = dressed::observables::compute_moments(&params, &pi).unwrap();
    assert_eq!(out.mean_excitation, direct.mean_excitation);
    assert_eq!(out.a_squared, direct.a_squared);
    assert!((out.atom_energy - (0.5 + direct.mean_excitation)).abs() < 1e-15);
    let mut norm = 0.0;
    assert_eq!(unsafe { dressed_model_pi_norm(m, &mut norm) }, DressedStatus::Ok);
    assert!((norm - 1.0).abs() < 1e-6);
    unsafe { dressed_model_free(m) };
}

#[test]
fn field_queries_and_chi() {
    let m = reference();
    let (mut x, mut p, mut n, mut chi) = (0.0, 0.0, -1.0, 1.0);
    assert_eq!(unsafe { dressed_model_field_correlations(m, 1.0, &mut x, &mut p) }, DressedStatus::Ok);
    assert!(x < 0.0 && p > 0.0);
    assert_eq!(unsafe { dressed_model_photon_density(m, 1.0, &mut n) }, DressedStatus::Ok);
    assert!(n > 0.0);
    assert_eq!(unsafe { dressed_model_log_chi_atomic(m, 0.0, 0.0, &mut chi) }, DressedStatus::Ok);
    assert_eq!(chi, 0.0);
    // ln χ(η) = ⟨a²⟩ Re η² − ⟨a†a⟩ |η|²
    let mut mo = DressedMoments::default();
    assert_eq!(unsafe { dressed_model_moments(m, &mut mo) }, DressedStatus::Ok);
    assert_eq!(unsafe { dressed_model_log_chi_atomic(m, 0.3, 0.1, &mut chi) }, DressedStatus::Ok);
    let expected = mo.a_squared * 0.08 - mo.mean_excitation * 0.1;
    assert!((chi - expected).abs() < 1e-8 * expected.abs(), "{chi} vs {expected}");
    assert_eq!(unsafe { dressed_model_field_correlations(m, -1.0, &mut x, &mut p) }, DressedStatus::Physics);
    unsafe { dressed_model_free(m) };
}

#[test]
fn errors_are_reported() {
    let mut m = ptr::null_mut();
    assert_eq!(unsafe { dressed_model_new(0.01, 1.0, 0.01, &mut m) }, DressedStatus::Physics);
    assert!(m.is_null());
    assert!(last_error().contains("threshold"));
    assert_eq!(unsafe { dressed_model_new(-1.0, 1.0, 0.01, &mut m) }, DressedStatus::Physics);
    assert_eq!(unsafe { dressed_model_new(0.5, 1.0, 0.01, ptr::null_mut()) }, DressedStatus::NullPointer);
    let mut v = 0.0;
    assert_eq!(unsafe { dressed_model_pi_norm(ptr::null(), &mut v) }, DressedStatus::NullPointer);
    assert_eq!(unsafe { dressed_pair_ground_energy(1.0, 1.0, 1.2, &mut v) }, DressedStatus::Physics);
    assert_eq!(unsafe { dressed_pair_ground_energy(1.0, 1.0, 0.6, &mut v) }, DressedStatus::Ok);
    assert!((v - 0.9486833).abs() < 1e-7);
    assert_eq!(unsafe { dressed_last_error(ptr::null_mut(), 0) }, 0);
    unsafe { dressed_model_free(ptr::null_mut()) };
    let version = unsafe { CStr::from_ptr(dressed_version()) };
    assert_eq!(version.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

#[test]
fn header_declares_the_api() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/dressed.h")).unwrap();
    for name in [
        "dressed_model_new",
        "dressed_model_free",
        "dressed_model_moments",
        "dressed_model_photon_density",
        "dressed_model_field_correlations",
        "dressed_model_log_chi_atomic",
        "dressed_pair_ground_energy",
        "dressed_last_error",
        "dressed_version",
        "typedef struct DressedModel DressedModel",
    ] {
        assert!(header.contains(name), "{name} missing from header");
    }
}

/// Compiles a C program against the header and the static archive.
#[test]
fn c_program_links_and_runs() {
    let profile_dir: PathBuf = std::env::current_exe().unwrap().parent().unwrap().parent().unwrap().into();
    let archive = profile_dir.join("libdressed_ffi.a");
    assert!(archive.exists(), "static archive not found at {}", archive.display());
    let manifest = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let exe = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("smoke");
    let status = Command::new("cc")
        .arg(manifest.join("tests/c/smoke.c"))
        .arg("-I")
        .arg(manifest.join("include"))
        .arg(&archive)
        .args(["-lm", "-lpthread", "-ldl", "-o"])
        .arg(&exe)
        .status()
        .expect("C compiler");
    assert!(status.success());
    let out = Command::new(&exe).output().unwrap();
    assert!(out.status.success(), "smoke exited with {:?}", out.status.code());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with(env!("CARGO_PKG_VERSION")));
}
