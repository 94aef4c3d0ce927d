use std::ffi::{CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use weinorman_ffi::*;

fn algebra(spec: &str) -> *mut WnAlgebra {
    let s = CString::new(spec).unwrap();
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { wn_algebra_new(s.as_ptr(), &mut out) }, WnStatus::Ok);
    out
}

fn hierarchy(alg: *const WnAlgebra, mode: WnMode) -> *mut WnHierarchy {
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { wn_hierarchy_new(alg, mode, &mut out) }, WnStatus::Ok);
    out
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(wn_last_error()) }.to_string_lossy().into_owned()
}

#[test]
fn solve_and_verify() {
    let alg = algebra("A2");
    let h = hierarchy(alg, WnMode::Cominuscule);
    unsafe {
        assert_eq!(wn_algebra_dim(alg), 8);
        assert_eq!(wn_hierarchy_factor_count(h), 5);
        let mut tr = ptr::null_mut();
        assert_eq!(wn_solve_random(h, 3, 1e-3, 1.0, &mut tr), WnStatus::Ok);
        assert_eq!(wn_trajectory_status(tr, ptr::null_mut(), ptr::null_mut()), 0);
        assert_eq!(wn_trajectory_len(tr), 1001);
        let mut err = f64::NAN;
        assert_eq!(wn_trajectory_verify(tr, &mut err), WnStatus::Ok);
        assert!(err < 1e-9, "{}", err);

        let mut xi = vec![0.0; 8];
        assert_eq!(wn_trajectory_xi(tr, 0, 0, xi.as_mut_ptr(), 8), WnStatus::Ok);
        assert!(xi.iter().all(|&v| v == 0.0));
        assert_eq!(wn_trajectory_xi(tr, 500, 0, xi.as_mut_ptr(), 8), WnStatus::Ok);
        assert!(xi.iter().any(|&v| v != 0.0));
        assert_eq!(wn_trajectory_xi(tr, 5000, 0, xi.as_mut_ptr(), 8), WnStatus::InvalidArgument);
        assert_eq!(wn_trajectory_xi(tr, 1, 0, xi.as_mut_ptr(), 2), WnStatus::InvalidArgument);
        wn_trajectory_free(tr);
        wn_hierarchy_free(h);
        wn_algebra_free(alg);
    }
}

#[test]
fn breakdown_is_reported() {
    let alg = algebra("A1");
    let h = hierarchy(alg, WnMode::Cominuscule);
    unsafe {
        // basis order E[-1], H1, E[1]
        let x = [-1.0, 0.0, 1.0];
        let mut tr = ptr::null_mut();
        assert_eq!(wn_solve_constant(h, x.as_ptr(), 3, 1e-3, 2.0, &mut tr), WnStatus::Ok);
        let (mut t, mut stage) = (0.0, usize::MAX);
        assert_eq!(wn_trajectory_status(tr, &mut t, &mut stage), 1);
        assert!((t - std::f64::consts::FRAC_PI_2).abs() < 1e-2);
        assert_eq!(stage, 0);
        wn_trajectory_free(tr);

        let mut tr = ptr::null_mut();
        assert_eq!(wn_solve_constant(h, x.as_ptr(), 2, 1e-3, 1.0, &mut tr), WnStatus::InvalidInput);
        assert!(tr.is_null());
        wn_hierarchy_free(h);
        wn_algebra_free(alg);
    }
}

#[test]
fn json_input_and_emit() {
    let alg = algebra("A1");
    let h = hierarchy(alg, WnMode::Cominuscule);
    unsafe {
        let input = CString::new(r#"{"H1": {"type": "const", "value": 0.5}}"#).unwrap();
        let mut tr = ptr::null_mut();
        assert_eq!(wn_solve_json(h, input.as_ptr(), 0.01, 1.0, &mut tr), WnStatus::Ok);
        let mut xi = [0.0; 3];
        assert_eq!(wn_trajectory_xi(tr, 100, 1, xi.as_mut_ptr(), 3), WnStatus::Ok);
        assert!((xi[1] - 0.5).abs() < 1e-12);
        wn_trajectory_free(tr);

        let bad = CString::new(r#"{"E[7]": {"type": "const", "value": 1}}"#).unwrap();
        assert_eq!(wn_solve_json(h, bad.as_ptr(), 0.01, 1.0, &mut tr), WnStatus::InvalidInput);
        assert!(last_error().contains("E[7]"));

        let mut s = ptr::null_mut();
        assert_eq!(wn_hierarchy_emit_json(h, &mut s), WnStatus::Ok);
        let doc: serde_json::Value = serde_json::from_str(CStr::from_ptr(s).to_str().unwrap()).unwrap();
        assert_eq!(doc["stages"].as_array().unwrap().len(), 3);
        wn_string_free(s);
        wn_hierarchy_free(h);
        wn_algebra_free(alg);
    }
}

#[test]
fn errors_and_null_handles() {
    unsafe {
        let mut alg = ptr::null_mut();
        let bad = CString::new("Z9").unwrap();
        assert_eq!(wn_algebra_new(bad.as_ptr(), &mut alg), WnStatus::InvalidType);
        assert!(!last_error().is_empty());
        assert_eq!(wn_algebra_new(ptr::null(), &mut alg), WnStatus::NullPointer);

        let g2 = algebra("G2");
        let mut h = ptr::null_mut();
        assert_eq!(wn_hierarchy_new(g2, WnMode::Cominuscule, &mut h), WnStatus::ExcludedType);
        assert!(last_error().contains("G2"));
        assert_eq!(wn_hierarchy_new(g2, WnMode::Contact, &mut h), WnStatus::Ok);
        wn_hierarchy_free(h);
        wn_algebra_free(g2);

        assert_eq!(wn_algebra_dim(ptr::null()), 0);
        assert_eq!(wn_trajectory_status(ptr::null(), ptr::null_mut(), ptr::null_mut()), -1);
        let mut err = 0.0;
        assert_eq!(wn_trajectory_verify(ptr::null(), &mut err), WnStatus::NullPointer);
        wn_algebra_free(ptr::null_mut());
        wn_string_free(ptr::null_mut());
    }
}

/// Compile and run the C example against the shared library when a C
/// compiler is present.
#[test]
fn c_example_links() {
    let manifest = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let header = manifest.join("include/weinorman.h");
    assert!(header.exists());
    let exe = std::env::current_exe().unwrap();
    let libdir = exe.parent().unwrap().parent().unwrap();
    if !libdir.join("libweinorman_ffi.so").exists() || Command::new("cc").arg("--version").output().is_err() {
        eprintln!("skipping: no cc or shared library");
        return;
    }
    let out = tempfile_path("smoke");
    let status = Command::new("cc")
        .arg(manifest.join("examples/smoke.c"))
        .arg("-I")
        .arg(manifest.join("include"))
        .arg("-L")
        .arg(libdir)
        .arg("-lweinorman_ffi")
        .arg("-o")
        .arg(&out)
        .status()
        .unwrap();
    assert!(status.success());
    let run = Command::new(&out).env("LD_LIBRARY_PATH", libdir).output().unwrap();
    assert!(run.status.success(), "{}", String::from_utf8_lossy(&run.stderr));
    assert!(String::from_utf8_lossy(&run.stdout).starts_with("B2 factors="));
    let _ = std::fs::remove_file(out);
}

fn tempfile_path(name: &str) -> PathBuf {
    std::env::temp_dir().join(format!("weinorman-{}-{}", name, std::process::id()))
}
