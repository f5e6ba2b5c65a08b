use std::ffi::{CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use qmix_ffi::*;

fn group(spec: &str) -> *mut QmixGroup {
    let spec = CString::new(spec).unwrap();
    let mut g = ptr::null_mut();
    assert_eq!(unsafe { qmix_group_new(spec.as_ptr(), &mut g) }, QmixStatus::Ok);
    g
}

fn chartab(g: *const QmixGroup) -> *mut QmixCharTable {
    let mut t = ptr::null_mut();
    assert_eq!(unsafe { qmix_chartab_new(g, 7, &mut t) }, QmixStatus::Ok);
    t
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(qmix_last_error_message()) }
        .to_string_lossy()
        .into_owned()
}

#[test]
fn group_lifecycle_and_law() {
    let g = group("sym:3");
    unsafe {
        assert_eq!(qmix_group_order(g), 6);
        let mut e = usize::MAX;
        let mut x = 0;
        for a in 0..6 {
            assert_eq!(qmix_group_inv(g, a, &mut x), QmixStatus::Ok);
            assert_eq!(qmix_group_mul(g, a, x, &mut e), QmixStatus::Ok);
            assert_eq!(e, 0);
        }
        assert_eq!(qmix_group_mul(g, 6, 0, &mut e), QmixStatus::OutOfRange);
        assert!(last_error().contains("out of range"));
        qmix_group_free(g);
        qmix_group_free(ptr::null_mut());
        assert_eq!(qmix_group_order(ptr::null()), 0);
    }
}

#[test]
fn spec_errors_are_reported() {
    let mut g = ptr::null_mut();
    let bad = CString::new("psl2:9").unwrap();
    assert_eq!(unsafe { qmix_group_new(bad.as_ptr(), &mut g) }, QmixStatus::InvalidSpec);
    assert!(g.is_null());
    assert!(last_error().contains("odd prime"));
    assert_eq!(unsafe { qmix_group_new(ptr::null(), &mut g) }, QmixStatus::NullPointer);
    let syntax = CString::new("alt5").unwrap();
    assert_eq!(unsafe { qmix_group_new(syntax.as_ptr(), &mut g) }, QmixStatus::InvalidSpec);
}

#[test]
fn chartab_queries() {
    let g = group("psl2:7");
    let t = chartab(g);
    unsafe {
        assert_eq!(qmix_chartab_num_classes(t), 6);
        assert_eq!(qmix_chartab_quasirandom_degree(t), 3);
        let mut small = [0usize; 2];
        let mut k = 0;
        assert_eq!(
            qmix_chartab_degrees(t, small.as_mut_ptr(), 2, &mut k),
            QmixStatus::BufferTooSmall
        );
        assert_eq!(k, 6);
        let mut degrees = [0usize; 6];
        assert_eq!(qmix_chartab_degrees(t, degrees.as_mut_ptr(), 6, &mut k), QmixStatus::Ok);
        let mut sorted = degrees;
        sorted.sort();
        assert_eq!(sorted, [1, 3, 3, 6, 7, 8]);
        let mut z = 0.0;
        assert_eq!(qmix_chartab_zeta(t, 1.0, &mut z), QmixStatus::Ok);
        let expect = 2.0 / 3.0 + 1.0 / 6.0 + 1.0 / 7.0 + 1.0 / 8.0;
        assert!((z - expect).abs() < 1e-12);
        qmix_chartab_free(t);
        qmix_group_free(g);
    }
}

#[test]
fn theta_and_counts_on_cyclic5() {
    let g = group("cyclic:5");
    let t = chartab(g);
    let set = [0usize];
    let mut count = 0;
    unsafe {
        assert_eq!(
            qmix_count_progressions(g, set.as_ptr(), 1, set.as_ptr(), 1, set.as_ptr(), 1, &mut count),
            QmixStatus::Ok
        );
        assert_eq!(count, 1);
        let mut empty = 7;
        assert_eq!(
            qmix_count_progressions(g, ptr::null(), 0, set.as_ptr(), 1, set.as_ptr(), 1, &mut empty),
            QmixStatus::Ok
        );
        assert_eq!(empty, 0);

        // Indicator of {0}: theta = |1/25 - 1/125| = 0.032.
        let mut f = [0.0f64; 10];
        f[0] = 1.0;
        let mut r = QmixMixingReport::default();
        assert_eq!(
            qmix_theta_defect(g, t, f.as_ptr(), f.as_ptr(), f.as_ptr(), &mut r),
            QmixStatus::Ok
        );
        assert!((r.theta - 0.032).abs() < 1e-15);
        assert_eq!(r.quasirandom_degree, 1);
        assert_eq!(r.vacuous, 1);

        let other = group("cyclic:6");
        assert_eq!(
            qmix_theta_defect(other, t, f.as_ptr(), f.as_ptr(), f.as_ptr(), &mut r),
            QmixStatus::Precondition
        );
        qmix_group_free(other);
        qmix_chartab_free(t);
        qmix_group_free(g);
    }
}

#[test]
fn theorem_bound_values() {
    let mut b = 0.0;
    unsafe {
        assert_eq!(qmix_theorem_bound(4, &mut b), QmixStatus::Ok);
        assert!((b - 1.0).abs() < 1e-15);
        assert_eq!(qmix_theorem_bound(0, &mut b), QmixStatus::Precondition);
        assert_eq!(qmix_theorem_bound(4, ptr::null_mut()), QmixStatus::NullPointer);
    }
}

#[test]
fn header_declares_every_export() {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let header = std::fs::read_to_string(dir.join("include/qmix.h")).unwrap();
    let src = std::fs::read_to_string(dir.join("src/lib.rs")).unwrap();
    let exports: Vec<&str> = src
        .split("extern \"C\" fn ")
        .skip(1)
        .map(|s| s.split('(').next().unwrap())
        .collect();
    assert!(exports.len() >= 14);
    for name in exports {
        assert!(header.contains(&format!("{name}(")), "{name} missing from header");
    }
}

/// Compile and run a C program against the header and static library.
#[test]
fn c_program_links_and_runs() {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let exe = std::env::current_exe().unwrap();
    let profile_dir = exe.parent().and_then(|p| p.parent()).unwrap();
    let lib = profile_dir.join("libqmix_ffi.a");
    if !lib.exists() || Command::new("cc").arg("--version").output().is_err() {
        eprintln!("skipping: static library or C compiler unavailable");
        return;
    }
    let out = std::env::temp_dir().join(format!("qmix_smoke_{}", std::process::id()));
    let status = Command::new("cc")
        .arg(dir.join("tests/c/smoke.c"))
        .arg("-I")
        .arg(dir.join("include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&out)
        .status()
        .unwrap();
    assert!(status.success(), "C compilation failed");
    let run = Command::new(&out).output().unwrap();
    let _ = std::fs::remove_file(&out);
    assert!(
        run.status.success(),
        "{}",
        String::from_utf8_lossy(&run.stderr)
    );
    assert_eq!(String::from_utf8_lossy(&run.stdout).trim(), "ok");
}
