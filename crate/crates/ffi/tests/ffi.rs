use std::ffi::{CStr, CString};
use std::ptr;

use qutrit_bloch_ffi::*;

fn last_error() -> String {
    let p = qb_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

fn from_coefficients(omega: [f64; 3], alpha: [f64; 3], beta: [f64; 3]) -> Result<*mut QbState, QbStatus> {
    let mut s = ptr::null_mut();
    let st = unsafe { qb_state_from_coefficients(omega.as_ptr(), alpha.as_ptr(), beta.as_ptr(), &mut s) };
    if st == QbStatus::Ok {
        Ok(s)
    } else {
        Err(st)
    }
}

#[test]
fn coefficient_round_trip() {
    let s = from_coefficients([0.5, 0.3, 0.2], [0.1, 0.0, -0.05], [0.0, 0.02, 0.0]).unwrap();
    let (mut w, mut a, mut b) = ([0.0; 3], [0.0; 3], [0.0; 3]);
    assert_eq!(unsafe { qb_state_coefficients(s, w.as_mut_ptr(), a.as_mut_ptr(), b.as_mut_ptr()) }, QbStatus::Ok);
    assert_eq!(w, [0.5, 0.3, 0.2]);
    assert_eq!(a, [0.1, 0.0, -0.05]);
    assert_eq!(b, [0.0, 0.02, 0.0]);

    let mut rho = [0.0; 18];
    assert_eq!(unsafe { qb_state_rho(s, rho.as_mut_ptr()) }, QbStatus::Ok);
    // ρ_12 = (α - iβ)/2, ρ_21 its conjugate
    assert_eq!((rho[2], rho[3]), (0.05, -0.0));
    assert_eq!((rho[6], rho[7]), (0.05, 0.0));

    let mut back = ptr::null_mut();
    assert_eq!(unsafe { qb_state_from_rho(rho.as_ptr(), &mut back) }, QbStatus::Ok);
    let mut w2 = [0.0; 3];
    let (mut a2, mut b2) = ([0.0; 3], [0.0; 3]);
    unsafe { qb_state_coefficients(back, w2.as_mut_ptr(), a2.as_mut_ptr(), b2.as_mut_ptr()) };
    assert_eq!((w2, a2, b2), (w, a, b));
    unsafe {
        qb_state_free(s);
        qb_state_free(back);
    }
}

#[test]
fn bloch_purity_and_validity() {
    let s = from_coefficients([1.0, 0.0, 0.0], [0.0; 3], [0.0; 3]).unwrap();
    let (mut u, mut r) = ([0.0; 9], [0.0; 3]);
    assert_eq!(unsafe { qb_state_bloch(s, u.as_mut_ptr(), r.as_mut_ptr()) }, QbStatus::Ok);
    assert_eq!(r, [1.0, 1.0, 0.0]);
    assert_eq!(&u[0..3], &[0.0, 0.0, 1.0]);
    let mut p = 0.0;
    assert_eq!(unsafe { qb_state_purity(s, &mut p) }, QbStatus::Ok);
    assert_eq!(p, 1.0);
    let mut valid = false;
    assert_eq!(unsafe { qb_state_is_valid(s, 1e-10, &mut valid) }, QbStatus::Ok);
    assert!(valid);
    unsafe { qb_state_free(s) };

    let bad = from_coefficients([1.0, 0.0, 0.0], [0.3, 0.0, 0.0], [0.0; 3]).unwrap();
    let mut res = [0.0; QB_CHECK_ENTRIES];
    let mut overall = true;
    assert_eq!(unsafe { qb_state_check(bad, 1e-10, res.as_mut_ptr(), &mut overall) }, QbStatus::Ok);
    assert!(!overall);
    let name = |k: usize| unsafe { CStr::from_ptr(qb_constraint_name(k)) }.to_str().unwrap();
    let failing: Vec<&str> = (0..QB_CHECK_ENTRIES).filter(|&k| res[k] < -1e-10).map(name).collect();
    assert!(failing.contains(&"minor{1,2}"), "{failing:?}");
    assert!(qb_constraint_name(QB_CHECK_ENTRIES).is_null());
    unsafe { qb_state_free(bad) };
}

#[test]
fn constraint_names_match_library_ids() {
    use qutrit_bloch::validity::{CONSTRAINT_IDS, MINOR_IDS};
    let ids: Vec<&str> = CONSTRAINT_IDS.iter().chain(MINOR_IDS.iter()).copied().collect();
    assert_eq!(ids.len(), QB_CHECK_ENTRIES);
    for (k, id) in ids.iter().enumerate() {
        assert_eq!(unsafe { CStr::from_ptr(qb_constraint_name(k)) }.to_str().unwrap(), *id);
    }
}

#[test]
fn error_codes() {
    assert_eq!(from_coefficients([0.5, 0.3, 0.3], [0.0; 3], [0.0; 3]).unwrap_err(), QbStatus::BadTrace);
    assert!(last_error().contains("trace"));
    assert_eq!(
        from_coefficients([f64::NAN, 0.5, 0.5], [0.0; 3], [0.0; 3]).unwrap_err(),
        QbStatus::InvalidArgument
    );

    let mut s = ptr::null_mut();
    let w = [1.0, 0.0, 0.0];
    assert_eq!(
        unsafe { qb_state_from_coefficients(ptr::null(), w.as_ptr(), w.as_ptr(), &mut s) },
        QbStatus::NullPointer
    );
    assert!(last_error().contains("omega"));

    let mut rho = [0.0; 18];
    rho[0] = 1.0;
    rho[2] = 0.1; // ρ_12 without matching ρ_21
    assert_eq!(unsafe { qb_state_from_rho(rho.as_ptr(), &mut s) }, QbStatus::NotHermitian);

    let mut p = 0.0;
    assert_eq!(unsafe { qb_state_purity(ptr::null(), &mut p) }, QbStatus::NullPointer);
    unsafe { qb_state_free(ptr::null_mut()) };
}

#[test]
fn success_clears_last_error() {
    assert!(from_coefficients([0.5, 0.6, 0.0], [0.0; 3], [0.0; 3]).is_err());
    assert!(!qb_last_error().is_null());
    let s = from_coefficients([0.5, 0.5, 0.0], [0.0; 3], [0.0; 3]).unwrap();
    assert!(qb_last_error().is_null());
    unsafe { qb_state_free(s) };
}

#[test]
fn evolution_and_sampling() {
    let one = from_coefficients([1.0, 0.0, 0.0], [0.0; 3], [0.0; 3]).unwrap();
    let g = CString::new("A12").unwrap();
    let mut out = ptr::null_mut();
    let st = unsafe { qb_state_evolve(one, g.as_ptr(), std::f64::consts::FRAC_PI_2, &mut out) };
    assert_eq!(st, QbStatus::Ok);
    let (mut w, mut a, mut b) = ([0.0; 3], [0.0; 3], [0.0; 3]);
    unsafe { qb_state_coefficients(out, w.as_mut_ptr(), a.as_mut_ptr(), b.as_mut_ptr()) };
    assert!((w[1] - 1.0).abs() < 1e-14 && w[0].abs() < 1e-14);

    let bogus = CString::new("Z99").unwrap();
    let mut ignored = ptr::null_mut();
    assert_eq!(
        unsafe { qb_state_evolve(one, bogus.as_ptr(), 0.1, &mut ignored) },
        QbStatus::InvalidArgument
    );
    let invalid = from_coefficients([1.2, -0.1, -0.1], [0.0; 3], [0.0; 3]).unwrap();
    assert_eq!(
        unsafe { qb_state_evolve(invalid, g.as_ptr(), 0.1, &mut ignored) },
        QbStatus::InvalidState
    );

    let (mut s1, mut s2) = (ptr::null_mut(), ptr::null_mut());
    unsafe {
        assert_eq!(qb_sample(11, &mut s1), QbStatus::Ok);
        assert_eq!(qb_sample(11, &mut s2), QbStatus::Ok);
    }
    let mut r1 = [0.0; 18];
    let mut r2 = [0.0; 18];
    unsafe {
        qb_state_rho(s1, r1.as_mut_ptr());
        qb_state_rho(s2, r2.as_mut_ptr());
    }
    assert_eq!(r1, r2);
    let mut valid = false;
    unsafe { qb_state_is_valid(s1, 1e-12, &mut valid) };
    assert!(valid);
    unsafe {
        for p in [one, out, invalid, s1, s2] {
            qb_state_free(p);
        }
    }
}

#[test]
fn version_and_header() {
    let v = unsafe { CStr::from_ptr(qb_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/qutrit_bloch.h")).unwrap();
    for f in [
        "qb_state_from_coefficients",
        "qb_state_from_rho",
        "qb_state_free",
        "qb_state_check",
        "qb_state_evolve",
        "qb_sample",
        "qb_last_error",
        "typedef struct QbState QbState",
        "QB_STATUS_NOT_HERMITIAN = 3",
    ] {
        assert!(header.contains(f), "{f}");
    }
}

#[test]
fn header_compiles_as_c() {
    let Ok(cc) = which_cc() else { return };
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("probe.c");
    std::fs::write(
        &src,
        "#include \"qutrit_bloch.h\"\n\
         int main(void) { QbState *s = 0; QbStatus st = qb_sample(1, &s); qb_state_free(s); return st != QB_STATUS_OK; }\n",
    )
    .unwrap();
    let out = std::process::Command::new(cc)
        .args(["-std=c99", "-Wall", "-Werror", "-fsyntax-only", "-I"])
        .arg(concat!(env!("CARGO_MANIFEST_DIR"), "/include"))
        .arg(&src)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
}

fn which_cc() -> Result<String, ()> {
    let cc = std::env::var("CC").unwrap_or_else(|_| "cc".into());
    match std::process::Command::new(&cc).arg("--version").output() {
        Ok(o) if o.status.success() => Ok(cc),
        _ => Err(()),
    }
}
