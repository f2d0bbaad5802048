use std::ffi::{c_char, c_int, CStr, CString};
use std::path::Path;
use std::process::Command;
use std::ptr;

use automorphy_ffi::*;

fn last_error() -> String {
    let p = am_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_owned()
}

struct Handle(*mut AmFactor);

impl Drop for Handle {
    fn drop(&mut self) {
        unsafe { am_factor_free(self.0) }
    }
}

fn make(build: impl FnOnce(*mut *mut AmFactor) -> AmStatus) -> Handle {
    let mut out = ptr::null_mut();
    let status = build(&mut out);
    assert_eq!(status, AmStatus::Ok, "{}", last_error());
    assert!(!out.is_null());
    Handle(out)
}

fn from_json(s: &str) -> Handle {
    let c = CString::new(s).unwrap();
    make(|out| unsafe { am_factor_from_json(c.as_ptr(), out) })
}

fn rank(f: &Handle) -> usize {
    let mut n = 0;
    assert_eq!(unsafe { am_factor_rank(f.0, &mut n) }, AmStatus::Ok);
    n
}

fn degree(f: &Handle) -> i64 {
    let mut d = 0;
    assert_eq!(
        unsafe { am_factor_degree(f.0, &mut d) },
        AmStatus::Ok,
        "{}",
        last_error()
    );
    d
}

fn eval(f: &Handle, u: (f64, f64)) -> Vec<f64> {
    let n = rank(f);
    let mut buf = vec![0.0; 2 * n * n];
    assert_eq!(
        unsafe { am_factor_eval(f.0, u.0, u.1, buf.as_mut_ptr(), buf.len()) },
        AmStatus::Ok
    );
    buf
}

#[test]
fn normal_form_invariants() {
    for (r, d) in [(1usize, 0i64), (2, 1), (3, -2), (4, 2), (2, 0)] {
        let f = make(|out| unsafe { am_normal_form(0.1, 0.9, r, d, 0.7, 0.2, out) });
        assert_eq!((rank(&f), degree(&f)), (r, d));
    }
}

#[test]
fn json_round_trip() {
    let f = make(|out| unsafe { am_normal_form(0.25, 1.3, 3, 1, 1.0, 0.0, out) });
    let mut s: *mut c_char = ptr::null_mut();
    assert_eq!(unsafe { am_factor_to_json(f.0, &mut s) }, AmStatus::Ok);
    let text = unsafe { CStr::from_ptr(s) }.to_str().unwrap().to_owned();
    unsafe { am_string_free(s) };
    let g = from_json(&text);
    for u in [(1.0, 0.0), (0.3, -0.8)] {
        assert_eq!(eval(&f, u), eval(&g, u));
    }
}

#[test]
fn descriptor_documents() {
    let f = from_json(r#"{"torus":{"tau":[0,1]},"descriptor":{"rank":2,"degree":-1,"param":[1,0]}}"#);
    assert_eq!((rank(&f), degree(&f)), (2, -1));
}

#[test]
fn eval_layout_is_row_major() {
    let f = from_json(
        r#"{"torus":{"tau":[0,1]},"A":{"n":2,"entries":[[{"k":0,"re":1,"im":0}],[{"k":1,"re":0,"im":3}],[],[{"k":-1,"re":2,"im":0}]]}}"#,
    );
    let m = eval(&f, (2.0, 0.0));
    assert_eq!(m, vec![1.0, 0.0, 0.0, 6.0, 0.0, 0.0, 1.0, 0.0]);
}

#[test]
fn functors_and_isogenies() {
    let f = make(|out| unsafe { am_normal_form(0.0, 1.0, 2, 1, 1.0, 0.0, out) });
    let g = make(|out| unsafe { am_normal_form(0.0, 1.0, 3, -1, 1.0, 0.0, out) });
    let t = make(|out| unsafe { am_tensor(f.0, g.0, out) });
    assert_eq!((rank(&t), degree(&t)), (6, 1));
    let s = make(|out| unsafe { am_sym_power(f.0, 3, out) });
    assert_eq!((rank(&s), degree(&s)), (4, 6));
    let w = make(|out| unsafe { am_wedge_power(g.0, 2, out) });
    assert_eq!((rank(&w), degree(&w)), (3, -2));
    let d = make(|out| unsafe { am_dual(f.0, out) });
    assert_eq!(degree(&d), -1);

    let up = make(|out| unsafe { am_pullback(f.0, 3, out) });
    assert_eq!((rank(&up), degree(&up)), (2, 3));
    let down = make(|out| unsafe { am_pushforward(up.0, 3, out) });
    assert_eq!((rank(&down), degree(&down)), (6, 3));

    let it = make(|out| unsafe { am_iterate(f.0, 2, out) });
    assert_eq!(degree(&it), 2);
}

#[test]
fn atiyah_matches_normal_form() {
    let a = make(|out| unsafe { am_atiyah_construct(0.2, 0.8, 4, 2, 0.5, 0.5, out) });
    let b = make(|out| unsafe { am_normal_form(0.2, 0.8, 4, 2, 0.5, 0.5, out) });
    let (x, y) = (eval(&a, (0.6, 0.9)), eval(&b, (0.6, 0.9)));
    let scale = y.iter().fold(1.0f64, |m, v| m.max(v.abs()));
    assert!(x.iter().zip(&y).all(|(p, q)| (p - q).abs() <= 1e-9 * scale));
}

#[test]
fn witnesses() {
    let a = from_json(
        r#"{"torus":{"tau":[0,1]},"A":{"n":2,"entries":[[{"k":0,"re":1,"im":0}],[{"k":0,"re":1,"im":0}],[],[{"k":0,"re":1,"im":0}]]}}"#,
    );
    let a2 = from_json(
        r#"{"torus":{"tau":[0,1]},"A":{"n":2,"entries":[[{"k":0,"re":1,"im":0}],[{"k":0,"re":2,"im":0}],[],[{"k":0,"re":1,"im":0}]]}}"#,
    );
    let good = from_json(
        r#"{"torus":{"tau":[0,1]},"A":{"n":2,"entries":[[{"k":0,"re":1,"im":0}],[],[],[{"k":0,"re":2,"im":0}]]}}"#,
    );
    let bad = from_json(
        r#"{"torus":{"tau":[0,1]},"A":{"n":2,"entries":[[{"k":0,"re":2,"im":0}],[],[],[{"k":0,"re":1,"im":0}]]}}"#,
    );
    let mut holds: c_int = -1;
    assert_eq!(unsafe { am_check_witness(a.0, a2.0, good.0, &mut holds) }, AmStatus::Ok);
    assert_eq!(holds, 1);
    assert_eq!(unsafe { am_check_witness(a.0, a2.0, bad.0, &mut holds) }, AmStatus::Ok);
    assert_eq!(holds, 0);
}

#[test]
fn recognition() {
    let f = make(|out| unsafe { am_normal_form(0.0, 1.0, 3, 0, 0.5, 0.0, out) });
    let (mut found, mut r, mut re, mut im) = (0, 0, 0.0, 0.0);
    assert_eq!(
        unsafe { am_recognize_deg0(f.0, &mut found, &mut r, &mut re, &mut im) },
        AmStatus::Ok
    );
    assert_eq!((found, r), (1, 3));
    assert!((re - 0.5).abs() < 1e-12 && im.abs() < 1e-12);

    let split = from_json(
        r#"{"torus":{"tau":[0,1]},"A":{"n":2,"entries":[[{"k":0,"re":1,"im":0}],[],[],[{"k":0,"re":3,"im":0}]]}}"#,
    );
    assert_eq!(
        unsafe { am_recognize_deg0(split.0, &mut found, &mut r, &mut re, &mut im) },
        AmStatus::Ok
    );
    assert_eq!(found, 0);
}

#[test]
fn theta_check() {
    let mut report = AmThetaReport {
        max_residual: f64::NAN,
        samples: 0,
        pass: false,
    };
    assert_eq!(
        unsafe { am_theta_check(0.1, 1.2, 0.5, 0.25, 40, 32, 9, &mut report) },
        AmStatus::Ok
    );
    assert!(report.pass && report.samples == 32 && report.max_residual < 1e-9);
    let mut again = report;
    unsafe { am_theta_check(0.1, 1.2, 0.5, 0.25, 40, 32, 9, &mut again) };
    assert_eq!(again.max_residual, report.max_residual);
}

#[test]
fn error_codes_and_messages() {
    let mut out = ptr::null_mut();
    assert_eq!(
        unsafe { am_normal_form(0.0, -1.0, 2, 0, 1.0, 0.0, &mut out) },
        AmStatus::InvalidModulus
    );
    assert!(out.is_null());
    assert!(last_error().contains("positive imaginary part"));

    assert_eq!(
        unsafe { am_normal_form(0.0, 1.0, 0, 0, 1.0, 0.0, &mut out) },
        AmStatus::Domain
    );
    assert_eq!(
        unsafe { am_normal_form(0.0, 1.0, 2, 0, 0.0, 0.0, &mut out) },
        AmStatus::Domain
    );

    let bad = CString::new("{\"torus\":").unwrap();
    assert_eq!(unsafe { am_factor_from_json(bad.as_ptr(), &mut out) }, AmStatus::Parse);
    let invalid = [0xffu8, 0];
    assert_eq!(
        unsafe { am_factor_from_json(invalid.as_ptr().cast(), &mut out) },
        AmStatus::InvalidUtf8
    );
    assert_eq!(
        unsafe { am_factor_from_json(ptr::null(), &mut out) },
        AmStatus::NullPointer
    );

    let f = make(|o| unsafe { am_normal_form(0.0, 1.0, 2, 0, 1.0, 0.0, o) });
    let g = make(|o| unsafe { am_normal_form(0.0, 2.0, 2, 0, 1.0, 0.0, o) });
    assert_eq!(unsafe { am_tensor(f.0, g.0, &mut out) }, AmStatus::TorusMismatch);
    assert_eq!(unsafe { am_wedge_power(f.0, 3, &mut out) }, AmStatus::Domain);
    assert_eq!(unsafe { am_pullback(f.0, 0, &mut out) }, AmStatus::Domain);
    assert_eq!(unsafe { am_factor_rank(f.0, ptr::null_mut()) }, AmStatus::NullPointer);

    let mut small = [0.0; 7];
    assert_eq!(
        unsafe { am_factor_eval(f.0, 1.0, 0.0, small.as_mut_ptr(), small.len()) },
        AmStatus::BufferTooSmall
    );

    let singular =
        from_json(r#"{"torus":{"tau":[0,1]},"A":{"n":1,"entries":[[{"k":0,"re":1,"im":0},{"k":1,"re":-1,"im":0}]]}}"#);
    let mut d = 0;
    assert_ne!(unsafe { am_factor_degree(singular.0, &mut d) }, AmStatus::Ok);
}

#[test]
fn errors_are_per_thread() {
    let mut out = ptr::null_mut();
    unsafe { am_normal_form(0.0, -1.0, 1, 0, 1.0, 0.0, &mut out) };
    std::thread::spawn(|| assert!(am_last_error().is_null()))
        .join()
        .unwrap();
}

#[test]
fn freeing_null_is_harmless() {
    unsafe {
        am_factor_free(ptr::null_mut());
        am_string_free(ptr::null_mut());
    }
    let v = unsafe { CStr::from_ptr(am_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

fn header() -> String {
    std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("include/automorphy.h")).unwrap()
}

#[test]
fn header_declares_the_abi() {
    let h = header();
    assert!(h.contains("typedef struct AmFactor AmFactor;"));
    assert!(h.contains("AM_STATUS_BUFFER_TOO_SMALL = 10"));
    for f in [
        "am_last_error",
        "am_version",
        "am_string_free",
        "am_factor_free",
        "am_factor_clone",
        "am_factor_from_json",
        "am_factor_to_json",
        "am_normal_form",
        "am_atiyah_construct",
        "am_factor_rank",
        "am_factor_degree",
        "am_factor_eval",
        "am_tensor",
        "am_sym_power",
        "am_wedge_power",
        "am_dual",
        "am_pullback",
        "am_pushforward",
        "am_iterate",
        "am_check_witness",
        "am_recognize_deg0",
        "am_theta_check",
    ] {
        assert!(
            h.contains(&format!(" {f}(")) || h.contains(&format!("*{f}(")),
            "{f} missing from header"
        );
    }
}

#[test]
fn header_compiles_as_c() {
    let dir = Path::new(env!("CARGO_TARGET_TMPDIR"));
    let src = dir.join("header_check.c");
    std::fs::write(
        &src,
        "#include \"automorphy.h\"\nint main(void) { AmFactor *f = 0; AmStatus s = am_normal_form(0, 1, 2, 1, 1, 0, &f); am_factor_free(f); return s; }\n",
    )
    .unwrap();
    let include = Path::new(env!("CARGO_MANIFEST_DIR")).join("include");
    let status = match Command::new("cc")
        .arg("-std=c99")
        .arg("-Wall")
        .arg("-Werror")
        .arg("-fsyntax-only")
        .arg("-I")
        .arg(&include)
        .arg(&src)
        .status()
    {
        Ok(s) => s,
        Err(_) => return,
    };
    assert!(status.success());
}

const C_PROGRAM: &str = r#"#include <stdio.h>
#include "automorphy.h"

int main(void) {
    AmFactor *f = NULL, *g = NULL;
    if (am_normal_form(0.0, 1.0, 3, 2, 1.0, 0.0, &f) != AM_STATUS_OK) return 10;
    if (am_sym_power(f, 2, &g) != AM_STATUS_OK) return 11;
    size_t r = 0;
    int64_t d = 0;
    am_factor_rank(g, &r);
    am_factor_degree(g, &d);
    AmFactor *bad = NULL;
    AmStatus s = am_normal_form(0.0, -1.0, 1, 0, 1.0, 0.0, &bad);
    printf("%zu %lld %d %s\n", r, (long long)d, (int)s, am_last_error());
    am_factor_free(g);
    am_factor_free(f);
    return 0;
}
"#;

#[test]
fn c_program_links_and_runs() {
    let Ok(exe) = std::env::current_exe() else { return };
    let Some(lib) = exe
        .parent()
        .and_then(Path::parent)
        .map(|d| d.join("libautomorphy_ffi.a"))
    else {
        return;
    };
    if !lib.exists() {
        return;
    }
    let dir = Path::new(env!("CARGO_TARGET_TMPDIR"));
    let src = dir.join("abi_smoke.c");
    let bin = dir.join("abi_smoke");
    std::fs::write(&src, C_PROGRAM).unwrap();
    let include = Path::new(env!("CARGO_MANIFEST_DIR")).join("include");
    let Ok(status) = Command::new("cc")
        .arg("-std=c99")
        .arg("-I")
        .arg(&include)
        .arg(&src)
        .arg(&lib)
        .args(["-lm", "-lpthread", "-ldl", "-o"])
        .arg(&bin)
        .status()
    else {
        return;
    };
    assert!(status.success());
    let out = Command::new(&bin).output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(
        text.starts_with("6 8 4 torus modulus must have positive imaginary part"),
        "{text}"
    );
}
