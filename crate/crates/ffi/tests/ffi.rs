use std::ffi::{c_char, CStr, CString};
use std::path::Path;
use std::process::Command;
use std::ptr;

use gpt_particles_ffi::*;

fn take(s: *mut c_char) -> String {
    assert!(!s.is_null());
    let text = unsafe { CStr::from_ptr(s) }.to_str().unwrap().to_owned();
    unsafe { gptp_string_free(s) };
    text
}

fn last_error() -> String {
    let p = gptp_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

fn builtin(name: &str, d: u32, parties: u32) -> (GptpStatus, *mut GptpTheory) {
    let name = CString::new(name).unwrap();
    let mut t = ptr::null_mut();
    let status = unsafe { gptp_theory_builtin(name.as_ptr(), d, parties, &mut t) };
    (status, t)
}

#[test]
fn version_matches_crate() {
    let v = unsafe { CStr::from_ptr(gptp_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

#[test]
fn classical_orbits_report() {
    let (status, t) = builtin("classical", 2, 2);
    assert_eq!(status, GptpStatus::Ok);
    let mut out = ptr::null_mut();
    let status = unsafe { gptp_orbits_json(t, GptpOption::ExtremalSymmetric, 0, 1e-10, 0, &mut out) };
    assert_eq!(status, GptpStatus::Ok);
    let v: serde_json::Value = serde_json::from_str(&take(out)).unwrap();
    assert_eq!(v["particle_types"], 2);
    assert!(gptp_last_error().is_null());
    unsafe { gptp_theory_free(t) };
}

#[test]
fn qubit_split_report() {
    let (status, t) = builtin("qubit", 0, 2);
    assert_eq!(status, GptpStatus::Ok);
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { gptp_split_json(t, 1, 1e-10, &mut out) }, GptpStatus::Ok);
    let v: serde_json::Value = serde_json::from_str(&take(out)).unwrap();
    assert_eq!(v["sector_dims"], serde_json::json!([3, 1]));
    let mut exported = ptr::null_mut();
    assert_eq!(unsafe { gptp_theory_export_json(t, &mut exported) }, GptpStatus::BadArgument);
    assert!(exported.is_null());
    unsafe { gptp_theory_free(t) };
}

#[test]
fn json_round_trip() {
    let (_, t) = builtin("boxworld", 0, 0);
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { gptp_theory_export_json(t, &mut out) }, GptpStatus::Ok);
    let json = take(out);
    let text = CString::new(json.clone()).unwrap();
    let mut loaded = ptr::null_mut();
    assert_eq!(unsafe { gptp_theory_from_json(text.as_ptr(), &mut loaded) }, GptpStatus::Ok);
    let mut again = ptr::null_mut();
    assert_eq!(unsafe { gptp_theory_export_json(loaded, &mut again) }, GptpStatus::Ok);
    assert_eq!(take(again), json);
    unsafe {
        gptp_theory_free(loaded);
        gptp_theory_free(t);
    }
}

#[test]
fn errors_set_status_and_message() {
    let (status, t) = builtin("nope", 0, 0);
    assert_eq!((status, t.is_null()), (GptpStatus::BadArgument, true));
    assert!(last_error().contains("unknown_theory"));

    let bad = CString::new(r#"{"schema_version": "1"}"#).unwrap();
    let mut loaded = ptr::null_mut();
    assert_eq!(unsafe { gptp_theory_from_json(bad.as_ptr(), &mut loaded) }, GptpStatus::InvalidTheory);

    let (_, t) = builtin("spekkens", 0, 0);
    let mut out = ptr::null_mut();
    let status = unsafe { gptp_orbits_json(t, GptpOption::SymmetricExtremal, 0, 1e-10, 100, &mut out) };
    assert_eq!(status, GptpStatus::ClosureExceeded);
    assert!(last_error().contains("closure_exceeded"));
    let status = unsafe { gptp_split_json(t, 0, -1.0, &mut out) };
    assert_eq!(status, GptpStatus::BadArgument);
    unsafe { gptp_theory_free(t) };

    assert_eq!(unsafe { gptp_theory_builtin(ptr::null(), 0, 0, &mut loaded) }, GptpStatus::BadArgument);
    assert_eq!(unsafe { gptp_split_json(ptr::null(), 0, 1e-10, &mut out) }, GptpStatus::BadArgument);
    unsafe {
        gptp_theory_free(ptr::null_mut());
        gptp_string_free(ptr::null_mut());
    }
}

/// Builds a small C program against the generated header and the static
/// library, then checks that it runs.
#[test]
fn c_program_links_and_runs() {
    let header = Path::new(env!("CARGO_MANIFEST_DIR")).join("include");
    let exe = std::env::current_exe().unwrap();
    let lib = exe.parent().and_then(Path::parent).unwrap().join("libgpt_particles_ffi.a");
    assert!(lib.exists(), "static library not found at {}", lib.display());
    let dir = std::env::temp_dir().join(format!("gptp-ffi-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let src = dir.join("main.c");
    std::fs::write(
        &src,
        "#include \"gpt_particles.h\"\n\
         #include <string.h>\n\
         int main(void) {\n\
           GptpTheory *t = 0;\n\
           char *out = 0;\n\
           GptpStatus s = gptp_theory_builtin(\"classical\", 2, 2, &t);\n\
           if (s == GPTP_STATUS_OK) s = gptp_orbits_json(t, GPTP_OPTION_SYMMETRIC_EXTREMAL, 0, 1e-10, 0, &out);\n\
           int found = out && strstr(out, \"\\\"particle_types\\\": 1\") != 0;\n\
           gptp_string_free(out);\n\
           gptp_theory_free(t);\n\
           if (s != GPTP_STATUS_OK) return (int)s;\n\
           if (gptp_theory_builtin(\"nope\", 0, 0, &t) != GPTP_STATUS_BAD_ARGUMENT || !gptp_last_error()) return 10;\n\
           return found ? 0 : 11;\n\
         }\n",
    )
    .unwrap();
    let bin = dir.join("main");
    let cc = std::env::var("CC").unwrap_or_else(|_| "cc".into());
    let status = Command::new(cc)
        .args(["-std=c99", "-Wall", "-Werror", "-I"])
        .arg(&header)
        .arg(&src)
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&bin)
        .status()
        .expect("a C compiler is available");
    assert!(status.success());
    assert_eq!(Command::new(&bin).status().unwrap().code(), Some(0));
}
