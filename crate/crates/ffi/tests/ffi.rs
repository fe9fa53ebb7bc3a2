use std::ffi::{CStr, CString};
use std::ptr;

use ogs_ffi::*;

fn last_error() -> String {
    unsafe { CStr::from_ptr(ogs_last_error_message()) }.to_string_lossy().into_owned()
}

#[test]
fn norm_eval_top2() {
    let j = CString::new(r#"{"kind":"TopK","k":2}"#).unwrap();
    let x = [1.0, 5.0, 3.0];
    let mut out = 0.0;
    let st = unsafe { ogs_norm_eval(j.as_ptr(), x.as_ptr(), x.len(), &mut out) };
    assert_eq!(st, OgsStatus::Ok);
    assert_eq!(out, 8.0);
}

#[test]
fn bad_json_sets_message() {
    let j = CString::new("{not json").unwrap();
    let mut h: *mut OgsInstance = ptr::null_mut();
    let st = unsafe { ogs_instance_from_json(j.as_ptr(), &mut h) };
    assert_eq!(st, OgsStatus::InvalidSpec);
    assert!(h.is_null());
    assert!(last_error().contains("json"));
}

#[test]
fn null_pointers() {
    let mut out = 0usize;
    assert_eq!(unsafe { ogs_opt_sched_pack(ptr::null(), 0, &mut out) }, OgsStatus::NullPointer);
    unsafe { ogs_instance_free(ptr::null_mut()) };
}

#[test]
fn instance_roundtrip() {
    let j = CString::new(
        r#"{"m":2,"r":1,"inner_norms":[{"kind":"LInf"},{"kind":"LInf"}],
            "aggregate":{"kind":"NormAgg","norm":{"kind":"LInf"}},"budget":2.0,
            "jobs":[[1.0,"inf"],[2.0,1.0],[3.0,3.0]]}"#,
    )
    .unwrap();
    let mut h: *mut OgsInstance = ptr::null_mut();
    assert_eq!(unsafe { ogs_instance_from_json(j.as_ptr(), &mut h) }, OgsStatus::Ok);
    assert_eq!(unsafe { ogs_instance_num_jobs(h) }, 3);
    let mut count = 0usize;
    assert_eq!(unsafe { ogs_opt_sched_pack(h, 0, &mut count) }, OgsStatus::Ok);
    assert_eq!(count, 2);
    let mut opt = 0.0;
    assert_eq!(unsafe { ogs_opt_gen_sched(h, 0, &mut opt) }, OgsStatus::Ok);
    assert_eq!(opt, 3.0);
    let (mut cost, mut tau) = (0.0, 0usize);
    assert_eq!(unsafe { ogs_run_gen_sched(h, 7, 0, &mut cost, &mut tau) }, OgsStatus::Ok);
    assert!(cost >= opt && tau >= 1);
    unsafe { ogs_instance_free(h) };
}

#[test]
fn set_cover_run() {
    let j = CString::new(r#"{"costs":[1.0,2.0],"elements":[[0],[0,1],[1]]}"#).unwrap();
    let mut h: *mut OgsSetCover = ptr::null_mut();
    assert_eq!(unsafe { ogs_set_cover_from_json(j.as_ptr(), &mut h) }, OgsStatus::Ok);
    let mut opt = 0.0;
    assert_eq!(unsafe { ogs_opt_osc(h, 0, &mut opt) }, OgsStatus::Ok);
    assert_eq!(opt, 3.0);
    let (mut cost, mut sets) = (0.0, 0usize);
    assert_eq!(unsafe { ogs_run_osc(h, 1, 0, &mut cost, &mut sets) }, OgsStatus::Ok);
    assert_eq!((cost, sets), (3.0, 2));
    unsafe { ogs_set_cover_free(h) };
}

#[test]
fn oracle_limit_status() {
    let jobs: Vec<String> = (0..10).map(|_| "[1.0,1.0,1.0]".to_string()).collect();
    let j = CString::new(format!(
        r#"{{"m":3,"r":1,"inner_norms":[{{"kind":"Lp","p":2.0}},{{"kind":"Lp","p":2.0}},{{"kind":"Lp","p":2.0}}],
            "aggregate":{{"kind":"NormAgg","norm":{{"kind":"Lp","p":3.0}}}},"budget":1.0,"jobs":[{}]}}"#,
        jobs.join(",")
    ))
    .unwrap();
    let mut h: *mut OgsInstance = ptr::null_mut();
    assert_eq!(unsafe { ogs_instance_from_json(j.as_ptr(), &mut h) }, OgsStatus::Ok);
    let mut opt = 0.0;
    assert_eq!(unsafe { ogs_opt_gen_sched(h, 5, &mut opt) }, OgsStatus::OracleLimit);
    unsafe { ogs_instance_free(h) };
}

#[test]
fn header_lists_exports() {
    let h = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/ogs.h")).unwrap();
    for f in ["ogs_instance_from_json", "ogs_run_osc", "ogs_norm_eval", "ogs_last_error_message", "OgsInstance"] {
        assert!(h.contains(f), "{f} missing from header");
    }
}

#[test]
fn header_compiles_as_c() {
    let Ok(cc) = which_cc() else { return };
    let dir = std::env::temp_dir().join(format!("ogs-h-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let src = dir.join("use.c");
    std::fs::write(
        &src,
        "#include \"ogs.h\"\nint main(void) { double x[2] = {1.0, 2.0}; double out; \
         return ogs_norm_eval(\"{}\", x, 2, &out) == OGS_STATUS_OK; }\n",
    )
    .unwrap();
    let status = std::process::Command::new(cc)
        .args(["-std=c99", "-Wall", "-Werror", "-fsyntax-only", "-I"])
        .arg(concat!(env!("CARGO_MANIFEST_DIR"), "/include"))
        .arg(&src)
        .status()
        .unwrap();
    std::fs::remove_dir_all(&dir).ok();
    assert!(status.success());
}

fn which_cc() -> Result<String, ()> {
    let cc = std::env::var("CC").unwrap_or_else(|_| "cc".into());
    match std::process::Command::new(&cc).arg("--version").output() {
        Ok(o) if o.status.success() => Ok(cc),
        _ => Err(()),
    }
}
