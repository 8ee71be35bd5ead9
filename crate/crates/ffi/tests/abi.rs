use std::ffi::{CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use kcut_ffi::*;

fn parse(text: &str) -> *mut KcutGraph {
    let text = CString::new(text).unwrap();
    let mut g = ptr::null_mut();
    assert_eq!(
        unsafe { kcut_graph_parse(text.as_ptr(), &mut g) },
        KcutStatus::Ok
    );
    g
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(kcut_last_error()) }
        .to_str()
        .unwrap()
        .to_owned()
}

#[test]
fn solve_cycle_through_handles() {
    let g = parse("6 6\n0 1\n1 2\n2 3\n3 4\n4 5\n5 0\n");
    unsafe {
        assert_eq!(kcut_graph_vertex_count(g), 6);
        assert_eq!(kcut_graph_edge_count(g), 6);
        let mut r = ptr::null_mut();
        assert_eq!(kcut_solve(g, 3, 1, &mut r), KcutStatus::Ok);
        assert_eq!(kcut_report_value(r), 3);
        assert_eq!(kcut_report_k(r), 3);
        let mut labels = vec![usize::MAX; kcut_report_vertex_count(r)];
        assert_eq!(
            kcut_report_labels(r, labels.as_mut_ptr(), labels.len()),
            KcutStatus::Ok
        );
        assert_eq!(labels[0], 0);
        assert_eq!(labels.iter().max(), Some(&2));

        let json = kcut_report_json(r);
        let doc: serde_json::Value =
            serde_json::from_str(CStr::from_ptr(json).to_str().unwrap()).unwrap();
        assert_eq!(doc["value"], 3);
        kcut_string_free(json);
        kcut_report_free(r);
        kcut_graph_free(g);
    }
}

#[test]
fn options_and_oracle_agree() {
    let edges: Vec<usize> = vec![0, 1, 0, 2, 1, 2, 2, 3, 3, 4, 3, 5, 4, 5];
    let mut g = ptr::null_mut();
    unsafe {
        assert_eq!(
            kcut_graph_from_edges(6, edges.as_ptr(), 7, &mut g),
            KcutStatus::Ok
        );
        let mut opts = kcut_options_default();
        opts.branch = KcutBranch::Sparsify;
        opts.seed = 5;
        let (mut a, mut b) = (ptr::null_mut(), ptr::null_mut());
        assert_eq!(kcut_solve_with_options(g, 2, &opts, &mut a), KcutStatus::Ok);
        assert_eq!(kcut_oracle(g, 2, &mut b), KcutStatus::Ok);
        assert_eq!(kcut_report_value(a), 1);
        assert_eq!(kcut_report_value(b), 1);
        kcut_report_free(a);
        kcut_report_free(b);
        kcut_graph_free(g);
    }
}

#[test]
fn errors_map_to_status_codes() {
    unsafe {
        let mut g = ptr::null_mut();
        let bad = CString::new("3 1\n0 7\n").unwrap();
        assert_eq!(kcut_graph_parse(bad.as_ptr(), &mut g), KcutStatus::Parse);
        assert!(!last_error().is_empty());
        assert_eq!(
            kcut_graph_parse(ptr::null(), &mut g),
            KcutStatus::NullPointer
        );

        let g = parse("3 2\n0 1\n1 2\n");
        let mut r = ptr::null_mut();
        assert_eq!(kcut_solve(g, 4, 0, &mut r), KcutStatus::InvalidInput);
        assert!(r.is_null());
        assert_eq!(
            kcut_solve(g, 2, 0, ptr::null_mut()),
            KcutStatus::NullPointer
        );

        assert_eq!(kcut_solve(g, 2, 0, &mut r), KcutStatus::Ok);
        let mut small = [0usize; 2];
        assert_eq!(
            kcut_report_labels(r, small.as_mut_ptr(), 2),
            KcutStatus::BufferTooSmall
        );
        assert!(last_error().contains("need 3"));
        kcut_report_free(r);

        let big = parse("15 0\n");
        assert_eq!(kcut_oracle(big, 2, &mut r), KcutStatus::TooLarge);
        kcut_graph_free(big);
        kcut_graph_free(g);

        // null handles are tolerated by the free functions and accessors
        kcut_graph_free(ptr::null_mut());
        kcut_report_free(ptr::null_mut());
        kcut_string_free(ptr::null_mut());
        assert_eq!(kcut_report_value(ptr::null()), 0);
        assert!(kcut_report_json(ptr::null()).is_null());
    }
}

fn have_cc() -> bool {
    Command::new("cc").arg("--version").output().is_ok()
}

/// Compiles the C smoke program against the generated header and the static
/// library from this build.
#[test]
fn c_program_links_and_runs() {
    let crate_dir = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    // tests/<name> lives in target/<profile>/deps; the staticlib sits one up
    let exe = std::env::current_exe().unwrap();
    let profile_dir = exe.parent().unwrap().parent().unwrap();
    let lib = profile_dir.join("libkcut_ffi.a");
    if !have_cc() || !lib.exists() {
        eprintln!("skipping: cc or {} not available", lib.display());
        return;
    }
    let out = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("kcut_smoke");
    let status = Command::new("cc")
        .arg(crate_dir.join("tests/c/smoke.c"))
        .arg("-I")
        .arg(crate_dir.join("include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&out)
        .status()
        .unwrap();
    assert!(status.success(), "cc failed");
    let run = Command::new(&out).output().unwrap();
    let stdout = String::from_utf8_lossy(&run.stdout);
    assert!(
        run.status.success(),
        "{stdout}{}",
        String::from_utf8_lossy(&run.stderr)
    );
    // several minimum 3-cuts exist on C6, so only the shape of the labels is fixed
    let line = stdout.trim();
    assert!(line.starts_with("value=3 k=3 labels=0"), "{line}");
    assert!(line.ends_with(" json=ok"), "{line}");
}
