//! Compiles and runs a small C program against the generated header and
//! the static library. Skips when no C compiler is on PATH.

use std::path::PathBuf;
use std::process::Command;

const PROGRAM: &str = r#"
#include <stdio.h>
#include "kcut.h"

int main(void) {
    size_t us[] = {0, 1, 2, 3, 4};
    size_t vs[] = {1, 2, 3, 4, 0};
    uint64_t ws[] = {1, 1, 1, 1, 1};
    KcutGraph *g = NULL;
    if (kcut_graph_new(5, us, vs, ws, 5, &g) != KCUT_STATUS_OK) return 10;
    KcutResult *r = NULL;
    if (kcut_enumerate(g, 3, 1, 20, 0, 1, &r) != KCUT_STATUS_OK) return 11;
    size_t labels[5];
    if (kcut_result_labels(r, 9, labels, 5) != KCUT_STATUS_OK) return 12;
    printf("%llu %zu %zu\n", (unsigned long long)kcut_result_weight(r), kcut_result_count(r), labels[4]);
    kcut_result_free(r);
    kcut_graph_free(g);
    if (kcut_graph_parse("0 0 1", &g) != KCUT_STATUS_INVALID_GRAPH) return 13;
    if (kcut_last_error() == NULL) return 14;
    return 0;
}
"#;

/// `cargo test` does not refresh the static archive, so build it here in a
/// separate target directory.
fn build_static_lib() -> PathBuf {
    let manifest = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let target = manifest.join("../../target/c-check");
    let status = Command::new(env!("CARGO"))
        .args(["build", "--quiet", "--lib", "-p", "kcut-ffi", "--manifest-path"])
        .arg(manifest.join("Cargo.toml"))
        .env("CARGO_TARGET_DIR", &target)
        .status()
        .unwrap();
    assert!(status.success(), "cargo build of the static library failed");
    target.join("debug").join("libkcut_ffi.a")
}

#[test]
fn c_program_links_and_runs() {
    if Command::new("cc").arg("--version").output().is_err() {
        eprintln!("no C compiler, skipping");
        return;
    }
    let manifest = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let lib = build_static_lib();

    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("main.c");
    let exe = dir.path().join("main");
    std::fs::write(&src, PROGRAM).unwrap();
    let status = Command::new("cc")
        .arg("-std=c99")
        .arg("-Wall")
        .arg("-Werror")
        .arg("-I")
        .arg(manifest.join("include"))
        .arg(&src)
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .status()
        .unwrap();
    assert!(status.success(), "C compile failed");
    let out = Command::new(&exe).output().unwrap();
    assert!(out.status.success(), "C program exited with {:?}", out.status);
    // cut 9 in canonical order is {0,1,2} | {3} | {4}
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "3 10 2\n");
}
