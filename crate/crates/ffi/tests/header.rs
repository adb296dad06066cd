use std::path::{Path, PathBuf};
use std::process::Command;

fn crate_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

fn has_cc() -> bool {
    Command::new("cc").arg("--version").output().is_ok()
}

#[test]
fn header_declares_the_api() {
    let header = std::fs::read_to_string(crate_dir().join("include/oarray.h")).unwrap();
    for name in [
        "typedef struct OaArray OaArray",
        "OA_STATUS_OK = 0",
        "oa_array_parse",
        "oa_verify",
        "oa_develop",
        "oa_hadamard_basic",
        "oa_partition_part",
        "oa_delete_columns",
        "oa_last_error_message",
    ] {
        assert!(header.contains(name), "missing {name}");
    }
}

fn static_library() -> Option<PathBuf> {
    // target/<profile>/deps/<test binary>
    let exe = std::env::current_exe().ok()?;
    let profile_dir = exe.parent()?.parent()?;
    let lib = profile_dir.join("liboarray_ffi.a");
    lib.exists().then_some(lib)
}

#[test]
fn c_program_links_and_runs() {
    if !has_cc() {
        eprintln!("no C compiler; skipping");
        return;
    }
    let dir = crate_dir();
    let include = dir.join("include");
    let source = dir.join("tests/c/smoke.c");
    let Some(lib) = static_library() else {
        let status = Command::new("cc")
            .args(["-fsyntax-only", "-Wall", "-Werror", "-I"])
            .arg(&include)
            .arg(&source)
            .status()
            .unwrap();
        assert!(status.success());
        return;
    };
    let out_dir = tempfile::tempdir().unwrap();
    let exe = out_dir.path().join("smoke");
    let status = Command::new("cc")
        .args(["-Wall", "-Werror", "-I"])
        .arg(&include)
        .arg(&source)
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .status()
        .unwrap();
    assert!(status.success());
    let output = Command::new(Path::new(&exe)).output().unwrap();
    assert!(output.status.success(), "{output:?}");
    let stdout = String::from_utf8(output.stdout).unwrap();
    assert!(stdout.contains("k=9 n=2 lambda=5 rows=20 m=2"), "{stdout}");
    assert!(stdout.contains("error: order 92"), "{stdout}");
}
