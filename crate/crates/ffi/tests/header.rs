use std::env;
use std::fs;
use std::path::PathBuf;
use std::process::Command;

fn manifest_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

#[test]
fn header_declares_the_api() {
    let h = fs::read_to_string(manifest_dir().join("include/cube.h")).unwrap();
    for name in [
        "typedef struct CubeSession CubeSession;",
        "typedef struct CubeTerm CubeTerm;",
        "CUBE_STATUS_OK = 0",
        "CUBE_STATUS_FUEL_EXHAUSTED = 3",
        "cube_session_new(",
        "cube_term_parse(",
        "cube_infer(",
        "cube_eta_long(",
        "cube_last_error(",
        "cube_string_free(",
    ] {
        assert!(h.contains(name), "{name}");
    }
}

/// Compiles and runs a C client against the static library.
#[test]
fn c_client_links_and_runs() {
    let Ok(exe) = env::current_exe() else { return };
    // target/<profile>/deps/<test> -> target/<profile>
    let profile = exe.parent().and_then(|d| d.parent()).unwrap();
    let lib = profile.join("libcube_ffi.a");
    if !lib.exists() || Command::new("cc").arg("--version").output().is_err() {
        eprintln!("skipping: no static library or C compiler");
        return;
    }
    let dir = tempfile_dir();
    let src = dir.join("client.c");
    fs::write(
        &src,
        r#"
#include <stdio.h>
#include <string.h>
#include "cube.h"

int main(void) {
    CubeSession *s = NULL;
    CubeTerm *t = NULL, *ty = NULL;
    char *out = NULL;
    if (cube_session_new("stlc", 0, &s) != CUBE_STATUS_OK) return 1;
    if (cube_session_set_context(s, "P : Prop; f : P -> P; a : P") != CUBE_STATUS_OK) return 2;
    if (cube_term_parse(s, "f a", &t) != CUBE_STATUS_OK) return 3;
    if (cube_infer(s, t, &ty) != CUBE_STATUS_OK) return 4;
    if (cube_term_print(ty, &out) != CUBE_STATUS_OK) return 5;
    printf("%s\n", out);
    cube_string_free(out);
    cube_term_free(ty);
    cube_term_free(t);
    if (cube_term_parse(s, "(", &t) != CUBE_STATUS_PARSE_ERROR) return 6;
    printf("%s\n", cube_last_error() ? "error kept" : "no error");
    cube_session_free(s);
    return 0;
}
"#,
    )
    .unwrap();
    let bin = dir.join("client");
    let status = Command::new("cc")
        .arg(&src)
        .arg("-I")
        .arg(manifest_dir().join("include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&bin)
        .status()
        .unwrap();
    assert!(status.success());
    let out = Command::new(&bin).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8_lossy(&out.stdout), "P\nerror kept\n");
}

fn tempfile_dir() -> PathBuf {
    let dir = env::temp_dir().join(format!("cube-ffi-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    dir
}
