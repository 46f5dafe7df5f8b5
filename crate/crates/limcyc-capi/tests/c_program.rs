//! Compiles and runs a small C program against the generated header and the
//! built static library, proving the advertised embedding workflow.

use std::path::PathBuf;
use std::process::Command;

const C_SOURCE: &str = r#"
#include <stdio.h>
#include <stdlib.h>
#include "limcyc.h"

int main(void) {
    LimcycField *field = NULL;
    LimcycStatus status = limcyc_field_from_json(
        "{\"kind\": \"lienard_phase\", \"f\": \"x^2-1\", \"g\": \"x\"}", &field);
    if (status != LIMCYC_STATUS_OK) {
        fprintf(stderr, "field: %s\n", limcyc_last_error_message());
        return 1;
    }

    LimcycCycleSet *cycles = NULL;
    status = limcyc_find_cycles(field, 0.1, 8.0, 20, &cycles);
    if (status != LIMCYC_STATUS_OK) {
        fprintf(stderr, "cycles: %s\n", limcyc_last_error_message());
        return 1;
    }
    if (limcyc_cycle_set_len(cycles) != 1) {
        fprintf(stderr, "expected one cycle\n");
        return 1;
    }
    LimcycCycleInfo info;
    if (limcyc_cycle_set_get(cycles, 0, &info) != LIMCYC_STATUS_OK) {
        return 1;
    }
    if (info.stability != LIMCYC_STABILITY_ATTRACTING || info.div_integral >= 0.0) {
        fprintf(stderr, "unexpected classification\n");
        return 1;
    }
    printf("y_star=%.9f period=%.6f\n", info.y_star, info.period);

    limcyc_cycle_set_free(cycles);
    limcyc_field_free(field);
    return 0;
}
"#;

#[test]
fn c_program_links_and_runs() {
    let manifest = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let include_dir = manifest.join("include");
    // target/<profile>/ relative to the workspace root
    let lib_dir = {
        let mut exe = std::env::current_exe().unwrap();
        exe.pop(); // test binary name
        if exe.ends_with("deps") {
            exe.pop();
        }
        exe
    };
    let static_lib = lib_dir.join("liblimcyc_capi.a");
    assert!(
        static_lib.exists(),
        "static library not found at {}",
        static_lib.display()
    );
    let compiler = ["cc", "gcc", "clang"].iter().find(|c| {
        Command::new(c)
            .arg("--version")
            .output()
            .map(|o| o.status.success())
            .unwrap_or(false)
    });
    let Some(compiler) = compiler else {
        eprintln!("no C compiler available; skipping the link test");
        return;
    };

    let work = std::env::temp_dir().join(format!("limcyc-c-{}", std::process::id()));
    std::fs::create_dir_all(&work).unwrap();
    let source = work.join("main.c");
    std::fs::write(&source, C_SOURCE).unwrap();
    let binary = work.join("limcyc_demo");

    let compile = Command::new(compiler)
        .arg(source.to_str().unwrap())
        .arg(format!("-I{}", include_dir.display()))
        .arg(static_lib.to_str().unwrap())
        .args(["-lm", "-lpthread", "-ldl", "-o"])
        .arg(binary.to_str().unwrap())
        .output()
        .unwrap();
    assert!(
        compile.status.success(),
        "compilation failed:\n{}",
        String::from_utf8_lossy(&compile.stderr)
    );

    let output = Command::new(&binary).output().unwrap();
    assert!(
        output.status.success(),
        "C program failed:\n{}",
        String::from_utf8_lossy(&output.stderr)
    );
    let stdout = String::from_utf8_lossy(&output.stdout);
    // the cycle ordinate computed through the C surface
    assert!(
        stdout.contains("y_star=2.17271369"),
        "unexpected output: {stdout}"
    );
}
