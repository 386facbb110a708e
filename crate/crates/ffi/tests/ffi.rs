use std::ffi::{CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use amd_relay_ffi::*;
use libc::c_char;

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

unsafe fn take(p: *mut c_char) -> String {
    let s = CStr::from_ptr(p).to_str().unwrap().to_string();
    amd_relay_string_free(p);
    s
}

unsafe fn last_error() -> String {
    let p = amd_relay_last_error();
    assert!(!p.is_null());
    CStr::from_ptr(p).to_string_lossy().into_owned()
}

unsafe fn codec(field: &str, d: usize) -> (*mut AmdRelayField, *mut AmdRelayCodec) {
    let mut f = ptr::null_mut();
    assert_eq!(
        amd_relay_field_new(c(field).as_ptr(), &mut f),
        AmdRelayStatus::Ok
    );
    let mut k = ptr::null_mut();
    assert_eq!(amd_relay_codec_new(f, d, &mut k), AmdRelayStatus::Ok);
    (f, k)
}

#[test]
fn encode_decode_roundtrip_and_rejection() {
    unsafe {
        let (f, k) = codec("gf2_86", 3);
        assert_eq!(amd_relay_codec_encoded_len(k), 5);
        assert_eq!(amd_relay_field_hex_width(f), 22);
        let mut out = ptr::null_mut();
        assert_eq!(
            amd_relay_encode(k, c("1 2 3").as_ptr(), 7, &mut out),
            AmdRelayStatus::Ok
        );
        let cw = take(out);
        let parts: Vec<&str> = cw.split(' ').collect();
        assert_eq!(parts.len(), 5);

        let mut msg = ptr::null_mut();
        assert_eq!(
            amd_relay_decode(k, c(&cw).as_ptr(), &mut msg),
            AmdRelayStatus::Ok
        );
        assert_eq!(
            take(msg),
            "0000000000000000000001 0000000000000000000002 0000000000000000000003"
        );

        let mut bad: Vec<String> = parts.iter().map(|s| s.to_string()).collect();
        bad[0] = "0000000000000000000009".into();
        let mut msg = ptr::null_mut();
        assert_eq!(
            amd_relay_decode(k, c(&bad.join(" ")).as_ptr(), &mut msg),
            AmdRelayStatus::Rejected
        );
        assert!(msg.is_null());
        amd_relay_codec_free(k);
        amd_relay_field_free(f);
    }
}

#[test]
fn invalid_inputs_report_errors() {
    unsafe {
        let mut f = ptr::null_mut();
        assert_eq!(
            amd_relay_field_new(c("gf9").as_ptr(), &mut f),
            AmdRelayStatus::InvalidArgument
        );
        assert!(f.is_null());
        assert!(!last_error().is_empty());
        assert_eq!(
            amd_relay_field_new(ptr::null(), &mut f),
            AmdRelayStatus::NullPointer
        );

        let mut fld = ptr::null_mut();
        assert_eq!(
            amd_relay_field_new(c("gf2_8").as_ptr(), &mut fld),
            AmdRelayStatus::Ok
        );
        let mut k = ptr::null_mut();
        // 2 | d + 2 for d = 2.
        assert_eq!(
            amd_relay_codec_new(fld, 2, &mut k),
            AmdRelayStatus::InvalidArgument
        );
        assert!(last_error().contains("divides"));
        amd_relay_field_free(fld);

        let mut rate = 0.0;
        assert_eq!(
            amd_relay_secoqc_attack(3, c("0").as_ptr(), 10, 1, &mut rate),
            AmdRelayStatus::InvalidArgument
        );
        let s = CStr::from_ptr(amd_relay_status_str(AmdRelayStatus::Rejected));
        assert_eq!(s.to_str().unwrap(), "rejected");
        // Freeing NULL is a no-op.
        amd_relay_string_free(ptr::null_mut());
        amd_relay_field_free(ptr::null_mut());
    }
}

#[test]
fn share_and_recover() {
    unsafe {
        let (f, k) = codec("gf2_16", 3);
        let mut scheme = ptr::null_mut();
        assert_eq!(
            amd_relay_scheme_new(k, AmdRelaySchemeKind::Shamir, 2, 3, &mut scheme),
            AmdRelayStatus::Ok
        );
        let mut json = ptr::null_mut();
        assert_eq!(
            amd_relay_share(scheme, c("a b c").as_ptr(), 3, &mut json),
            AmdRelayStatus::Ok
        );
        let json = take(json);
        let mut v: serde_json::Value = serde_json::from_str(&json).unwrap();

        let mut out = ptr::null_mut();
        assert_eq!(
            amd_relay_recover(scheme, c(&json).as_ptr(), &mut out),
            AmdRelayStatus::Ok
        );
        assert_eq!(take(out), "000a 000b 000c");

        // Two of three shares still recover.
        v["entries"][1] = serde_json::Value::Null;
        let partial = v.to_string();
        assert_eq!(
            amd_relay_recover(scheme, c(&partial).as_ptr(), &mut out),
            AmdRelayStatus::Ok
        );
        assert_eq!(take(out), "000a 000b 000c");

        // A shifted share is caught by the AMD layer.
        v["entries"][0][0] = serde_json::Value::String("1234".into());
        let shifted = v.to_string();
        let mut out = ptr::null_mut();
        assert_eq!(
            amd_relay_recover(scheme, c(&shifted).as_ptr(), &mut out),
            AmdRelayStatus::Rejected
        );
        amd_relay_scheme_free(scheme);
        amd_relay_codec_free(k);
        amd_relay_field_free(f);
    }
}

#[test]
fn secoqc_attack_through_abi() {
    let mut rate = 0.0;
    let status = unsafe { amd_relay_secoqc_attack(3, c("deadbeef").as_ptr(), 50, 4, &mut rate) };
    assert_eq!(status, AmdRelayStatus::Ok);
    assert_eq!(rate, 1.0);
}

fn target_dir() -> PathBuf {
    // target/<profile>/deps/<test binary>
    let exe = std::env::current_exe().unwrap();
    exe.parent().unwrap().parent().unwrap().to_path_buf()
}

#[test]
fn header_compiles_and_links_from_c() {
    let header_dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("include");
    let header = std::fs::read_to_string(header_dir.join("amd_relay.h")).unwrap();
    for name in [
        "amd_relay_field_new",
        "amd_relay_encode",
        "amd_relay_decode",
        "amd_relay_recover",
        "amd_relay_secoqc_attack",
        "typedef struct AmdRelayScheme AmdRelayScheme",
    ] {
        assert!(header.contains(name), "header lacks {name}");
    }
    let lib = target_dir().join("libamd_relay_ffi.a");
    let cc = std::env::var("CC").unwrap_or_else(|_| "cc".into());
    if Command::new(&cc).arg("--version").output().is_err() || !lib.exists() {
        eprintln!("skipping C link check: no C compiler or static library");
        return;
    }
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("main.c");
    std::fs::write(
        &src,
        r#"
#include <stdio.h>
#include <string.h>
#include "amd_relay.h"

int main(void) {
    AmdRelayField *f = NULL;
    AmdRelayCodec *k = NULL;
    char *cw = NULL, *msg = NULL;
    if (amd_relay_field_new("gf7", &f) != AMD_RELAY_STATUS_OK) return 10;
    if (amd_relay_codec_new(f, 3, &k) != AMD_RELAY_STATUS_OK) return 11;
    if (amd_relay_encode(k, "1,2,3", 0, &cw) != AMD_RELAY_STATUS_OK) return 12;
    if (amd_relay_decode(k, cw, &msg) != AMD_RELAY_STATUS_OK) return 13;
    printf("%s\n", msg);
    if (amd_relay_decode(k, "01 02 03 00 00", &msg) == AMD_RELAY_STATUS_OK
        && strcmp(msg, "01 02 03") != 0) return 14;
    amd_relay_string_free(cw);
    amd_relay_codec_free(k);
    amd_relay_field_free(f);
    return 0;
}
"#,
    )
    .unwrap();
    let exe = dir.path().join("main");
    let status = Command::new(&cc)
        .arg(&src)
        .arg("-I")
        .arg(&header_dir)
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .status()
        .unwrap();
    assert!(status.success(), "C compile failed");
    let run = Command::new(&exe).output().unwrap();
    assert!(
        run.status.success(),
        "C program exited with {:?}",
        run.status
    );
    assert_eq!(String::from_utf8_lossy(&run.stdout).trim(), "01 02 03");
}
