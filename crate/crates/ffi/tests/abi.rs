use std::ffi::{CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use dirac_ham_ffi::*;

fn last_error() -> String {
    unsafe { CStr::from_ptr(dh_last_error()) }
        .to_string_lossy()
        .into_owned()
}

fn complete(n: usize) -> *mut DhGraph {
    let mut flat = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            flat.extend([u, v]);
        }
    }
    let mut g = ptr::null_mut();
    assert_eq!(
        unsafe { dh_graph_from_edges(n, flat.as_ptr(), flat.len() / 2, &mut g) },
        DH_OK
    );
    g
}

#[test]
fn graph_lifecycle_and_hamilton_search() {
    let g = complete(7);
    unsafe {
        assert_eq!((dh_graph_n(g), dh_graph_m(g)), (7, 21));
        let mut dirac = false;
        assert_eq!(dh_is_dirac(g, &mut dirac), DH_OK);
        assert!(dirac);
        let mut seq = [0usize; 7];
        let mut found = false;
        assert_eq!(
            dh_find_hamilton_cycle(g, 5, 10_000, 1, seq.as_mut_ptr(), seq.len(), &mut found),
            DH_OK
        );
        assert!(found);
        let mut ok = false;
        assert_eq!(dh_verify_hamilton_cycle(g, seq.as_ptr(), seq.len(), &mut ok), DH_OK);
        assert!(ok);
        let mut small = [0usize; 3];
        assert_eq!(
            dh_find_hamilton_cycle(g, 5, 10_000, 1, small.as_mut_ptr(), small.len(), &mut found),
            DH_ERR_BUFFER
        );
        dh_graph_free(g);
    }
}

#[test]
fn parse_and_classify() {
    let text = CString::new("4 4\n0 1\n1 2\n2 3\n0 3\n").unwrap();
    let mut g = ptr::null_mut();
    unsafe {
        assert_eq!(dh_graph_parse(text.as_ptr(), &mut g), DH_OK);
        let mut case = -1;
        assert_eq!(dh_classify(g, 1.0 / 320.0, 0.1, true, 0, &mut case), DH_OK);
        // C4 is K_{2,2}
        assert_eq!(case, DH_CASE_NEAR_BIPARTITE);
        // out-of-range alpha
        assert_eq!(dh_classify(g, 0.5, 0.1, true, 0, &mut case), DH_ERR_DOMAIN);
        assert!(last_error().contains("alpha"));
        dh_graph_free(g);

        let bad = CString::new("3 1\n2 1\n").unwrap();
        let mut h = ptr::null_mut();
        assert_eq!(dh_graph_parse(bad.as_ptr(), &mut h), DH_ERR_PARSE);
        assert!(h.is_null());
    }
}

#[test]
fn null_and_invalid_arguments() {
    unsafe {
        let mut g = ptr::null_mut();
        assert_eq!(dh_graph_parse(ptr::null(), &mut g), DH_ERR_NULL);
        assert_eq!(dh_graph_from_edges(3, ptr::null(), 1, &mut g), DH_ERR_NULL);
        let loops = [1usize, 1];
        assert_eq!(dh_graph_from_edges(3, loops.as_ptr(), 1, &mut g), DH_ERR_PARSE);
        let mut flag = false;
        assert_eq!(dh_is_dirac(ptr::null(), &mut flag), DH_ERR_NULL);
        assert_eq!(dh_graph_n(ptr::null()), 0);
        dh_graph_free(ptr::null_mut());
        dh_game_free(ptr::null_mut());
        assert!(dh_game_state_hash(ptr::null_mut()).is_null());
    }
}

#[test]
fn game_handle_enforces_turns() {
    let g = complete(4);
    let mut game = ptr::null_mut();
    unsafe {
        assert_eq!(dh_game_new(g, 1, 2, DH_PLAYER_MAKER, &mut game), DH_OK);
        assert_eq!(dh_game_to_move(game), DH_PLAYER_MAKER);
        assert_eq!(dh_game_claim(game, 0), DH_OK);
        assert_eq!(dh_game_owner(game, 0), DH_PLAYER_MAKER);
        assert_eq!(dh_game_claim(game, 0), DH_ERR_ILLEGAL_MOVE);
        assert!(last_error().contains("claimed"));
        assert_eq!(dh_game_to_move(game), DH_PLAYER_BREAKER);
        let h0 = CStr::from_ptr(dh_game_state_hash(game)).to_str().unwrap().to_string();
        assert_eq!(h0.len(), 64);
        for e in 1..6 {
            assert_eq!(dh_game_claim(game, e), DH_OK);
        }
        assert_eq!(dh_game_to_move(game), -1);
        assert_eq!(dh_game_claim(game, 5), DH_ERR_ILLEGAL_MOVE);
        let h1 = CStr::from_ptr(dh_game_state_hash(game)).to_str().unwrap();
        assert_ne!(h0, h1);
        assert_eq!(dh_game_new(g, 0, 2, DH_PLAYER_MAKER, &mut game), DH_ERR_DOMAIN);
        dh_game_free(game);
        dh_graph_free(g);
    }
}

fn header() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("include/dirac_ham.h")
}

#[test]
fn header_declares_the_api() {
    let text = std::fs::read_to_string(header()).unwrap();
    for name in [
        "dh_last_error",
        "dh_graph_from_edges",
        "dh_graph_parse",
        "dh_graph_free",
        "dh_find_hamilton_cycle",
        "dh_classify",
        "dh_game_new",
        "dh_game_claim",
        "dh_game_state_hash",
        "typedef struct DhGraph DhGraph",
        "#define DH_ERR_ILLEGAL_MOVE 11",
    ] {
        assert!(text.contains(name), "missing {name}");
    }
}

/// The header compiles as C when a C compiler is on the path.
#[test]
fn header_is_valid_c() {
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("use.c");
    std::fs::write(
        &src,
        "#include \"dirac_ham.h\"\nint main(void) { DhGraph *g = 0; size_t e[2] = {0, 1};\n\
         return dh_graph_from_edges(2, e, 1, &g) == DH_OK ? 0 : 1; }\n",
    )
    .unwrap();
    let include = header().parent().unwrap().to_path_buf();
    let status = Command::new("cc")
        .arg("-fsyntax-only")
        .arg("-Wall")
        .arg("-Werror")
        .arg("-I")
        .arg(&include)
        .arg(&src)
        .status();
    match status {
        Ok(s) => assert!(s.success()),
        Err(_) => eprintln!("no C compiler found, skipping"),
    }
}
