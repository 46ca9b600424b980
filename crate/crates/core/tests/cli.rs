use std::path::PathBuf;
use std::process::{Command, Output};

fn cyclemon(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cyclemon")).args(args).output().expect("run cyclemon")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("cyclemon-cli-{}-{name}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn one_shot_commands() {
    let o = cyclemon(&["inv", "a+ b- c+"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "c- b+ a-\n");

    let o = cyclemon(&["eval", "[+ (pair +- leaf:a (pair +- leaf:b leaf:c))]"]);
    assert_eq!(stdout(&o), "a+ b+ c+\n");

    let o = cyclemon(&["pair", "-+", "a+", "b+"]);
    assert_eq!(stdout(&o), "a- b-\n");
}

#[test]
fn exit_codes() {
    let o = cyclemon(&["inv", "a+ z-"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("unknown generator"));

    let o = cyclemon(&["inv", "a* b+"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("syntax error at 1:2"));
}

#[test]
fn session_file_persists_between_invocations() {
    let dir = scratch("session");
    let file = dir.join("s.session");
    let file = file.to_str().unwrap();
    assert_eq!(cyclemon(&["--session", file, "gens", "x", "y"]).status.code(), Some(0));
    assert_eq!(cyclemon(&["--session", file, "let", "w", "x+ y-"]).status.code(), Some(0));
    let o = cyclemon(&["--session", file, "class", "w"]);
    assert_eq!(stdout(&o), "x+ y- ~ y+ x-\n");
    let o = cyclemon(&["--session", file, "ab", "w"]);
    assert_eq!(stdout(&o), "(1, -1)\n");
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn script_mode_reports_first_failure() {
    let dir = scratch("script");
    let script = dir.join("run.cmds");
    std::fs::write(&script, "gens a b\nab \"a+ a+ b-\"\ncoset nonsense\ninv \"b+\"\n").unwrap();
    let o = cyclemon(&["--script", script.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let text = stdout(&o);
    assert!(text.starts_with("> gens a b\ngenerators: a b\n> ab \"a+ a+ b-\"\n(2, -1)\n> coset nonsense\n"), "{text}");
    assert!(text.ends_with("> inv \"b+\"\nb-\n"), "{text}");
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn golden_script_through_the_binary() {
    let dir = scratch("golden");
    let fixtures = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures");
    for name in ["session.cmds", "relations.lat", "plane.txt"] {
        std::fs::copy(fixtures.join(name), dir.join(name)).unwrap();
    }
    let o = cyclemon(&["--script", dir.join("session.cmds").to_str().unwrap()]);
    let golden = std::fs::read_to_string(fixtures.join("session.golden")).unwrap();
    assert_eq!(stdout(&o), golden);
    assert_eq!(o.status.code(), Some(1));
    std::fs::remove_dir_all(&dir).unwrap();
}
