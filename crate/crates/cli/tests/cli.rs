use std::path::PathBuf;

use cli::{parse_certificate, parse_structure_file, run_command, serialize_structure_file, EXIT_CAP, EXIT_FAILS, EXIT_HOLDS, EXIT_INVALID};

fn corpus(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("corpus").join(name).to_string_lossy().into_owned()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("cli-tests-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn corpus_round_trips_byte_identically() {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("corpus");
    let mut n = 0;
    for entry in std::fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        let text = std::fs::read_to_string(&path).unwrap();
        let f = parse_structure_file(&text).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        assert_eq!(serialize_structure_file(&f), text, "{}", path.display());
        n += 1;
    }
    assert!(n >= 20);
}

#[test]
fn triangle_has_six_directed_tuples() {
    let f = parse_structure_file(&std::fs::read_to_string(corpus("triangle.st")).unwrap()).unwrap();
    let t = f.structure("triangle").unwrap();
    assert_eq!(t.size(), 3);
    assert_eq!(t.tuples(0).len(), 6);
}

#[test]
fn parse_errors_carry_line_numbers() {
    let head = "language L\nrel E 2\nfun F 1\nend\nstructure G over L\nvertices 3\n";
    let e = parse_structure_file(&format!("{head}rel E: 0 1 2\nend\n")).unwrap_err();
    assert_eq!(e.line, 7);
    assert!(e.message.contains("arity"), "{e}");
    let e = parse_structure_file(&format!("{head}rel E: 0 3\nend\n")).unwrap_err();
    assert_eq!(e.line, 7);
    assert!(e.message.contains("out of range"), "{e}");
    let e = parse_structure_file(&format!("{head}fun F: (0 1) -> {{2}}\nend\n")).unwrap_err();
    assert_eq!(e.line, 7);
    let e = parse_structure_file("structure G over M\nend\n").unwrap_err();
    assert_eq!(e.line, 1);
    let e = parse_structure_file(&format!("{head}rel E: 0 1\n")).unwrap_err();
    assert!(e.message.contains("missing `end`"));
    let e = parse_structure_file("language L\nrel E 2\nend\nstructure G over L\nrel E: 0 1\nend\n").unwrap_err();
    assert_eq!(e.line, 5);
}

#[test]
fn comments_whitespace_and_functions() {
    let text = "# header\nlanguage L   # trailing\n  rel E 2\nfun F 1\nfun c 0\nend\n\nstructure G over L\nvertices 3\nrel E: 0 1 ;1 0;\nfun F: (0) -> {1 2}; (2) -> {}\nfun c: () -> {0}\nend\n";
    let f = parse_structure_file(text).unwrap();
    let g = f.structure("G").unwrap();
    assert_eq!(g.tuples(0).len(), 2);
    assert_eq!(g.value(0, &[0]).len(), 2);
    assert!(g.value(0, &[2]).is_empty());
    assert_eq!(g.value(1, &[]).len(), 1);
    let canon = serialize_structure_file(&f);
    assert!(canon.contains("fun F: (0) -> {1 2}\n"));
    assert_eq!(serialize_structure_file(&parse_structure_file(&canon).unwrap()), canon);
}

#[test]
fn chain_arrows_exit_codes() {
    let out = run_command(&["arrow", &corpus("chain1.st"), &corpus("chain3.st"), &corpus("chain5.st"), "--colors", "2"]);
    assert_eq!(out.code, EXIT_HOLDS);
    let out = run_command(&["arrow", &corpus("chain1.st"), &corpus("chain3.st"), &corpus("chain4.st"), "--colors", "2"]);
    assert_eq!(out.code, EXIT_FAILS);
    assert!(out.stdout.contains("coloring 0 0 1 1\n"));
    let cert = parse_certificate(&out.stdout).unwrap();
    assert_eq!(cert.kind, "arrow");
    assert_eq!(cert.inputs.len(), 3);
}

#[test]
fn tangent_five() {
    let out = run_command(&["tangent", "5"]);
    assert_eq!(out.code, EXIT_HOLDS);
    assert_eq!(out.stdout, "1 2 16 272 7936\n");
}

#[test]
fn invalid_inputs_exit_two() {
    assert_eq!(run_command(&["arrow", "/nonexistent.st", "a", "b", "--colors", "2"]).code, EXIT_INVALID);
    assert_eq!(run_command(&["no-such-command"]).code, EXIT_INVALID);
    assert_eq!(run_command(&["tangent", "x"]).code, EXIT_INVALID);
    let bad = scratch("bad.st");
    std::fs::write(&bad, "language L\nrel E 2\nend\nstructure G over L\nvertices 2\nrel E: 0 1 1\nend\n").unwrap();
    let out = run_command(&["validate", bad.to_str().unwrap()]);
    assert_eq!(out.code, EXIT_INVALID);
    assert!(out.stdout.contains("line 6"), "{}", out.stdout);
    let out = run_command(&["arrow", &corpus("chain1.st"), &corpus("ok2.st"), &corpus("chain3.st"), "--colors", "2"]);
    assert_eq!(out.code, EXIT_INVALID);
    assert_eq!(run_command(&["tangent", "3", "--threads", "0"]).code, EXIT_INVALID);
}

#[test]
fn caps_exit_three() {
    let out = run_command(&["arrow", &corpus("ok2.st"), &corpus("ok3.st"), &corpus("ok6.st"), "--colors", "2", "--node-cap", "5"]);
    assert_eq!(out.code, EXIT_CAP);
    assert_eq!(run_command(&["hj", "2", "3", "--cap", "1"]).code, EXIT_CAP);
    let out = run_command(&[
        "partite", "induced", &corpus("ok1.st"), &corpus("ok2.st"), &corpus("ok3.st"), "--exponent-policy", "witness:2",
        "--caps", "vertices=10",
    ]);
    assert_eq!(out.code, EXIT_CAP);
}

#[test]
fn threads_flag_does_not_change_output() {
    let args = ["arrow", &corpus("ok2.st"), &corpus("ok3.st"), &corpus("ok5.st"), "--colors", "2"];
    let one = run_command(&args);
    let mut more: Vec<&str> = args.to_vec();
    more.extend(["--threads", "4"]);
    assert_eq!(run_command(&more), one);
}

#[test]
fn certificates_replay_and_tampering_is_caught() {
    let cases: Vec<Vec<String>> = vec![
        vec!["arrow".into(), corpus("chain1.st"), corpus("chain3.st"), corpus("chain4.st"), "--colors".into(), "2".into()],
        vec!["complete".into(), "metric".into(), corpus("metric_bad.st")],
        vec!["complete".into(), "equiv".into(), corpus("equiv_ok.st")],
        vec!["orient".into(), "orient".into(), corpus("k5.st")],
        vec!["eppa".into(), "check".into(), corpus("p3.st"), corpus("p3.st")],
        vec!["hj".into(), "1".into(), "3".into(), "--cap".into(), "2".into()],
    ];
    for (i, args) in cases.iter().enumerate() {
        let path = scratch(&format!("cert{i}.txt"));
        let mut with_cert = args.clone();
        with_cert.extend(["--cert".to_string(), path.to_string_lossy().into_owned()]);
        let first = run_command(&with_cert);
        assert!(first.code == EXIT_HOLDS || first.code == EXIT_FAILS, "{args:?}: {}", first.stdout);
        let text = std::fs::read_to_string(&path).unwrap();
        let v = run_command(&["verify", path.to_str().unwrap()]);
        assert_eq!(v.code, EXIT_HOLDS, "{args:?}: {}", v.stdout);
        let verdict = if first.code == EXIT_HOLDS { "holds" } else { "fails" };
        assert!(v.stdout.contains(&format!("verdict {verdict}")));

        // Any change to a result line is caught by the rerun.
        let pos = text.find("\nresult ").unwrap() + "\nresult ".len();
        let tampered = format!("{}X{}", &text[..pos], &text[pos..]);
        std::fs::write(&path, tampered).unwrap();
        assert_eq!(run_command(&["verify", path.to_str().unwrap()]).code, EXIT_FAILS);
    }
}

#[test]
fn forged_witness_is_rejected_independently() {
    let path = scratch("forged.txt");
    let out = run_command(&["arrow", &corpus("chain1.st"), &corpus("chain3.st"), &corpus("chain4.st"), "--colors", "2"]);
    let forged = out.stdout.replace("result coloring 0 0 1 1", "result coloring 0 0 0 1");
    std::fs::write(&path, forged).unwrap();
    let v = run_command(&["verify", path.to_str().unwrap()]);
    assert_eq!(v.code, EXIT_FAILS);
    assert!(v.stdout.contains("witness rejected"), "{}", v.stdout);
}

#[test]
fn malformed_certificates_are_invalid() {
    let path = scratch("junk.txt");
    std::fs::write(&path, "nothing here\n").unwrap();
    assert_eq!(run_command(&["verify", path.to_str().unwrap()]).code, EXIT_INVALID);
    std::fs::write(&path, "cert arrow v2\n").unwrap();
    assert_eq!(run_command(&["verify", path.to_str().unwrap()]).code, EXIT_INVALID);
}

#[test]
fn outputs_are_byte_identical_across_runs() {
    let runs = [
        vec!["eppa".to_string(), "npartite".into(), corpus("tournament_path.st"), "--parts".into(), "0,1,0".into()],
        vec!["partite".into(), "sparsen".into(), corpus("ok1.st"), corpus("ok2.st"), corpus("ok3.st"), "--n".into(), "2".into()],
        vec!["orient".into(), "class".into(), corpus("k6.st")],
    ];
    for args in &runs {
        assert_eq!(run_command(args), run_command(args));
    }
}

#[test]
fn emb_projection_and_closed() {
    let lp = scratch("lp.st");
    std::fs::write(
        &lp,
        "language P\nrel E 2\nrel @0 1\nrel @1 1\nend\n\nstructure A over P\nvertices 2\nrel E: 0 1; 1 0\nrel @0: 0\nrel @1: 1\nend\n\n\
         structure B over P\nvertices 4\nrel E: 0 2; 0 3; 2 0; 3 0\nrel @0: 0; 1\nrel @1: 2; 3\nend\n",
    )
    .unwrap();
    let p = lp.to_str().unwrap();
    let out = run_command(&["emb", &format!("{p}:A"), &format!("{p}:B"), "--projection"]);
    assert_eq!(out.code, EXIT_HOLDS);
    assert!(out.stdout.ends_with("count 2\n"), "{}", out.stdout);
    let out = run_command(&["emb", &corpus("chain2.st"), &corpus("chain3.st"), "--closed", "<"]);
    assert_eq!(out.code, EXIT_HOLDS);
    assert_eq!(out.stdout, "embedding 1 2\ncount 1\n");
    assert_eq!(run_command(&["emb", p, &corpus("chain3.st")]).code, EXIT_INVALID);
}

#[test]
fn free_and_tree_amalgams() {
    let out = run_command(&["amalgam", &corpus("ok1.st"), &corpus("ok2.st"), &corpus("ok2.st"), "--alpha1", "0", "--alpha2", "0"]);
    assert_eq!(out.code, EXIT_HOLDS, "{}", out.stdout);
    assert!(out.stdout.contains("vertices 3\n"));
    assert!(out.stdout.contains("beta2 0 2\n"));
    let recipe = scratch("tree.txt");
    std::fs::write(
        &recipe,
        format!("leaf {}\nleaf\nleaf\njoin 0 1 over {} f1 0 f2 0\nleaf\njoin 2 3 over {} f1 1 f2 1\n", corpus("ok2.st"), corpus("ok1.st"), corpus("ok1.st")),
    )
    .unwrap();
    let out = run_command(&["amalgam", "--tree", recipe.to_str().unwrap()]);
    assert_eq!(out.code, EXIT_HOLDS, "{}", out.stdout);
    assert!(out.stdout.contains("vertices 4\n"));
    assert_eq!(out.stdout.matches("copy ").count(), 3);
}

#[test]
fn partite_lemma_and_picture_commands() {
    let lp = scratch("lemma.st");
    std::fs::write(
        &lp,
        "language G\nrel E 2\nend\n\nlanguage P\nrel E 2\nrel @0 1\nrel @1 1\nend\n\nstructure A over G\nvertices 2\nrel E: 0 1; 1 0\nend\n\n\
         structure B over P\nvertices 3\nrel E: 0 1; 0 2; 1 0; 2 0\nrel @0: 0\nrel @1: 1; 2\nend\n",
    )
    .unwrap();
    let p = lp.to_str().unwrap();
    for extra in [&[][..], &["--non-induced"][..]] {
        let mut args = vec!["partite", "lemma", &format!("{p}:A"), &format!("{p}:B"), "--exponent", "2"]
            .into_iter()
            .map(String::from)
            .collect::<Vec<_>>();
        args.extend(extra.iter().map(|s| s.to_string()));
        let out = run_command(&args);
        assert_eq!(out.code, EXIT_HOLDS, "{}", out.stdout);
        assert!(out.stdout.contains("alphabet 2\n"));
        assert!(!out.stdout.contains("FAILED"));
    }
    let out = run_command(&[
        "partite", "picture", &format!("{p}:A"), &format!("{p}:A"), &format!("{p}:B"), "--alpha", "0,1", "--exponent", "1",
    ]);
    assert_eq!(out.code, EXIT_HOLDS, "{}", out.stdout);
}

#[test]
fn closed_construction_command() {
    let out = run_command(&[
        "partite", "closed", &corpus("chain1.st"), &corpus("chain2.st"), "--target", &corpus("chain3.st"),
    ]);
    assert_eq!(out.code, EXIT_HOLDS, "{}", out.stdout);
    assert!(out.stdout.contains("copies"));
}

#[test]
fn completion_commands() {
    let out = run_command(&["complete", "equiv", &corpus("equiv_bad.st")]);
    assert_eq!(out.code, EXIT_FAILS);
    assert!(out.stdout.starts_with("conflict N 0 2\npath 0 1 2\n"));
    let out = run_command(&["complete", "order", &corpus("partial_order.st")]);
    assert_eq!(out.code, EXIT_HOLDS);
    let out = run_command(&["complete", "order", &corpus("order_cycle.st")]);
    assert_eq!(out.code, EXIT_FAILS);
    assert!(out.stdout.starts_with("cycle 0 1 2\n"));
    assert_eq!(run_command(&["complete", "poset", &corpus("order_cycle.st")]).code, EXIT_INVALID);
    assert_eq!(run_command(&["ba-corr", "3", "2"]).code, EXIT_HOLDS);
}
