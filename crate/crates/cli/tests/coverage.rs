//! Walks the subcommand tree from `--help` and runs every leaf once.

use std::collections::BTreeSet;
use std::process::Command;

fn eposa(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_eposa"))
        .args(args)
        .current_dir(env!("CARGO_MANIFEST_DIR"))
        .env_remove("EPOSA_NODE_BUDGET")
        .output()
        .unwrap()
}

fn subcommands(parent: &str) -> BTreeSet<String> {
    let help = String::from_utf8(eposa(&[parent, "--help"]).stdout).unwrap();
    help.lines()
        .skip_while(|l| !l.starts_with("Commands:"))
        .skip(1)
        .take_while(|l| l.starts_with("  "))
        .filter_map(|l| l.split_whitespace().next())
        .filter(|c| *c != "help")
        .map(str::to_string)
        .collect()
}

const Z: &str = "tests/data/z22.json.instance.json";

#[test]
fn every_subcommand_is_reachable() {
    let gen: &[(&str, &[&str])] = &[
        ("heinlein", &["--size", "1"]),
        ("wall", &["--rows", "2", "--cols", "3", "--prime"]),
        ("grid", &["--rows", "2", "--cols", "2"]),
        (
            "multiply",
            &["-i", "tests/data/w22.g6", "--edge", "0,2", "-k", "2"],
        ),
        (
            "z",
            &[
                "--pattern",
                "tests/data/w22.json",
                "--e1",
                "0,2",
                "--e2",
                "1,5",
                "-r",
                "1",
                "--min-apart",
                "0",
            ],
        ),
    ];
    let check: &[(&str, &[&str])] = &[
        ("linkage", &["--heinlein", "2"]),
        ("two-linkages", &["--heinlein", "1"]),
        ("robustness", &["--heinlein", "2", "--budget", "1"]),
        (
            "no-hitting-set",
            &["-i", Z, "--budget", "1", "--mode", "structural"],
        ),
        ("pathwidth", &["--heinlein", "1"]),
        ("treewidth", &["--wall", "2,2", "--prime"]),
        (
            "apart",
            &["--wall", "4,4", "--prime", "--u", "5", "--v", "10"],
        ),
        ("far-pair", &["--wall", "3,3", "--prime", "--distance", "0"]),
        ("subdivision", &["-i", Z, "--pattern", "tests/data/w22.g6"]),
        (
            "lemma5-survey",
            &["-i", "tests/data/h2.json", "--budget-nodes", "1"],
        ),
        (
            "separator",
            &["--heinlein", "2", "--center", "11", "--targets", "0,1,2"],
        ),
        (
            "three-fan",
            &["--heinlein", "2", "--center", "11", "--targets", "0,1,2"],
        ),
        ("branch-fans", &["-i", Z]),
        ("planarity", &["--heinlein", "2"]),
    ];
    for (parent, table) in [("gen", gen), ("check", check)] {
        let listed = subcommands(parent);
        let covered: BTreeSet<String> = table.iter().map(|(c, _)| c.to_string()).collect();
        assert_eq!(
            listed, covered,
            "{parent} subcommands and the coverage table differ"
        );
        for (cmd, extra) in table {
            let mut args = vec![parent, *cmd];
            args.extend_from_slice(extra);
            let out = eposa(&args);
            let code = out.status.code().unwrap();
            // The survey entry points at a plain graph on purpose: a usage error.
            let want: &[i32] = if *cmd == "lemma5-survey" {
                &[2]
            } else {
                &[0, 1]
            };
            assert!(
                want.contains(&code),
                "{args:?} exited {code}: {}",
                String::from_utf8_lossy(&out.stderr)
            );
        }
    }
    // And the survey proper, on the Z sidecar, within a budget it cannot meet.
    let out = eposa(&["check", "lemma5-survey", "-i", Z, "--budget-nodes", "1000"]);
    assert_eq!(out.status.code(), Some(3));
}
