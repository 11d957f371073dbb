use std::process::{Command, Output};

/// One fixed configuration per subcommand, with a golden file name.
pub const CASES: &[(&str, &[&str])] = &[
    (
        "sample",
        &["sample", "--schedule", "n2+n", "--n", "3", "--seed", "3"],
    ),
    (
        "sample_json",
        &[
            "sample",
            "--schedule",
            "2n",
            "--n",
            "2",
            "--seed",
            "11",
            "--stream",
            "4",
            "--format",
            "json",
        ],
    ),
    (
        "densify",
        &[
            "densify",
            "--l",
            "depths:0,1,3",
            "--m",
            "depths:0,1,2",
            "--n",
            "2",
            "--tree",
            "000,011,110",
            "--family",
        ],
    ),
    (
        "densify_sampled",
        &[
            "densify", "--l", "2n2", "--m", "n2", "--n", "3", "--seed", "5", "--format", "csv",
        ],
    ),
    (
        "mc",
        &[
            "mc",
            "--l",
            "2n2",
            "--m",
            "n2",
            "--n",
            "3",
            "--samples",
            "20000",
            "--seed",
            "7",
        ],
    ),
    (
        "series",
        &[
            "series",
            "--schedule",
            "square",
            "--N",
            "20",
            "--witness",
            "2",
        ],
    ),
    (
        "series_csv",
        &[
            "series",
            "--schedule",
            "paper:2",
            "--N",
            "6",
            "--format",
            "csv",
        ],
    ),
    (
        "compat",
        &["series", "--schedule", "2n2", "--N", "8", "--against", "n2"],
    ),
    (
        "hitcost",
        &[
            "hitcost",
            "--height",
            "3",
            "--paths-inside",
            "000,001,011,110",
            "--q",
            "000,001,011,110",
            "--level",
            "2",
        ],
    ),
    (
        "hitcost_greedy",
        &[
            "hitcost",
            "--height",
            "2",
            "--q",
            "00,01,10,11",
            "--level",
            "2",
            "--mode",
            "greedy",
        ],
    ),
    (
        "pullback",
        &[
            "pullback",
            "--schedule",
            "depths:0,1,3,4",
            "--n",
            "1",
            "--h-next",
            "000,011,101",
            "--q",
            "0000,0110,1011,1100",
        ],
    ),
    (
        "envelope",
        &[
            "envelope-check",
            "--schedule",
            "n",
            "--r",
            "1",
            "--levels",
            "2,3",
            "--set",
            ":00,01,10,11",
            "--set",
            "0:000,001,010,011",
            "--set",
            "1:100,101",
            "--q",
            "000,001,010,011,100,101,110,111",
            "--height",
            "3",
            "--extends",
            "000,111",
            "--format",
            "csv",
        ],
    ),
    (
        "kc",
        &[
            "kc",
            "--request",
            "0:2",
            "--request",
            "1:1",
            "--request",
            "11:3",
        ],
    ),
    (
        "kc_deficiency",
        &[
            "kc",
            "--deficiency",
            "2:0000",
            "--deficiency",
            "3:110011",
            "--format",
            "csv",
        ],
    ),
    (
        "pc_trunc",
        &[
            "pc-trunc",
            "--oracle",
            "table:000=0,01=1",
            "--c",
            "1",
            "--depth",
            "4",
        ],
    ),
    (
        "pc_trunc_rl",
        &[
            "pc-trunc",
            "--oracle",
            "run-length",
            "--c",
            "0",
            "--depth",
            "6",
            "--format",
            "json",
        ],
    ),
    ("density", &["density", "--q", "00,01,10", "--z", "10"]),
    (
        "prune",
        &[
            "prune",
            "--p",
            "000,011,100,101,110",
            "--schedule",
            "gaps:1,2",
            "--n",
            "2",
            "--format",
            "json",
        ],
    ),
    (
        "prune_leaves",
        &[
            "prune",
            "--p",
            "0000,0001,0100,0111,1000",
            "--schedule",
            "gaps:2,2",
            "--n",
            "2",
        ],
    ),
    (
        "derive_tree",
        &["derive-tree", "--z", "0101", "--depth", "4"],
    ),
];

pub fn pitree(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pitree"))
        .args(args)
        .env_remove("PITREE_OUT_DIR")
        .output()
        .expect("run pitree")
}
