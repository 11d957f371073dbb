use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use pitree::hitting::CostMode;
use pitree::schedule::AffineWitness;
use pitree::treespace::{TreeClass, DEFAULT_CAP};
use pitree::{BitString, FiniteTree, LevelSchedule, StringSet};

use crate::output::Format;

#[derive(Parser, Debug)]
#[command(
    name = "pitree",
    version,
    about = "Experiments on one-or-two-branching trees in Cantor space"
)]
pub struct Cli {
    /// Output format; each command has its own default.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Write the artifact here instead of stdout. Relative paths resolve
    /// against PITREE_OUT_DIR when it is set.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Enumeration cap for tree classes.
    #[arg(long, global = true, default_value_t = DEFAULT_CAP)]
    pub cap: usize,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Sample a level-n prefix of a tree in T_ℓ.
    Sample {
        #[arg(long, value_parser = schedule_arg)]
        schedule: LevelSchedule,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 0)]
        stream: u64,
    },
    /// Map a tree in T_ℓ to its image under the family-induced map.
    Densify {
        #[arg(long, value_parser = schedule_arg)]
        l: LevelSchedule,
        #[arg(long, value_parser = schedule_arg)]
        m: LevelSchedule,
        #[arg(long)]
        n: usize,
        /// Input tree (leaves or @file); sampled from the seed when absent.
        #[arg(long, value_parser = tree_arg, required_unless_present = "seed")]
        tree: Option<FiniteTree>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value_t = 0)]
        stream: u64,
        /// Include every H_σ in the json output.
        #[arg(long)]
        family: bool,
    },
    /// Monte Carlo frequencies of non-branching nodes against the union bounds.
    Mc {
        #[arg(long, value_parser = schedule_arg)]
        l: LevelSchedule,
        #[arg(long, value_parser = schedule_arg)]
        m: LevelSchedule,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        samples: u64,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 0)]
        stream: u64,
    },
    /// Partial sums of Σ 2^-(gap) with a convergence verdict.
    Series {
        #[arg(long, value_parser = schedule_arg)]
        schedule: LevelSchedule,
        #[arg(long = "N")]
        terms: usize,
        /// Affine lower bound on the exponent: `slope` or `offset,slope`.
        #[arg(long, value_parser = witness_arg)]
        witness: Option<AffineWitness>,
        /// Check a target schedule m against this one instead.
        #[arg(long, value_parser = schedule_arg)]
        against: Option<LevelSchedule>,
    },
    /// Cheapest set of strings of one length hitting a tree class.
    Hitcost {
        #[command(flatten)]
        class: ClassArgs,
        #[arg(long, value_parser = tree_arg)]
        q: FiniteTree,
        /// Length of the candidate strings.
        #[arg(long)]
        level: usize,
        #[arg(long, value_enum, default_value_t = Mode::Exact)]
        mode: Mode,
    },
    /// Pull a hitting set at level n+1 back to level n inside Q.
    Pullback {
        #[arg(long, value_parser = schedule_arg)]
        schedule: LevelSchedule,
        #[arg(long)]
        n: usize,
        #[arg(long = "h-next", value_parser = set_arg, default_value = "")]
        h_next: StringSet,
        #[arg(long, value_parser = tree_arg)]
        q: FiniteTree,
    },
    /// Evaluate the envelope conditions of a finite family.
    EnvelopeCheck {
        #[arg(long, value_parser = schedule_arg)]
        schedule: LevelSchedule,
        #[arg(long, allow_negative_numbers = true)]
        r: i64,
        /// Schedule index for each |σ| = 0, 1, ...
        #[arg(long, value_delimiter = ',', required = true)]
        levels: Vec<usize>,
        /// `σ:words`, e.g. `:0,1` for λ or `0:00`; repeatable.
        #[arg(long = "set", value_parser = indexed_set_arg)]
        sets: Vec<(BitString, StringSet)>,
        #[arg(long, value_parser = tree_arg)]
        q: FiniteTree,
        /// Class checked by the hitting condition for every σ, when `--height` is given.
        #[command(flatten)]
        class: ClassArgs,
    },
    /// Kraft-Chaitin allocation of code-length requests.
    Kc {
        /// `target:length`; repeatable, processed in order.
        #[arg(long = "request", value_parser = request_arg)]
        requests: Vec<(BitString, usize)>,
        /// `n:words` deficiency level; repeatable. Emits requests (σ, |σ| − n).
        #[arg(long = "deficiency", value_parser = level_set_arg)]
        deficiency: Vec<(usize, StringSet)>,
    },
    /// Depth truncation of the strings whose prefixes all have complexity ≥ |ρ| − c.
    PcTrunc {
        /// `stub`, `run-length` or `table:σ=k,...`.
        #[arg(long, default_value = "stub")]
        oracle: String,
        #[arg(long)]
        c: usize,
        #[arg(long)]
        depth: usize,
    },
    /// Relative measure of Q above each prefix of z, scaled by 2^n.
    Density {
        #[arg(long, value_parser = tree_arg)]
        q: FiniteTree,
        #[arg(long, value_parser = bits_arg)]
        z: BitString,
    },
    /// Largest subtree branching at every schedule level below n.
    Prune {
        #[arg(long, value_parser = tree_arg)]
        p: FiniteTree,
        #[arg(long, value_parser = schedule_arg)]
        schedule: LevelSchedule,
        #[arg(long)]
        n: usize,
    },
    /// Truncated tree whose paths turn right off z at each zero of z.
    DeriveTree {
        #[arg(long, value_parser = bits_arg)]
        z: BitString,
        #[arg(long)]
        depth: usize,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Exact,
    Greedy,
}

impl From<Mode> for CostMode {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Exact => CostMode::Exact,
            Mode::Greedy => CostMode::Greedy,
        }
    }
}

#[derive(Args, Debug)]
pub struct ClassArgs {
    /// Height of the trees in the class.
    #[arg(long)]
    pub height: Option<usize>,
    /// Every node of this tree must be a node of the member.
    #[arg(long, value_parser = tree_arg)]
    pub extends: Vec<FiniteTree>,
    /// The member truncated to this tree's height must equal it.
    #[arg(long, value_parser = tree_arg)]
    pub prefix: Vec<FiniteTree>,
    /// Member nodes must stay inside this tree.
    #[arg(long = "paths-inside", value_parser = tree_arg)]
    pub paths_inside: Vec<FiniteTree>,
    /// One or two extensions per level of this schedule.
    #[arg(long, value_parser = schedule_arg)]
    pub branching: Option<LevelSchedule>,
    #[arg(long)]
    pub skeletal: bool,
}

impl ClassArgs {
    pub fn class(&self) -> Option<TreeClass> {
        let mut c = TreeClass::all(self.height?);
        for f in &self.extends {
            c = c.extends(f.clone());
        }
        for f in &self.prefix {
            c = c.prefix(f.clone());
        }
        for q in &self.paths_inside {
            c = c.paths_inside(q.clone());
        }
        if let Some(s) = &self.branching {
            c = c.schedule_branching(s.clone());
        }
        if self.skeletal {
            c = c.skeletal();
        }
        Some(c)
    }
}

fn schedule_arg(s: &str) -> Result<LevelSchedule, String> {
    s.parse().map_err(|e: pitree::Error| e.to_string())
}

fn bits_arg(s: &str) -> Result<BitString, String> {
    s.parse().map_err(|e: pitree::Error| e.to_string())
}

fn set_arg(s: &str) -> Result<StringSet, String> {
    s.parse().map_err(|e: pitree::Error| e.to_string())
}

/// Comma-separated leaves, or `@path` to a tree-leaves file.
fn tree_arg(s: &str) -> Result<FiniteTree, String> {
    if let Some(path) = s.strip_prefix('@') {
        let text = std::fs::read_to_string(path).map_err(|e| format!("{path}: {e}"))?;
        return FiniteTree::parse_leaves_format(&text).map_err(|e| e.to_string());
    }
    FiniteTree::from_leaves(set_arg(s)?).map_err(|e| e.to_string())
}

fn witness_arg(s: &str) -> Result<AffineWitness, String> {
    let bad = || format!("witness {s:?} is not `slope` or `offset,slope`");
    let nums: Vec<i64> = s
        .split(',')
        .map(|x| x.trim().parse().map_err(|_| bad()))
        .collect::<Result<_, _>>()?;
    match nums[..] {
        [slope] => Ok(AffineWitness { offset: 0, slope }),
        [offset, slope] => Ok(AffineWitness { offset, slope }),
        _ => Err(bad()),
    }
}

fn indexed_set_arg(s: &str) -> Result<(BitString, StringSet), String> {
    let (sigma, words) = s
        .split_once(':')
        .ok_or_else(|| format!("{s:?} is not σ:words"))?;
    Ok((bits_arg(sigma)?, set_arg(words)?))
}

fn request_arg(s: &str) -> Result<(BitString, usize), String> {
    let (target, len) = s
        .split_once(':')
        .ok_or_else(|| format!("{s:?} is not target:length"))?;
    let len = len
        .trim()
        .parse()
        .map_err(|_| format!("bad length in {s:?}"))?;
    Ok((bits_arg(target)?, len))
}

fn level_set_arg(s: &str) -> Result<(usize, StringSet), String> {
    let (n, words) = s
        .split_once(':')
        .ok_or_else(|| format!("{s:?} is not n:words"))?;
    let n = n
        .trim()
        .parse()
        .map_err(|_| format!("bad level in {s:?}"))?;
    Ok((n, set_arg(words)?))
}
