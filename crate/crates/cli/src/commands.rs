use std::collections::BTreeMap;

use pitree::densify::{decode, derived_tree, family_build, mc_experiment, phi, McReport, PhiImage};
use pitree::hitting::{check_envelope, hitting_cost, pull_back, pull_back_excess};
use pitree::kc::{
    deficiency_requests, pc_truncation, replay, request_weight, run_length_bound, ComplexityOracle,
    FnOracle, KcRequest, StubOracle, TableOracle,
};
use pitree::measure::measure;
use pitree::schedule::{compat_check, series_partial};
use pitree::treespace::{
    branching_budget, branching_defects, density_profile, prune_to_branching, sample_tree,
    LevelTree,
};
use pitree::{BitString, Dyadic, FiniteTree, RngSeed};
use serde_json::json;

use crate::args::{Cli, Command};
use crate::error::CliError;
use crate::output::{Artifact, Csv, Format};

fn leaf_csv(t: Option<&FiniteTree>) -> Csv {
    let mut csv = Csv::new(&["leaf"]);
    for l in t.into_iter().flat_map(|t| t.leaves()) {
        csv.row(vec![l.to_string()]);
    }
    csv
}

fn defects_json(d: &[(usize, BitString)]) -> serde_json::Value {
    d.iter()
        .map(|(k, s)| json!({"level": k, "node": s}))
        .collect()
}

pub fn run(cli: &Cli) -> Result<Artifact, CliError> {
    let cap = cli.cap;
    Ok(match &cli.command {
        Command::Sample {
            schedule,
            n,
            seed,
            stream,
        } => {
            let seed = RngSeed::new(*seed, *stream);
            let t = sample_tree(schedule, *n, seed)?;
            let value = json!({
                "schedule": schedule,
                "level": n,
                "seed": seed,
                "tree": t.tree(),
                "defects": defects_json(&t.branching_defects()),
            });
            Artifact::new(Format::TreeLeaves, &value)
                .with_csv(leaf_csv(Some(t.tree())))
                .with_tree(Some(t.into_tree()))
        }

        Command::Densify {
            l,
            m,
            n,
            tree,
            seed,
            stream,
            family,
        } => {
            let fam = family_build(l, m, *n)?;
            let (t, seed) = match (tree, seed) {
                (Some(t), _) => (LevelTree::new(l.clone(), *n, t.clone())?, None),
                (None, Some(s)) => {
                    let seed = RngSeed::new(*s, *stream);
                    (sample_tree(l, *n, seed)?, Some(seed))
                }
                (None, None) => return Err(CliError::Usage("--tree or --seed is required".into())),
            };
            let img = phi(&t, &fam)?;
            densify_artifact(&t, &img, seed, family.then_some(&fam))
        }

        Command::Mc {
            l,
            m,
            n,
            samples,
            seed,
            stream,
        } => {
            let report = mc_experiment(l, m, *n, *samples, RngSeed::new(*seed, *stream))?;
            let csv = mc_csv(&report);
            Artifact::new(Format::Csv, &report).with_csv(csv)
        }

        Command::Series {
            schedule,
            terms,
            witness,
            against,
        } => {
            let mut csv = Csv::new(&["n", "gap", "term", "partial"]);
            if *terms > 0 && schedule.is_defined(*terms) {
                let mut acc = Dyadic::zero();
                for i in 0..*terms {
                    let term = Dyadic::cylinder(schedule.gap(i));
                    acc += &term;
                    csv.row(vec![
                        i.to_string(),
                        schedule.gap(i).to_string(),
                        term.to_string(),
                        acc.to_string(),
                    ]);
                }
            }
            match against {
                None => {
                    let report = series_partial(schedule, *terms, *witness)?;
                    let value = json!({"schedule": schedule, "report": report});
                    Artifact::new(Format::Json, &value).with_csv(csv)
                }
                Some(m) => {
                    let report = compat_check(schedule, m, *terms, *witness)?;
                    let value = json!({"l": schedule, "m": m, "report": report});
                    Artifact::new(Format::Json, &value)
                }
            }
        }

        Command::Hitcost {
            class,
            q,
            level,
            mode,
        } => {
            let class = class
                .class()
                .ok_or_else(|| CliError::Usage("--height is required".into()))?;
            let c = hitting_cost(&class, q, *level, (*mode).into(), cap)?;
            let mut csv = Csv::new(&["string"]);
            for s in &c.set {
                csv.row(vec![s.to_string()]);
            }
            let value = json!({"q": q, "level": level, "result": c});
            Artifact::new(Format::Json, &value).with_csv(csv)
        }

        Command::Pullback {
            schedule,
            n,
            h_next,
            q,
        } => {
            let h = pull_back(h_next, q, schedule, *n)?;
            let excess = pull_back_excess(&h, h_next, q);
            let bound = Dyadic::pow2(schedule.value(*n) as i64 - schedule.value(*n + 1) as i64);
            let mut csv = Csv::new(&["string"]);
            for s in &h {
                csv.row(vec![s.to_string()]);
            }
            let value = json!({
                "schedule": schedule,
                "n": n,
                "h_next": h_next,
                "h": h,
                "excess": excess,
                "bound": bound,
                "within_bound": excess <= bound,
            });
            Artifact::new(Format::Json, &value).with_csv(csv)
        }

        Command::EnvelopeCheck {
            schedule,
            r,
            levels,
            sets,
            q,
            class,
        } => {
            let sets: BTreeMap<BitString, _> = sets.iter().cloned().collect();
            let e =
                pitree::hitting::EnvelopeFamily::new(*r, schedule.clone(), levels.clone(), sets)?;
            let classes: BTreeMap<BitString, _> = match class.class() {
                Some(c) => (0..=e.length)
                    .flat_map(BitString::all_of_length)
                    .map(|s| (s, c.clone()))
                    .collect(),
                None => BTreeMap::new(),
            };
            let rows = check_envelope(&e, q, &classes, cap)?;
            let mut csv = Csv::new(&["sigma", "condition", "check", "value", "bound", "truncated"]);
            let text = |v: &serde_json::Value| v.as_str().unwrap_or_default().to_string();
            for row in &rows {
                let v = serde_json::to_value(row).expect("rows serialize");
                csv.row(vec![
                    row.sigma.to_string(),
                    text(&v["condition"]),
                    text(&v["check"]),
                    row.value
                        .as_ref()
                        .map(Dyadic::to_string)
                        .unwrap_or_default(),
                    row.bound
                        .as_ref()
                        .map(Dyadic::to_string)
                        .unwrap_or_default(),
                    row.truncated.to_string(),
                ]);
            }
            let value = json!({
                "schedule": schedule,
                "r": r,
                "levels": levels,
                "rows": rows,
            });
            Artifact::new(Format::Json, &value).with_csv(csv)
        }

        Command::Kc {
            requests,
            deficiency,
        } => {
            let mut reqs: Vec<KcRequest> = requests
                .iter()
                .map(|(t, len)| KcRequest::new(t.clone(), *len))
                .collect();
            if !deficiency.is_empty() {
                let mut family = BTreeMap::new();
                for (n, v) in deficiency {
                    family
                        .entry(*n)
                        .or_insert_with(pitree::StringSet::new)
                        .extend(v.iter().cloned());
                }
                reqs.extend(deficiency_requests(&family)?);
            }
            let machine = replay(&reqs)?;
            let mut csv = Csv::new(&["target", "code_length", "codeword"]);
            let assignments: Vec<_> = machine
                .assignments()
                .iter()
                .map(|(t, w)| {
                    csv.row(vec![t.to_string(), w.len().to_string(), w.to_string()]);
                    json!({"target": t, "codeword": w})
                })
                .collect();
            let value = json!({
                "requests": reqs,
                "requested_weight": request_weight(&reqs),
                "assignments": assignments,
                "assigned_weight": machine.assigned_weight(),
                "free": machine.free(),
                "free_weight": machine.free_weight(),
            });
            Artifact::new(Format::Json, &value).with_csv(csv)
        }

        Command::PcTrunc { oracle, c, depth } => {
            let o = parse_oracle(oracle)?;
            let t = pc_truncation(o.as_ref(), *c, *depth);
            let value = json!({
                "oracle": oracle,
                "provenance": o.provenance(),
                "c": c,
                "depth": depth,
                "tree": t,
            });
            Artifact::new(Format::TreeLeaves, &value)
                .with_csv(leaf_csv(t.as_ref()))
                .with_tree(t)
        }

        Command::Density { q, z } => {
            let profile = density_profile(q, z)?;
            let mut csv = Csv::new(&["n", "prefix", "density"]);
            for (i, d) in profile.iter().enumerate() {
                csv.row(vec![i.to_string(), z.prefix(i).to_string(), d.to_string()]);
            }
            let value = json!({"q": q, "z": z, "profile": profile});
            Artifact::new(Format::Json, &value).with_csv(csv)
        }

        Command::Prune { p, schedule, n } => {
            let q = prune_to_branching(p, schedule, *n)?;
            let defects = q
                .as_ref()
                .map(|t| branching_defects(t, schedule, *n))
                .unwrap_or_default();
            let value = json!({
                "p": p,
                "schedule": schedule,
                "n": n,
                "measure_p": measure(p.leaves()),
                "budget": branching_budget(schedule, *n),
                "q": q,
                "measure_q": q.as_ref().map(|t| measure(t.leaves())),
                "defects": defects_json(&defects),
            });
            Artifact::new(Format::TreeLeaves, &value)
                .with_csv(leaf_csv(q.as_ref()))
                .with_tree(q)
        }

        Command::DeriveTree { z, depth } => {
            let t = derived_tree(z, *depth)?;
            let value = json!({"z": z, "depth": depth, "tree": t, "decoded": decode(&t)});
            Artifact::new(Format::TreeLeaves, &value)
                .with_csv(leaf_csv(Some(&t)))
                .with_tree(Some(t))
        }
    })
}

fn densify_artifact(
    t: &LevelTree,
    img: &PhiImage,
    seed: Option<RngSeed>,
    fam: Option<&pitree::densify::HittingFamily>,
) -> Artifact {
    let node_json = |v: Vec<(usize, BitString, usize)>| -> serde_json::Value {
        v.into_iter()
            .map(|(k, s, e)| json!({"level": k, "node": s, "extensions": e}))
            .collect()
    };
    let mut csv = Csv::new(&["level", "node", "extensions"]);
    for k in 0..img.level {
        for s in &img.slices[k] {
            csv.row(vec![
                k.to_string(),
                s.to_string(),
                img.extensions(k, s).to_string(),
            ]);
        }
    }
    let family = fam.map(|f| {
        f.iter()
            .map(|(s, h)| (s.to_string(), h.clone()))
            .collect::<BTreeMap<_, _>>()
    });
    let value = json!({
        "l": t.schedule(),
        "m": img.schedule,
        "level": t.level(),
        "seed": seed,
        "tree": t.tree(),
        "image": img.slices,
        "over_two": node_json(img.over_two()),
        "defects": node_json(img.defects()),
        "in_t_m": img.in_t_m(),
        "family": family,
    });
    Artifact::new(Format::Json, &value)
        .with_csv(csv)
        .with_tree(Some(img.tree()))
}

fn mc_csv(r: &McReport) -> Csv {
    let mut csv = Csv::new(&[
        "level", "side", "bound", "observed", "se", "count", "trials",
    ]);
    let f = |x: f64| format!("{x:.6}");
    for row in &r.rows {
        let k = row.level.to_string();
        csv.row(vec![
            k.clone(),
            "leaf".into(),
            row.leaf_expected.to_string(),
            f(row.leaf_observed),
            f(row.leaf_se),
            row.l_single.to_string(),
            row.l_nodes.to_string(),
        ]);
        csv.row(vec![
            k.clone(),
            "l-level".into(),
            row.l_bound.to_string(),
            f(row.l_observed),
            f(row.l_se),
            row.l_failures.to_string(),
            r.samples.to_string(),
        ]);
        csv.row(vec![
            k.clone(),
            "m-level".into(),
            row.m_bound.to_string(),
            f(row.m_observed),
            f(row.m_se),
            row.m_failures.to_string(),
            r.samples.to_string(),
        ]);
        csv.row(vec![
            k,
            "over-two".into(),
            String::new(),
            f(row.over_two_observed),
            String::new(),
            row.phi_over_two.to_string(),
            row.phi_nodes.to_string(),
        ]);
    }
    csv
}

fn parse_oracle(spec: &str) -> Result<Box<dyn ComplexityOracle>, CliError> {
    match spec {
        "stub" => Ok(Box::new(StubOracle)),
        "run-length" => Ok(Box::new(FnOracle::compressor(run_length_bound))),
        _ => {
            let table = spec
                .strip_prefix("table:")
                .ok_or_else(|| CliError::Usage(format!("unknown oracle {spec:?}")))?;
            let mut bounds = Vec::new();
            for entry in table.split(',').filter(|e| !e.trim().is_empty()) {
                let (s, k) = entry
                    .split_once('=')
                    .ok_or_else(|| CliError::Usage(format!("bad table entry {entry:?}")))?;
                let k = k
                    .trim()
                    .parse()
                    .map_err(|_| CliError::Usage(format!("bad bound in {entry:?}")))?;
                bounds.push((s.parse::<BitString>()?, k));
            }
            Ok(Box::new(TableOracle::new(bounds)))
        }
    }
}
