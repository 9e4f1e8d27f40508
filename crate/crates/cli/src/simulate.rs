//! `ltfb simulate ...`: Monte Carlo experiments.

use ltfb_core::sim::{
    mean_and_std_err, DistortionExperiment, SchemeResult, SingleLayerExperiment, TrialConfig, TwoLayerExperiment,
};
use serde::Serialize;

use crate::output::{Cell, Table};
use crate::params::{Ack, Params, SerGrid};
use crate::{Failure, Run};

fn curves(results: &[SchemeResult]) -> Table {
    let mut t = Table::new(["scheme", "layer", "received", "undecoded_fraction"]);
    for r in results {
        for (received, &u) in r.mean_undecoded.iter().enumerate() {
            t.push(vec![r.label.as_str().into(), "all".into(), received.into(), u.into()]);
        }
        if r.mean_layer_undecoded.len() > 1 {
            for (layer, curve) in r.mean_layer_undecoded.iter().enumerate() {
                let name = layer.to_string();
                for (received, &u) in curve.iter().enumerate() {
                    t.push(vec![r.label.as_str().into(), name.as_str().into(), received.into(), u.into()]);
                }
            }
        }
    }
    t
}

fn summary(results: &[SchemeResult]) -> Table {
    let mut t = Table::new([
        "scheme",
        "trials",
        "incomplete",
        "mean_overhead",
        "overhead_std_err",
        "redundant_fraction",
        "base_first",
    ]);
    for r in results {
        let (mean, se) = mean_and_std_err(&r.overheads);
        let redundant = if r.received == 0 { 0.0 } else { r.redundant as f64 / r.received as f64 };
        t.push(vec![
            r.label.as_str().into(),
            r.trials.into(),
            r.incomplete.into(),
            mean.into(),
            se.into(),
            redundant.into(),
            r.base_first.into(),
        ]);
    }
    t
}

fn check_sound(results: &[SchemeResult]) -> Result<(), Failure> {
    let bad: usize = results.iter().map(|r| r.payload_mismatches).sum();
    if bad > 0 {
        return Err(Failure::Runtime(format!("{bad} decoded symbols differ from the source")));
    }
    Ok(())
}

fn validate(schemes: &[(&str, TrialConfig)]) -> Result<(), Failure> {
    for (_, cfg) in schemes {
        cfg.validate()?;
    }
    Ok(())
}

/// Single-layer code with and without per-symbol acknowledgments.
pub fn single(p: &Params) -> Result<Run, Failure> {
    let exp = SingleLayerExperiment {
        width: p.width()?,
        ..SingleLayerExperiment::new(p.rsd()?, p.runs()?, p.seed())
    };
    validate(&exp.schemes())?;
    let results = exp.run()?;
    check_sound(&results)?;
    let tables = vec![("", curves(&results)), ("summary", summary(&results))];
    Run::new("simulate single", "single", Some(exp.seed), &exp, tables)
}

#[derive(Serialize)]
struct Layered<'a, E> {
    #[serde(flatten)]
    experiment: &'a E,
    ack: Ack,
}

/// Single-layer baseline against the weighted two-layer code.
pub fn two_layer(p: &Params) -> Result<Run, Failure> {
    let exp = TwoLayerExperiment {
        width: p.width()?,
        reparameterize: p.reparameterize.unwrap_or(true),
        ..TwoLayerExperiment::new(p.rsd()?, p.alpha(), p.beta(), p.runs()?, p.seed())
    };
    validate(&exp.schemes()?)?;
    let ack = p.ack.unwrap_or(Ack::Layer);
    let mut results = exp.run()?;
    check_sound(&results)?;
    if ack == Ack::None {
        results.retain(|r| r.label != "two_layer_ack");
    }
    let tables = vec![("", curves(&results)), ("summary", summary(&results))];
    let cfg = Layered { experiment: &exp, ack };
    Run::new("simulate two-layer", "two_layer", Some(exp.seed), &cfg, tables)
}

/// Mean distortion against the erasure rate under a deadline.
pub fn distortion(p: &Params) -> Result<Run, Failure> {
    let grid = p.ser.clone().unwrap_or_else(|| "0:0.05:1".parse::<SerGrid>().expect("valid default grid"));
    let mut exp =
        DistortionExperiment::new(p.rsd()?, p.alpha(), p.beta(), grid.0, p.seconds()?, p.seed())?;
    exp.width = p.width()?;
    exp.reparameterize = p.reparameterize.unwrap_or(exp.reparameterize);
    exp.deadline_factor = p.deadline_factor.unwrap_or(exp.deadline_factor);
    if !(exp.deadline_factor > 0.0 && exp.deadline_factor.is_finite()) {
        return Err(Failure::Invalid(format!("deadline factor {} must be positive", exp.deadline_factor)));
    }
    if let Some(b) = p.deadline_basis {
        exp.deadline_basis = b.into();
    }
    // The layered schemes need a valid two-layer split of k.
    TwoLayerExperiment::new(exp.rsd, exp.alpha, exp.beta, 1, 0).schemes()?;
    let ack = p.ack.unwrap_or(Ack::Layer);

    let result = exp.run()?;
    if result.payload_mismatches > 0 {
        return Err(Failure::Runtime(format!(
            "{} decoded symbols differ from the source",
            result.payload_mismatches
        )));
    }
    let keep: Vec<usize> = (0..result.labels.len())
        .filter(|&i| ack == Ack::Layer || result.labels[i] != "two_layer_ack")
        .collect();
    let mut header = vec!["ser".to_string()];
    header.extend(keep.iter().map(|&i| result.labels[i].clone()));
    header.extend(keep.iter().map(|&i| format!("{}_std_err", result.labels[i])));
    let mut t = Table::new(header);
    for (j, &ser) in result.ser.iter().enumerate() {
        let mut row: Vec<Cell> = vec![ser.into()];
        row.extend(keep.iter().map(|&i| Cell::from(result.mean[i][j])));
        row.extend(keep.iter().map(|&i| Cell::from(result.std_err[i][j])));
        t.push(row);
    }
    let cfg = Layered { experiment: &exp, ack };
    Run::new("simulate distortion", "distortion", Some(exp.seed), &cfg, vec![("", t)])
}
