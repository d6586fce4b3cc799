use atomarray_model::{pm_one_stats, ShotRecord};
use serde::{Deserialize, Serialize};

use crate::code::{CodeSpec, CssType, DecoderKind};
use crate::compile::Setting;
use crate::decode::Decoder;
use crate::error::CodesError;

/// Mean of a ±1 observable and its standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub mean: f64,
    pub stderr: f64,
}

impl Estimate {
    fn from_counts(plus: usize, total: usize) -> Self {
        let (mean, stderr) = pm_one_stats(plus, total);
        Estimate { mean, stderr }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StabilizerReport {
    pub name: String,
    pub setting: Setting,
    pub value: Estimate,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LogicalReport {
    /// Logical name with the measured type appended, e.g. `L_X`.
    pub name: String,
    pub setting: Setting,
    pub distance: usize,
    pub raw: Estimate,
    /// Over shots whose same-type stabilizers all read +1.
    pub detected: Estimate,
    pub corrected: Option<Estimate>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SettingSummary {
    pub setting: Setting,
    pub shots: usize,
    /// Fraction of shots with every measured stabilizer at +1.
    pub pass_fraction: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CodeReport {
    pub code: String,
    pub stabilizers: Vec<StabilizerReport>,
    pub logicals: Vec<LogicalReport>,
    pub settings: Vec<SettingSummary>,
    /// Pass fraction of the X setting when present, else of the Z setting.
    pub pass_fraction: f64,
}

/// Shots grouped by readout setting.
#[derive(Debug, Clone, Copy, Default)]
pub struct SettingShots<'a> {
    pub xside: Option<&'a [ShotRecord]>,
    pub zside: Option<&'a [ShotRecord]>,
}

impl<'a> SettingShots<'a> {
    pub fn get(&self, s: Setting) -> Option<&'a [ShotRecord]> {
        match s {
            Setting::Xside => self.xside,
            Setting::Zside => self.zside,
        }
    }
}

/// Sign-corrected value (+1 / −1) of an operator with the given support.
fn value(shot: &ShotRecord, support: &[usize], sign: i8) -> i8 {
    if shot.parity(support) == 0 {
        sign
    } else {
        -sign
    }
}

/// Stabilizer, logical and postselection statistics for the shots of each setting.
///
/// Z stars that contain an ancilla pick up its readout bit through their support,
/// which multiplies the star value by the ancilla outcome.
pub fn evaluate_code(code: &CodeSpec, shots: &SettingShots) -> Result<CodeReport, CodesError> {
    if shots.xside.is_none() && shots.zside.is_none() {
        return Err(CodesError::MissingSetting(Setting::Xside));
    }
    let decoder = match code.decoder {
        DecoderKind::None => None,
        _ => Some(Decoder::new(code)?),
    };
    let mut report =
        CodeReport { code: code.name.clone(), stabilizers: vec![], logicals: vec![], settings: vec![], pass_fraction: f64::NAN };

    for setting in Setting::BOTH {
        let Some(records) = shots.get(setting) else { continue };
        let t = setting.css_type();
        let checks = code.stabilizers_of(t);
        let supports: Vec<Vec<usize>> = checks.iter().map(|&s| code.stabilizers[s].op.support()).collect();
        let signs: Vec<i8> = checks.iter().map(|&s| code.sign_corrections[s] * code.stabilizers[s].op.sign()).collect();

        let mut plus = vec![0usize; checks.len()];
        let mut passed = vec![false; records.len()];
        let mut defects: Vec<Vec<bool>> = Vec::with_capacity(records.len());
        for (k, shot) in records.iter().enumerate() {
            let d: Vec<bool> = supports.iter().zip(&signs).map(|(sup, &sg)| value(shot, sup, sg) < 0).collect();
            for (c, &bad) in d.iter().enumerate() {
                plus[c] += !bad as usize;
            }
            passed[k] = !d.iter().any(|&b| b);
            defects.push(d);
        }
        for (c, &s) in checks.iter().enumerate() {
            report.stabilizers.push(StabilizerReport {
                name: code.stabilizers[s].name.clone(),
                setting,
                value: Estimate::from_counts(plus[c], records.len()),
            });
        }
        let n_pass = passed.iter().filter(|&&p| p).count();
        let pass_fraction = if records.is_empty() { f64::NAN } else { n_pass as f64 / records.len() as f64 };
        report.settings.push(SettingSummary { setting, shots: records.len(), pass_fraction });

        let flips: Option<Vec<Vec<usize>>> = decoder.as_ref().map(|dec| {
            defects.iter().map(|d| dec.flips(t, d).unwrap_or_default()).collect()
        });

        for k in 0..code.logicals.len() {
            let op = code.logical_op(k, t);
            let support = op.support();
            let (sx, sz) = code.logical_sign_corrections[k];
            let sign = op.sign() * if t == CssType::X { sx } else { sz };
            let (mut raw, mut det, mut det_n, mut cor) = (0, 0, 0, 0);
            for (j, shot) in records.iter().enumerate() {
                let v = value(shot, &support, sign);
                raw += (v > 0) as usize;
                if passed[j] {
                    det_n += 1;
                    det += (v > 0) as usize;
                }
                if let Some(f) = &flips {
                    let odd = f[j].iter().filter(|q| support.contains(q)).count() % 2 == 1;
                    cor += ((v > 0) != odd) as usize;
                }
            }
            let suffix = if t == CssType::X { "X" } else { "Z" };
            report.logicals.push(LogicalReport {
                name: format!("{}_{suffix}", code.logicals[k].name),
                setting,
                distance: code.distances[k],
                raw: Estimate::from_counts(raw, records.len()),
                detected: Estimate::from_counts(det, det_n),
                corrected: flips.as_ref().map(|_| Estimate::from_counts(cor, records.len())),
            });
        }
    }
    report.pass_fraction = report.settings[0].pass_fraction;
    Ok(report)
}
