use std::fmt::Write as _;
use std::fs;
use std::io;

use bsconc::measures::{eof, metrics};
use bsconc::optimize::{find_concentration, sweep_state, turning_point, write_csv};
use bsconc::protocol::bs_transform;
use bsconc::states::{mixed_family, pure_vv_hh, werner};
use bsconc::{BeamSplitterSettings, Bell, DensityMatrix, SearchMode, StateFamilyParams, StateJson};
use serde::Serialize;
use serde_json::json;

use crate::args::{BellArg, Format, Mode, Output, StateSource};
use crate::render;
use crate::CliError;

impl StateSource {
    pub fn resolve(&self) -> Result<DensityMatrix, CliError> {
        if let Some([e1, e2, phi, gamma]) = self.family {
            return Ok(mixed_family(&StateFamilyParams::real(e1, e2, phi, gamma)?)?);
        }
        if let Some([e1, e2, phi]) = self.pure {
            return Ok(pure_vv_hh(&StateFamilyParams::pure(e1, e2, phi)?)?);
        }
        if let Some(b) = self.bell {
            return Ok(DensityMatrix::bell(match b {
                BellArg::PhiPlus => Bell::PhiPlus,
                BellArg::PhiMinus => Bell::PhiMinus,
                BellArg::PsiPlus => Bell::PsiPlus,
                BellArg::PsiMinus => Bell::PsiMinus,
            }));
        }
        if let Some(path) = &self.file {
            let text = fs::read_to_string(path).map_err(|source| CliError::Read {
                path: path.display().to_string(),
                source,
            })?;
            return Ok(DensityMatrix::from_json_str(&text)?);
        }
        Err(CliError::Usage("no state source given".into()))
    }
}

impl Output {
    fn format_or(&self, default: Format) -> Format {
        self.format.unwrap_or(default)
    }

    fn emit(&self, text: &str) -> Result<(), CliError> {
        match &self.out {
            Some(path) => fs::write(path, text).map_err(CliError::Write),
            None => {
                use io::Write;
                let mut stdout = io::stdout().lock();
                stdout.write_all(text.as_bytes())?;
                stdout.flush()?;
                Ok(())
            }
        }
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report types serialize");
    s.push('\n');
    s
}

fn unsupported(cmd: &str, f: Format) -> CliError {
    CliError::Usage(format!("`{cmd}` does not support --format {f:?}").to_lowercase())
}

pub fn analyze(state: &StateSource, output: &Output) -> Result<(), CliError> {
    let rho = state.resolve()?;
    let m = metrics(&rho);
    let v = rho.validate();
    let text = match output.format_or(Format::Human) {
        Format::Human => format!(
            "state\n{}metrics\n{}validation\n{}",
            render::matrix(&rho, "  "),
            render::metrics(&m, "  "),
            render::validation(&v, "  ")
        ),
        Format::Json => to_json(&json!({
            "state": rho.to_json(),
            "metrics": m,
            "validation": v,
        })),
        f => return Err(unsupported("analyze", f)),
    };
    output.emit(&text)
}

pub fn transform(state: &StateSource, eta: [f64; 4], output: &Output) -> Result<(), CliError> {
    let rho = state.resolve()?;
    let settings = BeamSplitterSettings::from_array(eta)?;
    let outcome = bs_transform(&rho, &settings)?;
    let before = metrics(&rho);
    let after = metrics(&outcome.output);
    let text = match output.format_or(Format::Human) {
        Format::Human => format!(
            "settings  {settings}\nsuccess probability  {:.6}\noutput state\n{}metrics before\n{}metrics after\n{}",
            outcome.success_probability,
            render::matrix(&outcome.output, "  "),
            render::metrics(&before, "  "),
            render::metrics(&after, "  ")
        ),
        Format::Json => to_json(&json!({
            "settings": settings,
            "success_probability": outcome.success_probability,
            "output": outcome.output.to_json(),
            "metrics_before": before,
            "metrics_after": after,
        })),
        f => return Err(unsupported("transform", f)),
    };
    output.emit(&text)
}

pub fn sweep(state: &StateSource, n_points: usize, output: &Output) -> Result<(), CliError> {
    if n_points < 2 {
        return Err(CliError::Usage(format!(
            "-n must be at least 2, got {n_points}"
        )));
    }
    let rho = state.resolve()?;
    let curve = sweep_state(&rho, n_points)?;
    for eta in &curve.skipped {
        eprintln!("warning: skipped eta_v = {eta}: post-selection probability is zero");
    }
    let text = match output.format_or(Format::Csv) {
        Format::Csv => {
            let mut buf = Vec::new();
            write_csv(&curve.points, &mut buf)?;
            String::from_utf8(buf).expect("csv output is utf-8")
        }
        Format::Json => to_json(&json!({
            "points": curve.points,
            "skipped": curve.skipped,
        })),
        Format::Human => {
            let mut s = String::new();
            let top = turning_point(&curve.points)?;
            let _ = writeln!(
                s,
                "{:>10} {:>10} {:>10} {:>12}",
                "eta_v", "entropy", "eof", "probability"
            );
            for p in &curve.points {
                let _ = writeln!(
                    s,
                    "{:>10.6} {:>10.6} {:>10.6} {:>12.6}",
                    p.eta_v, p.entropy, p.eof, p.probability
                );
            }
            let _ = writeln!(
                s,
                "turning point: eta_v={:.6} entropy={:.6} eof={:.6}",
                top.eta_v, top.entropy, top.eof
            );
            s
        }
    };
    output.emit(&text)
}

pub fn optimize(state: &StateSource, mode: Mode, output: &Output) -> Result<(), CliError> {
    let rho = state.resolve()?;
    let mode = match mode {
        Mode::OneKnob => SearchMode::OneKnob,
        Mode::AllFour => SearchMode::AllFour,
    };
    let report = find_concentration(&rho, mode)?;
    let text = match output.format_or(Format::Human) {
        Format::Human => {
            let b = &report.best;
            format!(
                "mode            {}\nclassification  {:?}\nconcentration   {}\nbest settings   {}\nsuccess prob.   {:.6}\ninitial\n{}best\n    EOF          {:.6}\n    entropy      {:.6}\n",
                match mode {
                    SearchMode::OneKnob => "one-knob",
                    SearchMode::AllFour => "all-four",
                },
                report.classification,
                if report.achievable { "achievable" } else { "not achievable" },
                b.settings,
                b.probability,
                render::metrics(&report.initial, "    "),
                b.eof,
                b.entropy
            )
        }
        Format::Json => to_json(&json!({ "mode": mode, "report": report })),
        f => return Err(unsupported("optimize", f)),
    };
    output.emit(&text)
}

/// One comparison against a reference value.
#[derive(Debug, Serialize)]
pub struct GoldenCheck {
    pub name: String,
    pub value: f64,
    pub expected: f64,
    pub tolerance: f64,
    pub pass: bool,
}

fn golden(name: &str, value: f64, expected: f64, tolerance: f64) -> GoldenCheck {
    GoldenCheck {
        name: name.into(),
        value,
        expected,
        tolerance,
        pass: (value - expected).abs() <= tolerance,
    }
}

/// The worked example: `(eps1, eps2, phi, gamma) = (1, 0.1, 0, 0.3)` filtered
/// with `eta_v = sqrt(0.1)` on both arms and the H beam splitters open.
pub fn reproduce(output: &Output) -> Result<(), CliError> {
    let params = StateFamilyParams::real(1.0, 0.1, 0.0, 0.3)?;
    let input = mixed_family(&params)?;
    let eta_v = 0.1f64.sqrt();
    let settings = BeamSplitterSettings::symmetric(eta_v, 1.0)?;
    let outcome = bs_transform(&input, &settings)?;
    let out = &outcome.output;
    let (before, after) = (metrics(&input), metrics(out));

    let mut checks = Vec::new();
    for (name, (i, j), want) in [
        ("input rho11", (0, 0), 0.297),
        ("input rho14", (0, 3), 0.030),
        ("input rho22", (1, 1), 0.350),
        ("input rho23", (1, 2), 0.350),
        ("input rho44", (3, 3), 0.003),
    ] {
        checks.push(golden(name, input.get(i, j).re, want, 5e-4));
    }
    for (name, (i, j), want) in [
        ("output rho11", (0, 0), 0.039),
        ("output rho14", (0, 3), 0.039),
        ("output rho22", (1, 1), 0.461),
        ("output rho23", (1, 2), 0.461),
        ("output rho44", (3, 3), 0.039),
    ] {
        checks.push(golden(name, out.get(i, j).re, want, 5e-4));
    }
    checks.push(golden("EOF before", before.eof, 0.52, 0.01));
    checks.push(golden("EOF after", after.eof, 0.78, 0.01));
    checks.push(golden("entropy before", before.entropy, 0.30, 0.01));
    checks.push(golden("entropy after", after.entropy, 0.20, 0.01));
    checks.push(golden(
        "probability %",
        100.0 * outcome.success_probability,
        7.6,
        0.2,
    ));
    let failed = checks.iter().filter(|c| !c.pass).count();

    let text = match output.format_or(Format::Human) {
        Format::Human => {
            let mut s = format!(
                "(eps1, eps2, phi, gamma) = (1, 0.1, 0, 0.3)\nsettings  {settings}\n\ninput state\n{}output state\n{}\nbefore\n{}after\n{}success probability  {:.4}%\n\ngolden checks\n",
                render::matrix(&input, "  "),
                render::matrix(out, "  "),
                render::metrics(&before, "  "),
                render::metrics(&after, "  "),
                100.0 * outcome.success_probability
            );
            for c in &checks {
                let _ = writeln!(
                    s,
                    "  {}  {:<16} {:>10.6}  expected {} ± {}",
                    if c.pass { "ok  " } else { "FAIL" },
                    c.name,
                    c.value,
                    c.expected,
                    c.tolerance
                );
            }
            let _ = writeln!(
                s,
                "{} of {} checks passed",
                checks.len() - failed,
                checks.len()
            );
            s
        }
        Format::Json => to_json(&json!({
            "settings": settings,
            "input": StateJson::from(&input),
            "output": StateJson::from(out),
            "before": before,
            "after": after,
            "success_probability": outcome.success_probability,
            "checks": checks,
        })),
        f => return Err(unsupported("reproduce", f)),
    };
    output.emit(&text)?;
    if failed > 0 {
        return Err(CliError::Golden(failed));
    }
    Ok(())
}

/// Summary of one Werner fraction.
#[derive(Debug, Serialize)]
pub struct WernerRow {
    pub fraction: f64,
    pub eof: f64,
    pub entropy: f64,
    pub best_eta_v: f64,
    pub best_eof: f64,
    pub best_entropy: f64,
    /// EOF of the Werner state with the same fraction of a Bell state.
    pub bell_bound: f64,
    /// Every grid point that raises EOF also raises entropy.
    pub gain_costs_purity: bool,
    pub within_bound: bool,
}

pub fn werner_demo(
    pure: [f64; 3],
    fractions: usize,
    n_points: usize,
    output: &Output,
) -> Result<(), CliError> {
    if fractions == 0 {
        return Err(CliError::Usage("--fractions must be at least 1".into()));
    }
    if n_points < 3 {
        return Err(CliError::Usage(format!(
            "-n must be at least 3, got {n_points}"
        )));
    }
    let [e1, e2, phi] = pure;
    let pure_state = pure_vv_hh(&StateFamilyParams::pure(e1, e2, phi)?)?;
    let bell = DensityMatrix::bell(Bell::PhiPlus);
    let mut rows = Vec::with_capacity(fractions);
    for k in 1..=fractions {
        let fraction = k as f64 / fractions as f64;
        let w = werner(fraction, &pure_state)?;
        let m = metrics(&w);
        let curve = sweep_state(&w, n_points)?;
        let top = turning_point(&curve.points)?;
        let bell_bound = eof(&werner(fraction, &bell)?);
        let gain_costs_purity = curve
            .points
            .iter()
            .filter(|p| p.eof > m.eof)
            .all(|p| p.entropy > m.entropy);
        rows.push(WernerRow {
            fraction,
            eof: m.eof,
            entropy: m.entropy,
            best_eta_v: top.eta_v,
            best_eof: top.eof,
            best_entropy: top.entropy,
            bell_bound,
            gain_costs_purity,
            within_bound: top.eof <= bell_bound + 1e-9,
        });
    }
    let text = match output.format_or(Format::Human) {
        Format::Human => {
            let mut s = format!("pure component eps=({e1}, {e2}), phi={phi}\n");
            let _ = writeln!(
                s,
                "{:>8} {:>9} {:>9} {:>9} {:>9} {:>9} {:>10} {:>6} {:>6}",
                "fraction", "EOF", "S", "eta_v*", "EOF*", "S*", "Bell bound", "cost", "bound"
            );
            for r in &rows {
                let _ = writeln!(
                    s,
                    "{:>8.3} {:>9.5} {:>9.5} {:>9.5} {:>9.5} {:>9.5} {:>10.5} {:>6} {:>6}",
                    r.fraction,
                    r.eof,
                    r.entropy,
                    r.best_eta_v,
                    r.best_eof,
                    r.best_entropy,
                    r.bell_bound,
                    if r.gain_costs_purity { "yes" } else { "no" },
                    if r.within_bound { "yes" } else { "no" },
                );
            }
            s
        }
        Format::Json => to_json(&rows),
        Format::Csv => {
            let mut s = String::from(
                "fraction,eof,entropy,best_eta_v,best_eof,best_entropy,bell_bound,gain_costs_purity,within_bound\n",
            );
            for r in &rows {
                let _ = writeln!(
                    s,
                    "{},{},{},{},{},{},{},{},{}",
                    r.fraction,
                    r.eof,
                    r.entropy,
                    r.best_eta_v,
                    r.best_eof,
                    r.best_entropy,
                    r.bell_bound,
                    r.gain_costs_purity,
                    r.within_bound
                );
            }
            s
        }
    };
    output.emit(&text)
}
