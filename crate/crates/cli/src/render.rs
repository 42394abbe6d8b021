use std::fmt::Write as _;

use bsconc::states::BASIS;
use bsconc::{DensityMatrix, EntanglementMetrics, ValidationReport};

/// Imaginary parts smaller than this vanish at three decimals.
const IMAG_VISIBLE: f64 = 5e-4;

/// Matrix with three decimals; the imaginary block is shown only if it
/// would print as something other than zeros.
pub fn matrix(rho: &DensityMatrix, indent: &str) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "{indent}basis {}", BASIS.join(" "));
    let block = |s: &mut String, label: &str, part: fn(bsconc::Complex64) -> f64| {
        if !label.is_empty() {
            let _ = writeln!(s, "{indent}{label}");
        }
        for i in 0..4 {
            let row: Vec<String> = (0..4)
                .map(|j| format!("{:>7.3}", tidy(part(rho.get(i, j)))))
                .collect();
            let _ = writeln!(s, "{indent}  {}", row.join(""));
        }
    };
    let has_imag = rho
        .matrix()
        .entries()
        .iter()
        .any(|z| z.im.abs() >= IMAG_VISIBLE);
    if has_imag {
        block(&mut s, "re:", |z| z.re);
        block(&mut s, "im:", |z| z.im);
    } else {
        block(&mut s, "", |z| z.re);
    }
    s
}

/// Values that round to zero print without a sign.
fn tidy(x: f64) -> f64 {
    if x.abs() < IMAG_VISIBLE {
        0.0
    } else {
        x
    }
}

pub fn metrics(m: &EntanglementMetrics, indent: &str) -> String {
    format!(
        "{indent}concurrence  {:.6}\n{indent}EOF          {:.6}\n{indent}entropy      {:.6}\n{indent}purity       {:.6}\n",
        m.concurrence, m.eof, m.entropy, m.purity
    )
}

pub fn validation(v: &ValidationReport, indent: &str) -> String {
    v.to_string()
        .lines()
        .map(|l| format!("{indent}{l}\n"))
        .collect()
}
