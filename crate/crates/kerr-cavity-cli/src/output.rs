//! Dataset writers. CSV files carry `# key=value` comment lines first (the
//! full resolved parameter set, so every figure is reproducible from its own
//! output file), then exactly one column-header line, then data rows. Floats
//! are printed with Rust's shortest round-trip formatting, '.' decimal.

use std::fmt::Display;
use std::io::{self, Write};

use kerr_cavity::{derive_rates, BranchLabel, Mode, PhysicalParams};

pub fn branch_name(b: BranchLabel) -> &'static str {
    match b {
        BranchLabel::Unique => "unique",
        BranchLabel::Lower => "lower",
        BranchLabel::Middle => "middle",
        BranchLabel::Upper => "upper",
    }
}

pub fn mode_name(m: Mode) -> &'static str {
    match m {
        Mode::Quantum => "quantum",
        Mode::Semiclassical => "semiclassical",
    }
}

// Debug formatting: shortest round-trip decimal, switching to exponent
// form when that is shorter (1e-16 instead of a 16-zero string).
pub fn cell(v: f64) -> String {
    format!("{v:?}")
}

pub fn opt_cell(v: Option<f64>) -> String {
    v.map(cell).unwrap_or_default()
}

/// CSV document under construction. Comments may be added at any point;
/// they are always written ahead of the header line.
pub struct Csv {
    comments: Vec<(String, String)>,
    header: &'static [&'static str],
    rows: Vec<Vec<String>>,
}

impl Csv {
    pub fn new(header: &'static [&'static str]) -> Self {
        Csv {
            comments: Vec::new(),
            header,
            rows: Vec::new(),
        }
    }

    pub fn comment(&mut self, key: impl Into<String>, value: impl Display) {
        self.comments.push((key.into(), value.to_string()));
    }

    pub fn row(&mut self, cells: Vec<String>) {
        debug_assert_eq!(cells.len(), self.header.len());
        self.rows.push(cells);
    }

    pub fn write(&self, out: &mut dyn Write) -> io::Result<()> {
        for (k, v) in &self.comments {
            writeln!(out, "# {k}={v}")?;
        }
        writeln!(out, "{}", self.header.join(","))?;
        for row in &self.rows {
            writeln!(out, "{}", row.join(","))?;
        }
        Ok(())
    }
}

/// Embeds one mode's resolved parameters and derived rates. `prefix`
/// distinguishes modes in multi-mode datasets ("" when there is one).
pub fn param_comments(csv: &mut Csv, prefix: &str, p: &PhysicalParams) {
    let rates = derive_rates(p).expect("validated params");
    csv.comment(format!("{prefix}mode"), mode_name(p.mode));
    csv.comment(format!("{prefix}delta0"), cell(p.delta0));
    csv.comment(format!("{prefix}delta1"), cell(p.delta1));
    csv.comment(format!("{prefix}kappa_in"), cell(p.kappa_in));
    csv.comment(format!("{prefix}kappa_out"), cell(p.kappa_out));
    csv.comment(format!("{prefix}kappa_abs"), cell(p.kappa_abs));
    csv.comment(format!("{prefix}kappa_s"), cell(p.kappa_s));
    csv.comment(format!("{prefix}kappa_cav"), cell(rates.kappa_cav));
    csv.comment(format!("{prefix}kappa_eff"), cell(rates.kappa_eff));
    csv.comment(format!("{prefix}p_in"), cell(p.p_in));
    csv.comment(format!("{prefix}p_eff"), cell(rates.p_eff));
}
