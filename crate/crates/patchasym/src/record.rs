//! One sweep row and its CSV form.
//!
//! Column order is fixed and written as the header row. Empty cells are
//! quantities the scenario does not produce; `wall_time` is empty unless
//! the run asked for it, so that repeated runs give identical files.
//!
//! | column | meaning |
//! |---|---|
//! | `eps` | patch half-width |
//! | `cap_value`, `e_value` | `cap(ω_ε)` and `e(ω_ε)` |
//! | `chi_energy`, `zeta_energy` | `‖χ_ε‖²_{H¹}`, `‖ζ_ε‖²_{H¹}` |
//! | `u0_at_x`, `ueps_at_x` | potentials at the observation point |
//! | `predicted_delta`, `computed_delta` | `u_ε(x) - u₀(x)` from the expansion and from the solves |
//! | `residual_ratio` | `\|computed - predicted\| / \|predicted\|` |
//! | `compliance_0`, `compliance_eps` | `∫ f u` |
//! | `wall_time` | seconds |
//! | `predicted_compliance_delta` | leading term of the compliance change |
//! | `h1_delta`, `l2_delta` | norms of `u_ε - u₀` |
//! | `boundary_value` | `u₀(0)` (Dirichlet patch) or `∂u₀/∂n(0)` (Neumann patch) |
//! | `kernel_value` | `N(x, 0)` or `∂N/∂n_y(x, 0)` |
//! | `d_value`, `dist_integral` | `D(ω_ε)` and `∫_ω dist(·, ∂ω)` |
//! | `teps_dirichlet`, `teps_neumann` | operator-norm residuals of the `T_ε` approximations |
//! | `veps_inverse`, `veps_mean` | defects of the `V_ε⁻¹` identities |
//! | `class_parity`, `class_homogeneity` | 3D remainder-kernel defects |
//! | `status` | `ok` or `failed: message` |

use std::io::{Read, Write};

use crate::error::{HarnessError, Result};

macro_rules! record {
    ($($field:ident),* $(,)?) => {
        #[derive(Debug, Clone, PartialEq, Default)]
        pub struct SweepRecord {
            pub eps: f64,
            $(pub $field: Option<f64>,)*
            pub status: String,
        }

        pub const COLUMNS: &[&str] = &["eps", $(stringify!($field),)* "status"];

        impl SweepRecord {
            fn optional(&self) -> Vec<Option<f64>> {
                vec![$(self.$field,)*]
            }

            fn from_optional(eps: f64, vals: &[Option<f64>], status: String) -> Self {
                let mut it = vals.iter().copied();
                Self { eps, $($field: it.next().flatten(),)* status }
            }

            /// Named numeric column, `eps` included.
            pub fn column(&self, name: &str) -> Option<f64> {
                match name {
                    "eps" => Some(self.eps),
                    $(stringify!($field) => self.$field,)*
                    _ => None,
                }
            }
        }
    };
}

record!(
    cap_value,
    e_value,
    chi_energy,
    zeta_energy,
    u0_at_x,
    ueps_at_x,
    predicted_delta,
    computed_delta,
    residual_ratio,
    compliance_0,
    compliance_eps,
    wall_time,
    predicted_compliance_delta,
    h1_delta,
    l2_delta,
    boundary_value,
    kernel_value,
    d_value,
    dist_integral,
    teps_dirichlet,
    teps_neumann,
    veps_inverse,
    veps_mean,
    class_parity,
    class_homogeneity,
);

impl SweepRecord {
    pub fn new(eps: f64) -> Self {
        Self { eps, status: "ok".into(), ..Default::default() }
    }

    pub fn failed(eps: f64, msg: &str) -> Self {
        Self { eps, status: format!("failed: {msg}"), ..Default::default() }
    }

    pub fn is_ok(&self) -> bool {
        self.status == "ok"
    }

    /// Fills `residual_ratio` from the two deltas.
    pub fn finish(mut self) -> Self {
        if let (Some(p), Some(c)) = (self.predicted_delta, self.computed_delta) {
            if p != 0.0 {
                self.residual_ratio = Some((c - p).abs() / p.abs());
            }
        }
        self
    }

    fn cells(&self) -> Vec<String> {
        let mut out = vec![fmt_num(self.eps)];
        out.extend(self.optional().into_iter().map(|v| v.map_or_else(String::new, fmt_num)));
        out.push(self.status.clone());
        out
    }
}

fn fmt_num(v: f64) -> String {
    format!("{v:e}")
}

/// Appends rows to a CSV stream, header first, flushing after each row.
pub struct CsvSink<W: Write> {
    inner: csv::Writer<W>,
}

impl<W: Write> CsvSink<W> {
    pub fn new(w: W) -> Result<Self> {
        let mut inner = csv::WriterBuilder::new().from_writer(w);
        inner.write_record(COLUMNS).map_err(csv_err)?;
        inner.flush()?;
        Ok(Self { inner })
    }

    pub fn push(&mut self, rec: &SweepRecord) -> Result<()> {
        self.inner.write_record(rec.cells()).map_err(csv_err)?;
        self.inner.flush()?;
        Ok(())
    }

    pub fn into_inner(self) -> Result<W> {
        self.inner.into_inner().map_err(|e| HarnessError::IoFailure(e.into_error()))
    }
}

fn csv_err(e: csv::Error) -> HarnessError {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => HarnessError::IoFailure(io),
        other => HarnessError::Parse { line: 0, msg: format!("{other:?}") },
    }
}

pub fn write_csv<W: Write>(w: W, records: &[SweepRecord]) -> Result<W> {
    let mut sink = CsvSink::new(w)?;
    for r in records {
        sink.push(r)?;
    }
    sink.into_inner()
}

pub fn to_csv_string(records: &[SweepRecord]) -> String {
    String::from_utf8(write_csv(Vec::new(), records).expect("writing to memory")).expect("utf-8")
}

pub fn read_csv<R: Read>(r: R) -> Result<Vec<SweepRecord>> {
    let mut rd = csv::ReaderBuilder::new().has_headers(true).from_reader(r);
    let header: Vec<String> = rd.headers().map_err(csv_err)?.iter().map(str::to_string).collect();
    if header != COLUMNS {
        return Err(HarnessError::Parse { line: 1, msg: "unexpected header".into() });
    }
    let mut out = Vec::new();
    for (i, row) in rd.records().enumerate() {
        let row = row.map_err(csv_err)?;
        let line = i + 2;
        let num = |s: &str| -> Result<f64> {
            s.parse().map_err(|_| HarnessError::Parse { line, msg: format!("bad number `{s}`") })
        };
        let eps = num(&row[0])?;
        let n = COLUMNS.len();
        let mut vals = Vec::with_capacity(n - 2);
        for cell in row.iter().take(n - 1).skip(1) {
            vals.push(if cell.is_empty() { None } else { Some(num(cell)?) });
        }
        out.push(SweepRecord::from_optional(eps, &vals, row[n - 1].to_string()));
    }
    Ok(out)
}
