//! The subcommands, as functions from a loaded chart to printed output.

use std::fmt::Write;

use graded_pbw::checks::{self, Check, Outcome};
use graded_pbw::fedosov::{tau_pbw, FedosovData};
use graded_pbw::geometry::{Connection, VectorField};
use graded_pbw::pbw::PbwContext;
use graded_pbw::perturbation::{check_contraction, delta_contraction, fedosov_resolution, ContractionReport};
use graded_pbw::sample::Sampler;
use graded_pbw::GradedPoly;

use crate::error::CliError;
use crate::parse::{parse_op, parse_poly, parse_sym};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Direction {
    Fwd,
    Inv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Route {
    Pbw,
    Series,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum OutputFormat {
    Text,
    Records,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, clap::ValueEnum)]
pub enum Suite {
    All,
    /// pbw is a coalgebra isomorphism.
    Coalgebra,
    /// Principal symbols, two-term expansions and flatness of the induced
    /// connection.
    Expansion,
    /// The Fedosov correction, its normalization and the augmentation.
    Correction,
    /// The resolution identities.
    Resolution,
    /// The δ-contraction and its perturbation.
    Perturbation,
    /// Curvature and pairing identities across modules.
    Consistency,
}

impl Suite {
    const EACH: [Suite; 6] = [
        Suite::Coalgebra,
        Suite::Expansion,
        Suite::Correction,
        Suite::Resolution,
        Suite::Perturbation,
        Suite::Consistency,
    ];
}

/// Output of a command and whether it succeeded.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Report {
    pub text: String,
    pub ok: bool,
}

impl Report {
    fn ok(text: String) -> Self {
        Self { text, ok: true }
    }
}

/// `pbw` forward on a symmetric tensor or backward on an operator.
pub fn pbw(conn: &Connection, expr: &str, direction: Direction) -> Result<Report, CliError> {
    let chart = conn.chart();
    let ctx = PbwContext::new(conn)?;
    let out = match direction {
        Direction::Fwd => ctx.pbw_map(&parse_sym(chart, expr)?)?.to_string(),
        Direction::Inv => ctx.pbw_inv(&parse_op(chart, expr)?)?.to_string(),
    };
    Ok(Report::ok(out + "\n"))
}

/// The Fedosov correction `A` and the residual of `D²` on generators.
pub fn fedosov(conn: &Connection, output: OutputFormat) -> Result<Report, CliError> {
    let data = FedosovData::new(conn)?;
    let mut text = String::new();
    match output {
        OutputFormat::Records => {
            for r in data.records()? {
                let _ = writeln!(text, "{r}");
            }
        }
        OutputFormat::Text => {
            let _ = writeln!(text, "A = {}", data.a());
        }
    }
    let residual: Vec<_> = data
        .d_squared_residual()?
        .into_iter()
        .filter(|(_, r)| !r.is_zero())
        .collect();
    if residual.is_empty() {
        text.push_str("D2_RESIDUAL 0\n");
    }
    for (g, r) in &residual {
        let _ = writeln!(text, "D2_RESIDUAL {g} {r}");
    }
    Ok(Report {
        text,
        ok: residual.is_empty(),
    })
}

/// `τ(f)` by either route.
pub fn tau(conn: &Connection, expr: &str, route: Route) -> Result<Report, CliError> {
    let chart = conn.chart();
    let f = parse_poly(chart, expr)?;
    // τ is only defined for torsion-free connections, whichever route is used
    let data = FedosovData::new(conn)?;
    let out = match route {
        Route::Series => data.tau_series(&f)?,
        Route::Pbw => tau_pbw(&PbwContext::new(conn)?, &f, chart.max_sym_weight())?,
    };
    Ok(Report::ok(format!("{out}\n")))
}

/// Sample sizes and seed of a verification run.
#[derive(Debug, Clone, Copy)]
pub struct VerifyOptions {
    pub cases: usize,
    pub seed: u64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self { cases: 20, seed: 1 }
    }
}

/// Runs the selected suites, one `THEOREM` line per identity, then a
/// summary. Suites run on separate threads; output order is fixed.
pub fn verify(conn: &Connection, suite: Suite, opts: VerifyOptions) -> Result<Report, CliError> {
    let suites: Vec<Suite> = match suite {
        Suite::All => Suite::EACH.to_vec(),
        s => vec![s],
    };
    let results: Vec<Result<Vec<Check>, CliError>> = std::thread::scope(|scope| {
        let handles: Vec<_> = suites
            .iter()
            .enumerate()
            .map(|(k, &s)| {
                let seed = opts.seed.wrapping_mul(1000).wrapping_add(k as u64);
                scope.spawn(move || run_suite(conn, s, opts.cases, seed))
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("verification thread panicked"))
            .collect()
    });
    let mut text = String::new();
    let (mut pass, mut fail, mut skip) = (0, 0, 0);
    for checks in results {
        for c in checks? {
            match c.outcome {
                Outcome::Pass => pass += 1,
                Outcome::Fail(_) => fail += 1,
                Outcome::Skip(_) => skip += 1,
            }
            let _ = writeln!(text, "THEOREM {c}");
        }
    }
    let _ = writeln!(text, "SUMMARY pass={pass} fail={fail} skip={skip}");
    Ok(Report { text, ok: fail == 0 })
}

fn run_suite(conn: &Connection, suite: Suite, cases: usize, seed: u64) -> Result<Vec<Check>, CliError> {
    let chart = conn.chart();
    let q = chart.max_sym_weight();
    let mut s = Sampler::new(chart, seed);
    let tensors = |s: &mut Sampler| -> Vec<_> { (0..cases).map(|_| s.sym_tensor(q.min(4), 3, 2)).collect() };
    let fedosov = || match FedosovData::new(conn) {
        Ok(d) => Ok(Some(d)),
        Err(graded_pbw::Error::RequiresTorsionFree) => Ok(None),
        Err(e) => Err(CliError::from(e)),
    };
    const TORSION: &str = "requires a torsion-free connection";
    let out = match suite {
        Suite::All => unreachable!("expanded by the caller"),
        Suite::Coalgebra => {
            let ctx = PbwContext::new(conn)?;
            vec![
                checks::coalgebra_morphism(&ctx, &tensors(&mut s)),
                checks::pbw_round_trip(&ctx, q),
            ]
        }
        Suite::Expansion => {
            let ctx = PbwContext::new(conn)?;
            let mut out = vec![
                checks::principal_symbol(&ctx, &tensors(&mut s)),
                checks::two_term_expansions(&ctx, &checks::random_field_lists(&mut s, cases, q.min(4) as usize)),
            ];
            if conn.is_torsion_free() {
                let wide = PbwContext::with_max_weight(conn, q + 1)?;
                let mut fields: Vec<VectorField> = (0..chart.dim()).map(|i| VectorField::coordinate(chart, i)).collect();
                fields.push(s.field(1));
                out.push(checks::lightning_flatness(&wide, &fields, q.saturating_sub(1)));
            } else {
                out.push(Check::skip("lightning_flatness", TORSION));
            }
            out
        }
        Suite::Correction => {
            let names = ["correction_is_minus_xi", "normalization", "d_squared", "tau_identities", "tau_multiplicative"];
            let Some(data) = fedosov()? else {
                return Ok(names.iter().map(|n| Check::skip(n, TORSION)).collect());
            };
            let wide = PbwContext::with_max_weight(conn, q + 1)?;
            let ctx = PbwContext::new(conn)?;
            let sections: Vec<GradedPoly> = (0..cases).map(|k| s.section(k as u32 % 3, q, 3, 2)).collect();
            let fs: Vec<GradedPoly> = (0..cases).map(|_| s.function(3, 2)).collect();
            let pairs: Vec<_> = (0..cases).map(|_| (s.function(2, 2), s.function(2, 2))).collect();
            let mut out = vec![
                checks::correction_is_minus_xi(&data, &wide, q),
                checks::normalization(&data, &wide, q),
                checks::d_squared(&data, &sections),
                checks::tau_identities(&data, &ctx, &fs),
                checks::tau_multiplicative(&data, &pairs),
            ];
            if conn.entries().next().is_none() {
                out.push(checks::flat_taylor(&data, &fs));
            }
            out
        }
        Suite::Resolution => {
            let Some(data) = fedosov()? else {
                return Ok(vec![Check::skip("resolution", TORSION)]);
            };
            let etas: Vec<GradedPoly> = (0..cases).map(|k| s.section(k as u32 % 2, q, 3, 2)).collect();
            let fs: Vec<GradedPoly> = (0..cases.div_ceil(2)).map(|_| s.function(3, 2)).collect();
            let probes: Vec<GradedPoly> = (0..cases).map(|k| s.section(k as u32 % 3, q, 3, 2)).collect();
            vec![checks::resolution(&data, &etas, &fs, &probes)]
        }
        Suite::Perturbation => {
            let Some(data) = fedosov()? else {
                return Ok(vec![
                    Check::skip("delta_contraction", TORSION),
                    Check::skip("perturbed_contraction", TORSION),
                ]);
            };
            let probes: Vec<GradedPoly> = (0..cases).map(|k| s.section(k as u32 % 3, q, 3, 2)).collect();
            let fs: Vec<GradedPoly> = (0..cases).map(|_| s.function(3, 2)).collect();
            let cases = probes.len() + fs.len();
            let base = check_contraction(&delta_contraction(&data), &probes, &fs);
            let perturbed = match fedosov_resolution(&data, &probes) {
                Ok(p) => contraction_check("perturbed_contraction", &check_contraction(&p.contraction, &probes, &fs), cases),
                Err(e) => Check {
                    name: "perturbed_contraction".into(),
                    cases: 0,
                    outcome: Outcome::Fail(format!("error: {e}")),
                },
            };
            vec![contraction_check("delta_contraction", &base, cases), perturbed]
        }
        Suite::Consistency => {
            let sections: Vec<GradedPoly> = (0..cases).map(|k| s.section(k as u32 % 2, q, 3, 2)).collect();
            let mut triples = Vec::with_capacity(cases);
            while triples.len() < cases {
                triples.extend(s.pairing_triple(q.min(3)));
            }
            vec![
                checks::curvature_consistency(conn, &sections),
                checks::pairing_identity(&triples),
            ]
        }
    };
    Ok(out)
}

fn contraction_check(name: &str, report: &ContractionReport, cases: usize) -> Check {
    let outcome = match report.results.iter().find(|r| !r.passed()) {
        None => Outcome::Pass,
        Some(r) => Outcome::Fail(r.to_string()),
    };
    Check {
        name: name.into(),
        cases,
        outcome,
    }
}
