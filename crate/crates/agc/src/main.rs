//! Command-line surface: code parameters, check-set construction, encoding,
//! majority-logic decoding, Monte-Carlo simulation, and the oracle suites.

use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use agc::agcode::{CodeParams, Word};
use agc::checkfile;
use agc::decoder::{majority_decode, DecodeStatus};
use agc::error::Result;
use agc::falinalg::Matrix;
use agc::gf::FieldSpec;
use agc::oracle;
use agc::paritygen::{
    apply_to_word, build_orthogonal_set, eq3_count, transport_to, AffineAutomorphism,
};
use agc::rng::Xorshift64Star;
use agc::sim::{self, SimConfig};

#[derive(Parser)]
#[command(
    name = "agc",
    version,
    about = "Affine Grassmann codes: orthogonal parity checks and majority-logic decoding"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct CodeArgs {
    /// Prime characteristic of GF(p^e).
    #[arg(long)]
    p: u64,
    /// Extension degree.
    #[arg(long, default_value_t = 1)]
    e: u32,
    /// Number of rows of the coordinate matrices.
    #[arg(long)]
    l: usize,
    /// Number of columns (l <= lp).
    #[arg(long)]
    lp: usize,
}

impl CodeArgs {
    fn params(&self) -> Result<CodeParams> {
        CodeParams::new(FieldSpec::new(self.p, self.e)?, self.l, self.lp)
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Print n, k, d, d_dual and the orthogonal check count J.
    Params {
        #[command(flatten)]
        code: CodeArgs,
    },
    /// Construct the orthogonal check set and write it to a file.
    BuildChecks {
        #[command(flatten)]
        code: CodeArgs,
        /// Output path.
        #[arg(short, long)]
        output: PathBuf,
        /// Transport the set to this coordinate (default: anchored at 0).
        #[arg(long)]
        anchor: Option<u64>,
    },
    /// Encode a length-k message (digit string) into a codeword.
    Encode {
        #[command(flatten)]
        code: CodeArgs,
        /// Message as k digits (0-9a-z), least index first.
        #[arg(long)]
        message: String,
    },
    /// Majority-logic decode a received word against a check-set file.
    Decode {
        /// Check-set file produced by build-checks.
        #[arg(long)]
        checks: PathBuf,
        /// Received word as n digits (0-9a-z).
        #[arg(long)]
        received: String,
    },
    /// Monte-Carlo decoding trials with exact-weight errors; writes CSV.
    Simulate {
        #[command(flatten)]
        code: CodeArgs,
        /// Exact error weight injected per trial.
        #[arg(long)]
        t: u64,
        #[arg(long)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output CSV path.
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Run every oracle suite; exit 0 only if all of them pass.
    Verify,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.cmd {
        Cmd::Params { code } => {
            let params = code.params()?;
            println!("{}", params.spec());
            println!(
                "n={} k={} d={} d_dual={} J={}",
                params.n(),
                params.k(),
                params.d(),
                params.d_dual(),
                eq3_count(&params)
            );
        }
        Cmd::BuildChecks {
            code,
            output,
            anchor,
        } => {
            let params = code.params()?;
            let mut set = build_orthogonal_set(&params)?;
            if let Some(anchor) = anchor {
                let target = params.point_from_index(anchor)?;
                set = transport_to(&params, &set, &target)?;
            }
            checkfile::write_to(&output, &params, &set)?;
            println!(
                "wrote {} checks anchored at {} to {}",
                set.j(),
                set.anchor(),
                output.display()
            );
        }
        Cmd::Encode { code, message } => {
            let params = code.params()?;
            let msg = Word::from_digit_string(params.spec(), &message)?;
            let word = params.encode(&msg.coords)?;
            println!("{}", word.to_digit_string()?);
        }
        Cmd::Decode { checks, received } => {
            let (params, mut set) = checkfile::read_from(&checks)?;
            if set.anchor() != 0 {
                set = transport_to(&params, &set, &params.zero_point())?;
            }
            let word = Word::from_digit_string(params.spec(), &received)?;
            let result = majority_decode(&params, &word, &set)?;
            match result.status {
                DecodeStatus::Corrected => println!("status: Corrected"),
                DecodeStatus::NotACodeword => println!("status: NotACodeword"),
            }
            let errors: Vec<String> = result
                .error_vector
                .coords
                .iter()
                .enumerate()
                .filter(|(_, v)| !v.is_zero())
                .map(|(i, v)| format!("{i}:{}", v.index()))
                .collect();
            if errors.is_empty() {
                println!("errors: none");
            } else {
                println!("errors: {}", errors.join(" "));
            }
            println!("corrected: {}", result.estimate.to_digit_string()?);
        }
        Cmd::Simulate {
            code,
            t,
            trials,
            seed,
            output,
        } => {
            let params = code.params()?;
            let set = build_orthogonal_set(&params)?;
            let cfg = SimConfig {
                error_weight: t,
                trials,
                seed,
            };
            let records = sim::simulate(&params, &set, &cfg)?;
            std::fs::write(&output, sim::to_csv(&records))?;
            println!(
                "{} trials at weight {}: success rate {:.4} -> {}",
                trials,
                t,
                sim::success_rate(&records),
                output.display()
            );
        }
        Cmd::Verify => return verify(),
    }
    Ok(ExitCode::SUCCESS)
}

/// The oracle suites: every closed form against its exhaustive or
/// randomized validator. One line per suite.
fn verify() -> Result<ExitCode> {
    let suites: &[(&str, fn() -> Result<String>)] = &[
        ("min-distance", suite_min_distance),
        ("dual-distance", suite_dual_distance),
        ("check-count", suite_check_count),
        ("orthogonality", suite_orthogonality),
        ("duality", suite_duality),
        ("coverage", suite_coverage),
        ("decoding-radius", suite_decoding_radius),
        ("automorphisms", suite_automorphisms),
        ("ratio-trend", suite_ratio_trend),
    ];
    let mut all_ok = true;
    for (name, run) in suites {
        let start = Instant::now();
        match run() {
            Ok(detail) => println!(
                "PASS {name}: {detail} ({:.2}s)",
                start.elapsed().as_secs_f64()
            ),
            Err(e) => {
                all_ok = false;
                println!("FAIL {name}: {e}");
            }
        }
    }
    Ok(if all_ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    })
}

fn desk_params(p: u64, e: u32, l: usize, lp: usize) -> Result<CodeParams> {
    CodeParams::new(FieldSpec::new(p, e)?, l, lp)
}

fn suite_min_distance() -> Result<String> {
    let sets = [
        (3, 1, 1, 1),
        (3, 1, 1, 2),
        (3, 1, 2, 2),
        (2, 2, 1, 2),
        (5, 1, 1, 2),
    ];
    let mut parts = Vec::new();
    for (p, e, l, lp) in sets {
        let params = desk_params(p, e, l, lp)?;
        let brute = oracle::brute_min_distance(&params)?;
        if brute != params.d() {
            return Err(agc::Error::RankMismatch(format!(
                "q={} l={l} lp={lp}: brute {brute} != closed form {}",
                params.q(),
                params.d()
            )));
        }
        parts.push(format!("q={} l={l} lp={lp} d={brute}", params.q()));
    }
    Ok(parts.join(", "))
}

fn suite_dual_distance() -> Result<String> {
    let sets = [(3, 1, 2, 2), (5, 1, 1, 2), (2, 2, 2, 2), (2, 2, 1, 2)];
    for (p, e, l, lp) in sets {
        let params = desk_params(p, e, l, lp)?;
        let report = oracle::dual_distance_check(&params)?;
        if report.distance != 3 {
            return Err(agc::Error::RankMismatch(format!(
                "dual distance {} != 3",
                report.distance
            )));
        }
    }
    Ok("d_dual = 3 on all tested sets".into())
}

fn suite_check_count() -> Result<String> {
    let sets: [(u64, u32, usize, usize, Option<u128>); 4] = [
        (3, 1, 1, 2, Some(4)),
        (3, 1, 2, 2, Some(28)),
        (2, 2, 2, 2, None),
        (5, 1, 1, 2, Some(12)),
    ];
    let mut parts = Vec::new();
    for (p, e, l, lp, expected) in sets {
        let params = desk_params(p, e, l, lp)?;
        let set = build_orthogonal_set(&params)?;
        let formula = eq3_count(&params);
        if set.j() as u128 != formula || expected.is_some_and(|x| x != formula) {
            return Err(agc::Error::RankMismatch(format!(
                "q={} l={l} lp={lp}: built {} vs formula {formula}",
                params.q(),
                set.j()
            )));
        }
        parts.push(format!("q={} l={l} lp={lp} J={formula}", params.q()));
    }
    Ok(parts.join(", "))
}

fn suite_orthogonality() -> Result<String> {
    let params = desk_params(3, 1, 2, 2)?;
    let set = build_orthogonal_set(&params)?;
    set.verify_orthogonal()?;
    let pairs = set.j() * (set.j() - 1) / 2;
    Ok(format!("{pairs} support pairs meet only at the anchor"))
}

fn suite_duality() -> Result<String> {
    let sets = [(3, 1, 1, 2), (3, 1, 2, 2), (2, 2, 2, 2), (5, 1, 1, 2)];
    let mut products = 0u64;
    for (p, e, l, lp) in sets {
        let params = desk_params(p, e, l, lp)?;
        let set = build_orthogonal_set(&params)?;
        let g = params.generator_matrix()?;
        for check in set.checks() {
            for i in 0..params.k() {
                let row = Word {
                    coords: g.row(i).to_vec(),
                };
                if !check.dot(params.spec(), &row).is_zero() {
                    return Err(agc::Error::RankMismatch(format!(
                        "check not orthogonal to generator row {i}"
                    )));
                }
                products += 1;
            }
        }
    }
    Ok(format!("{products} inner products, all zero"))
}

fn suite_coverage() -> Result<String> {
    for (p, e, l, lp) in [(3, 1, 2, 2), (5, 1, 1, 2)] {
        let params = desk_params(p, e, l, lp)?;
        let set = build_orthogonal_set(&params)?;
        let census = oracle::rank_census(&params)?;
        let mut covered = set.covered_indices();
        covered.sort_unstable();
        let unique = covered.len();
        covered.dedup();
        if unique != covered.len() {
            return Err(agc::Error::RankMismatch("a point is covered twice".into()));
        }
        let expected: u64 = (1..=params.l()).map(|r| census[r]).sum();
        if covered.len() as u64 != expected {
            return Err(agc::Error::RankMismatch(format!(
                "covered {} points, census says {expected}",
                covered.len()
            )));
        }
        for idx in covered {
            let r = params.point_from_index(idx)?.rank();
            if r == 0 || r > params.l() {
                return Err(agc::Error::RankMismatch(format!(
                    "covered point {idx} has rank {r}"
                )));
            }
        }
    }
    Ok("supports tile the rank 1..l matrices exactly once".into())
}

fn suite_decoding_radius() -> Result<String> {
    // Exhaustive weight <= 2 at (3,1,2): J = 4 corrects 2 errors.
    let params = desk_params(3, 1, 1, 2)?;
    let set = build_orthogonal_set(&params)?;
    let spec = params.spec().clone();
    let n = params.n() as usize;
    let mut rng = Xorshift64Star::new(271828);
    let mut patterns = 0u64;
    for _ in 0..5 {
        let message: Vec<_> = (0..params.k())
            .map(|_| spec.element(rng.gen_range(params.q())).expect("< q"))
            .collect();
        let c = params.encode(&message)?;
        let try_pattern = |r: &Word| -> Result<()> {
            let res = majority_decode(&params, r, &set)?;
            if res.status != DecodeStatus::Corrected || res.estimate != c {
                return Err(agc::Error::RankMismatch("pattern not corrected".into()));
            }
            Ok(())
        };
        for i in 0..n {
            for vi in 1..params.q() {
                let mut r = c.clone();
                r.coords[i] = spec.add(r.coords[i], spec.element(vi)?);
                try_pattern(&r)?;
                patterns += 1;
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                for vi in 1..params.q() {
                    for vj in 1..params.q() {
                        let mut r = c.clone();
                        r.coords[i] = spec.add(r.coords[i], spec.element(vi)?);
                        r.coords[j] = spec.add(r.coords[j], spec.element(vj)?);
                        try_pattern(&r)?;
                        patterns += 1;
                    }
                }
            }
        }
    }

    // Monte-Carlo weight 14 at (3,2,2): J = 28 corrects 14 errors.
    let params = desk_params(3, 1, 2, 2)?;
    let set = build_orthogonal_set(&params)?;
    let cfg = SimConfig {
        error_weight: 14,
        trials: 1000,
        seed: 314159,
    };
    let records = sim::simulate(&params, &set, &cfg)?;
    let ok = records.iter().filter(|r| r.success).count();
    if ok != records.len() {
        return Err(agc::Error::RankMismatch(format!(
            "{ok}/{} weight-14 trials corrected",
            records.len()
        )));
    }
    Ok(format!(
        "{patterns} exhaustive patterns and {ok}/1000 weight-14 trials corrected",
    ))
}

fn suite_automorphisms() -> Result<String> {
    let mut rng = Xorshift64Star::new(1618);
    let mut mapped = 0u64;
    for (p, e, l, lp) in [(3, 1, 1, 2), (3, 1, 2, 2)] {
        let params = desk_params(p, e, l, lp)?;
        let g = params.generator_matrix()?.clone();
        for _ in 0..100 {
            let aut = AffineAutomorphism::new(
                params.point_from_index(rng.gen_range(params.n()))?,
                random_invertible(params.spec(), &mut rng, params.lp()),
                random_invertible(params.spec(), &mut rng, params.l()),
            )?;
            for i in 0..params.k() {
                let row = Word {
                    coords: g.row(i).to_vec(),
                };
                if !params.is_codeword(&apply_to_word(&params, &row, &aut)?)? {
                    return Err(agc::Error::RankMismatch(
                        "automorphism image left the code".into(),
                    ));
                }
                mapped += 1;
            }
        }
    }
    Ok(format!("{mapped} generator-row images stayed in the code"))
}

fn suite_ratio_trend() -> Result<String> {
    let fields: Vec<Arc<FieldSpec>> = [(3u64, 1u32), (5, 1), (7, 1), (3, 2)]
        .iter()
        .map(|&(p, e)| FieldSpec::new(p, e))
        .collect::<Result<_>>()?;
    let rows = oracle::ratio_table(&fields, 2, 2)?;
    if !oracle::ratio_trend_is_decreasing(&rows, 2) {
        return Err(agc::Error::RankMismatch(
            "|J/d - 1/4| is not strictly decreasing".into(),
        ));
    }
    let cells: Vec<String> = rows
        .iter()
        .map(|r| format!("q={} J/d={:.3}", r.q, r.ratio))
        .collect();
    Ok(cells.join(", "))
}

fn random_invertible(spec: &Arc<FieldSpec>, rng: &mut Xorshift64Star, nsize: usize) -> Matrix {
    loop {
        let mut m = Matrix::zeros(spec.clone(), nsize, nsize);
        for i in 0..nsize {
            for j in 0..nsize {
                m.set(i, j, spec.element(rng.gen_range(spec.q())).expect("< q"));
            }
        }
        if m.rank() == nsize {
            return m;
        }
    }
}
