//! Timed comparison of the elementary-block route against full-size
//! pseudo-inverses on seeded random instances.
//!
//! Instances follow the usual low-rank construction: `A = R₁ R₂` with
//! `R₁` of size `m x q·dh` and `R₂` of size `q·dh x n`, and `C` of size
//! `q·dh x n`, all entries i.i.d. uniform on `[0, 1)` from a ChaCha8 stream
//! seeded with the configured 64-bit seed. Each method gets one untimed
//! warm-up run; reported times are medians over the timed trials.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{frobenius_norm, matmul, pinv, Mat, PinvOptions};
use crate::partition::{ColPartition, RowPartition};
use crate::reduction::reduce_rows;
use crate::solver::{direct_solve, ebos_solve, reconstruct, solve_y};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BenchMode {
    YEquation,
    FullSolve,
    Flops,
    Verify,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchConfig {
    pub m: usize,
    pub n: usize,
    pub q: usize,
    /// Rows per block of `C`; `h = q * dh`.
    pub dh: usize,
    pub trials: usize,
    pub seed: u64,
    pub mode: BenchMode,
    pub output_format: OutputFormat,
}

impl BenchConfig {
    pub fn new(m: usize, n: usize, q: usize, dh: usize) -> Self {
        BenchConfig {
            m,
            n,
            q,
            dh,
            trials: 1,
            seed: 0,
            mode: BenchMode::YEquation,
            output_format: OutputFormat::Csv,
        }
    }

    pub fn h(&self) -> usize {
        self.q * self.dh
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("m", self.m),
            ("n", self.n),
            ("q", self.q),
            ("dh", self.dh),
            ("trials", self.trials),
        ] {
            if v == 0 {
                return Err(Error::InvalidArgument(format!("{name} must be at least 1")));
            }
        }
        Ok(())
    }

    pub fn row_partition(&self) -> Result<RowPartition> {
        RowPartition::uniform(self.q, self.dh)
    }
}

/// One benchmark measurement. Times are wall-clock seconds from a
/// monotonic clock.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRecord {
    pub m: usize,
    pub n: usize,
    pub dh: usize,
    pub q: usize,
    pub t_direct: f64,
    pub t_ebos: f64,
    pub ratio: f64,
    pub residual_direct: f64,
    pub residual_ebos: f64,
    /// `max |Y₊ C - A|` (y-equation) or `max |B X₊ C - A|` (full solve).
    pub max_abs_defect: f64,
    /// `‖B X₊ C - B X₀ C‖_F`, full solve only.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reconstruction_diff: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pass: Option<bool>,
}

pub const CSV_HEADER: &str = "m,n,dh,q,t_direct_s,t_ebos_s,ratio,residual_direct,residual_ebos";

impl BenchRecord {
    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{:.6},{:.6},{:.4},{:e},{:e}",
            self.m,
            self.n,
            self.dh,
            self.q,
            self.t_direct,
            self.t_ebos,
            self.ratio,
            self.residual_direct,
            self.residual_ebos
        )
    }
}

pub fn records_csv(records: &[BenchRecord]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in records {
        out.push_str(&r.csv_row());
        out.push('\n');
    }
    out
}

/// `rows x cols` matrix of uniform `[0, 1)` entries drawn row by row.
pub fn uniform_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> Mat {
    let entries: Vec<f64> = (0..rows * cols).map(|_| rng.random::<f64>()).collect();
    Mat::from_row_slice(rows, cols, &entries).expect("uniform samples are finite")
}

/// `(A, C)` for the configured sizes; identical seeds give identical bits.
pub fn gen_instance(cfg: &BenchConfig) -> Result<(Mat, Mat)> {
    cfg.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let h = cfg.h();
    let r1 = uniform_matrix(&mut rng, cfg.m, h);
    let r2 = uniform_matrix(&mut rng, h, cfg.n);
    let c = uniform_matrix(&mut rng, h, cfg.n);
    Ok((matmul(&r1, &r2)?, c))
}

/// Agreement bound between the two methods' reconstructions.
fn conformity_bound(a: &Mat) -> f64 {
    1e-9 * (1.0 + frobenius_norm(a))
}

fn median(mut xs: Vec<f64>) -> f64 {
    xs.sort_by(f64::total_cmp);
    let k = xs.len();
    if k % 2 == 1 {
        xs[k / 2]
    } else {
        0.5 * (xs[k / 2 - 1] + xs[k / 2])
    }
}

/// Runs `run` once untimed, then `trials` timed repetitions. Returns the
/// warm-up output and the median time.
fn timed<R>(trials: usize, mut run: impl FnMut() -> Result<R>) -> Result<(R, f64)> {
    let out = run()?;
    let mut times = Vec::with_capacity(trials);
    for _ in 0..trials {
        let start = Instant::now();
        let r = run()?;
        times.push(start.elapsed().as_secs_f64());
        drop(r);
    }
    Ok((out, median(times)))
}

/// Times `Y₀ = A C†` against the block route (reduction of `C` plus `Y₊`),
/// both solving `Y CC* = AC*` on the same instance.
pub fn bench_y_equation(cfg: &BenchConfig) -> Result<BenchRecord> {
    let (a, c) = gen_instance(cfg)?;
    let rp = cfg.row_partition()?;
    let opts = PinvOptions::automatic();

    let (y_direct, t_direct) = timed(cfg.trials, || matmul(&a, &pinv(&c, &opts)?))?;
    let (y_ebos, t_ebos) = timed(cfg.trials, || {
        let rr = reduce_rows(&c, &rp, &opts)?;
        solve_y(&a, &rr)
    })?;

    let defect_direct = &matmul(&y_direct, &c)? - &a;
    let defect_ebos = &matmul(&y_ebos, &c)? - &a;
    Ok(BenchRecord {
        m: cfg.m,
        n: cfg.n,
        dh: cfg.dh,
        q: cfg.q,
        t_direct,
        t_ebos,
        ratio: t_ebos / t_direct,
        residual_direct: frobenius_norm(&defect_direct),
        residual_ebos: frobenius_norm(&defect_ebos),
        max_abs_defect: defect_ebos.max_abs(),
        reconstruction_diff: None,
        pass: None,
    })
}

/// Times the complete solve of `min ‖A - B X C‖_F` by both methods. `B` is
/// drawn uniform with column blocks `b_partition` from its own seed.
pub fn bench_full(cfg: &BenchConfig, b_partition: &ColPartition, b_seed: u64) -> Result<BenchRecord> {
    let (a, c) = gen_instance(cfg)?;
    let b = uniform_matrix(&mut ChaCha8Rng::seed_from_u64(b_seed), cfg.m, b_partition.total());
    let rp = cfg.row_partition()?;
    let opts = PinvOptions::automatic();

    let (direct, t_direct) = timed(cfg.trials, || direct_solve(&a, &b, &c, &opts))?;
    let (ebos, t_ebos) = timed(cfg.trials, || ebos_solve(&a, &b, &c, b_partition, &rp, &opts))?;

    let rec_direct = reconstruct(&b, &direct.x_plus, &c)?;
    let rec_ebos = reconstruct(&b, &ebos.x_plus, &c)?;
    let diff = frobenius_norm(&(&rec_ebos - &rec_direct));
    Ok(BenchRecord {
        m: cfg.m,
        n: cfg.n,
        dh: cfg.dh,
        q: cfg.q,
        t_direct,
        t_ebos,
        ratio: t_ebos / t_direct,
        residual_direct: direct.residual,
        residual_ebos: ebos.residual,
        max_abs_defect: (&rec_ebos - &a).max_abs(),
        reconstruction_diff: Some(diff),
        pass: Some(diff <= conformity_bound(&a)),
    })
}

/// Aggregate of a verification sweep over random instances.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifySummary {
    pub instances: usize,
    pub max_reconstruction_diff: f64,
    pub max_residual_gap: f64,
    pub pass: bool,
}

/// Solves `cfg.trials` random instances (seeds `seed, seed+1, ...`) with
/// `B` of `q` column blocks of width `dh`, checking that both methods reach
/// the same reconstruction and residual.
pub fn verify(cfg: &BenchConfig) -> Result<VerifySummary> {
    cfg.validate()?;
    let cp = ColPartition::uniform(cfg.q, cfg.dh)?;
    let rp = cfg.row_partition()?;
    let opts = PinvOptions::automatic();
    let mut summary = VerifySummary {
        instances: cfg.trials,
        max_reconstruction_diff: 0.0,
        max_residual_gap: 0.0,
        pass: true,
    };
    for k in 0..cfg.trials as u64 {
        let inst = BenchConfig {
            seed: cfg.seed.wrapping_add(k),
            ..cfg.clone()
        };
        let (a, c) = gen_instance(&inst)?;
        let b = uniform_matrix(
            &mut ChaCha8Rng::seed_from_u64(inst.seed ^ 0xB5B5_B5B5),
            cfg.m,
            cp.total(),
        );
        let e = ebos_solve(&a, &b, &c, &cp, &rp, &opts)?;
        let d = direct_solve(&a, &b, &c, &opts)?;
        let diff = frobenius_norm(&(&reconstruct(&b, &e.x_plus, &c)? - &reconstruct(&b, &d.x_plus, &c)?));
        let gap = (e.residual - d.residual).abs();
        let bound = conformity_bound(&a);
        summary.max_reconstruction_diff = summary.max_reconstruction_diff.max(diff);
        summary.max_residual_gap = summary.max_residual_gap.max(gap);
        summary.pass &= diff <= bound && gap <= bound;
    }
    Ok(summary)
}
