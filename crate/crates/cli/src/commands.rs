//! One function per subcommand; each returns the table to emit.

use std::f64::consts::PI;
use std::path::Path;

use pt2::dynamics::{self, FlavorState, ProbabilityTable};
use pt2::exceptional::{self, EPCase, EpStatus, OpenSystemParams};
use pt2::hamiltonian::{self, DEFAULT_EP_TOL};
use pt2::meson::{self, MesonParams};
use pt2::spectral::{self, InnerProductKind, SpectralData};
use pt2::{expm_oracle, DerivedBrokenParams, Matrix2C, PTParams, PhaseClass};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::table::{Cell, Table};
use crate::{CaseArg, Failure, GridArgs, PtArgs, StateArg};

/// Largest accepted oracle deviation, `|closed − oracle| / max(|oracle|, 1e-4)`;
/// equivalently 1e-10 relative with a 1e-14 absolute floor.
pub const ORACLE_CHECK_TOL: f64 = 1e-10;
const ORACLE_CHECK_FLOOR: f64 = 1e-4;

pub struct Report {
    pub table: Table,
    /// Summary line for stderr.
    pub note: Option<String>,
    /// Set when the table was produced but the run should still fail.
    pub failure: Option<Failure>,
}

impl From<Table> for Report {
    fn from(table: Table) -> Self {
        Self {
            table,
            note: None,
            failure: None,
        }
    }
}

fn invalid(msg: impl Into<String>) -> Failure {
    Failure::Validation(msg.into())
}

impl PtArgs {
    pub fn params(&self) -> Result<PTParams, Failure> {
        let (varphi, phi) = if self.degrees {
            (self.varphi.to_radians(), self.phi.to_radians())
        } else {
            (self.varphi, self.phi)
        };
        Ok(PTParams::new(self.rho, varphi, self.sigma, phi)?)
    }

    fn broken(&self) -> Result<(PTParams, DerivedBrokenParams), Failure> {
        let p = self.params()?;
        Ok((p, DerivedBrokenParams::from_pt(&p)?))
    }
}

impl GridArgs {
    pub fn times(&self) -> Result<Vec<f64>, Failure> {
        let (a, b, n) = (self.t_min, self.t_max, self.n);
        if !(a.is_finite() && b.is_finite()) {
            return Err(invalid("time bounds must be finite"));
        }
        if a < 0.0 {
            return Err(invalid(format!("--t-min = {a} must be non-negative")));
        }
        if a > b {
            return Err(invalid(format!("--t-min = {a} exceeds --t-max = {b}")));
        }
        if n == 0 {
            return Err(invalid("--n must be at least 1"));
        }
        Ok(linspace(a, b, n))
    }
}

fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![a];
    }
    let last = (n - 1) as f64;
    (0..n)
        .map(|k| {
            if k + 1 == n {
                b
            } else {
                a + (b - a) * k as f64 / last
            }
        })
        .collect()
}

/// Rows computed in parallel, emitted in grid order.
fn sweep<T: Sync>(
    grid: &[T],
    row: impl Fn(&T) -> Result<Vec<Cell>, Failure> + Sync + Send,
) -> Result<Vec<Vec<Cell>>, Failure> {
    grid.par_iter().map(row).collect()
}

fn probability_row(t: f64, p: &ProbabilityTable) -> Vec<Cell> {
    vec![t.into(), p.aa.into(), p.ab.into(), p.ba.into(), p.bb.into()]
}

const PROB_COLUMNS: [&str; 5] = ["t", "p_aa", "p_ab", "p_ba", "p_bb"];

fn phase_cells(phase: &PhaseClass) -> [Cell; 3] {
    match *phase {
        PhaseClass::Symmetric { alpha } => [phase.tag().into(), alpha.into(), Cell::Empty],
        PhaseClass::Broken { alpha_prime } => [phase.tag().into(), Cell::Empty, alpha_prime.into()],
        PhaseClass::ExceptionalPoint => [phase.tag().into(), Cell::Empty, Cell::Empty],
    }
}

pub fn classify(args: &PtArgs) -> Result<Report, Failure> {
    let p = args.params()?;
    let phase = hamiltonian::classify(&p, DEFAULT_EP_TOL)?;
    let mut row: Vec<Cell> = vec![p.rho.into(), p.varphi.into(), p.sigma.into(), p.phi.into()];
    row.extend(phase_cells(&phase));
    row.extend([p.gain().into(), p.splitting().into()]);
    Ok(Table::with_rows(
        &[
            "rho",
            "varphi",
            "sigma",
            "phi",
            "phase",
            "alpha",
            "alpha_prime",
            "gain",
            "splitting",
        ],
        vec![row],
    )
    .into())
}

pub fn eigen(args: &PtArgs) -> Result<Report, Failure> {
    let p = args.params()?;
    let columns = [
        "branch",
        "re_energy",
        "im_energy",
        "re_u0",
        "im_u0",
        "re_u1",
        "im_u1",
        "phase",
    ];
    let row = |branch: &str, e: pt2::C64, u: pt2::Vector2C, tag: &str| -> Vec<Cell> {
        vec![
            branch.into(),
            e.re.into(),
            e.im.into(),
            u.c0.re.into(),
            u.c0.im.into(),
            u.c1.re.into(),
            u.c1.im.into(),
            tag.into(),
        ]
    };
    if hamiltonian::classify(&p, DEFAULT_EP_TOL)? == PhaseClass::ExceptionalPoint {
        p.require_zero_phi()?;
        let (e0, _) = hamiltonian::eigenvalues(&p);
        let rows = vec![row("ep", e0, spectral::ep_state(), "ep")];
        return Ok(Table::with_rows(&columns, rows).into());
    }
    let s = SpectralData::new(&p, DEFAULT_EP_TOL)?;
    let tag = s.phase.tag();
    let rows = vec![
        row("plus", s.e_plus, s.u_plus, tag),
        row("minus", s.e_minus, s.u_minus, tag),
    ];
    Ok(Table::with_rows(&columns, rows).into())
}

pub fn evolve(args: &PtArgs, grid: &GridArgs, state: StateArg) -> Result<Report, Failure> {
    let (p, d) = args.broken()?;
    let phase = hamiltonian::classify(&p, DEFAULT_EP_TOL)?;
    let state = match state {
        StateArg::A => FlavorState::A,
        StateArg::B => FlavorState::B,
        StateArg::TildeA => FlavorState::TildeA,
        StateArg::TildeB => FlavorState::TildeB,
    };
    let times = grid.times()?;
    let rows = sweep(&times, |&t| {
        let v = dynamics::evolve_flavor(&d, state, t)?;
        let norm = spectral::inner(InnerProductKind::PT, &phase, &v, &v)?;
        Ok(vec![
            t.into(),
            v.c0.re.into(),
            v.c0.im.into(),
            v.c1.re.into(),
            v.c1.im.into(),
            norm.re.into(),
        ])
    })?;
    Ok(Table::with_rows(&["t", "re_c0", "im_c0", "re_c1", "im_c1", "pt_norm"], rows).into())
}

pub fn probs(args: &PtArgs, grid: &GridArgs) -> Result<Report, Failure> {
    let (_, d) = args.broken()?;
    let times = grid.times()?;
    let rows = sweep(&times, |&t| {
        Ok(probability_row(t, &dynamics::probabilities_pt(&d, t)?))
    })?;
    Ok(Table::with_rows(&PROB_COLUMNS, rows).into())
}

pub fn cpt_probs(args: &PtArgs, grid: &GridArgs) -> Result<Report, Failure> {
    let (_, d) = args.broken()?;
    let times = grid.times()?;
    let rows = sweep(&times, |&t| {
        Ok(probability_row(
            t,
            &dynamics::probabilities_cpt_flavor(&d, t)?,
        ))
    })?;
    Ok(Table::with_rows(&PROB_COLUMNS, rows).into())
}

pub fn read_meson_params(path: &Path) -> Result<MesonParams, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| invalid(format!("cannot read {}: {e}", path.display())))?;
    let params: MesonParams = serde_json::from_str(&text)
        .map_err(|e| invalid(format!("cannot parse {}: {e}", path.display())))?;
    params.validate()?;
    Ok(params)
}

pub fn meson(path: &Path, grid: &GridArgs) -> Result<Report, Failure> {
    let params = read_meson_params(path)?;
    let sol = meson::solve(&params)?;
    let times = grid.times()?;
    let rows = sweep(&times, |&t| {
        let (stay, flip) = meson::transition_probabilities(&sol, t);
        Ok(vec![t.into(), stay.into(), flip.into()])
    })?;
    let mut report = Report::from(Table::with_rows(&["t", "p_stay", "p_flip"], rows));
    report.note = Some(format!(
        "M1 = {:.16e}, M2 = {:.16e}, Gamma1 = {:.16e}, Gamma2 = {:.16e}, z = {:.16e}{:+.16e}i",
        sol.m1, sol.m2, sol.gamma1, sol.gamma2, sol.z.re, sol.z.im
    ));
    Ok(report)
}

pub fn decayed(args: &PtArgs, chi: f64, grid: &GridArgs) -> Result<Report, Failure> {
    let p = args.params()?;
    if !chi.is_finite() {
        return Err(invalid("--chi must be finite"));
    }
    let times = grid.times()?;
    let rows = sweep(&times, |&t| {
        let (paa, pab) = meson::decayed_probabilities(&p, chi, t)?;
        Ok(vec![t.into(), paa.into(), pab.into()])
    })?;
    Ok(Table::with_rows(&["t", "p_aa", "p_ab"], rows).into())
}

pub fn case_from_args(
    case: CaseArg,
    omega: f64,
    gamma: f64,
    gamma2: f64,
    chi: f64,
) -> Result<EPCase, Failure> {
    if ![omega, gamma, gamma2, chi].iter().all(|x| x.is_finite()) {
        return Err(invalid("case parameters must be finite"));
    }
    Ok(match case {
        CaseArg::I => EPCase::CaseI {
            omega0: omega,
            gamma1: gamma,
            gamma2,
        },
        CaseArg::Ii => EPCase::CaseII { omega, gamma, chi },
        CaseArg::Iii => EPCase::CaseIII { omega, gamma },
        CaseArg::Iv => EPCase::CaseIV {
            omega_p: omega,
            gamma_p: gamma,
        },
    })
}

pub fn ep_scan(
    case: EPCase,
    k_min: f64,
    k_max: f64,
    n: usize,
    tol: f64,
) -> Result<Report, Failure> {
    if !(k_min.is_finite() && k_max.is_finite()) || k_min > k_max || n == 0 {
        return Err(invalid(
            "need finite --kappa-min <= --kappa-max and --n >= 1",
        ));
    }
    if !(tol > 0.0) {
        return Err(invalid("--tol must be positive"));
    }
    let grid: Vec<OpenSystemParams> = linspace(k_min, k_max, n)
        .into_iter()
        .map(|k| case.params(k))
        .collect();
    let rows = sweep(&grid, |p| {
        let q = exceptional::discriminant_q(p);
        let (lp, lm) = exceptional::eigenvalues_open(p);
        let status = match exceptional::ep_status(p, tol) {
            EpStatus::Exceptional => "exceptional",
            EpStatus::DiabolicNotExceptional => "diabolic",
            EpStatus::Regular => "regular",
        };
        Ok(vec![
            p.kappa.into(),
            q.re.into(),
            q.im.into(),
            lp.re.into(),
            lp.im.into(),
            lm.re.into(),
            lm.im.into(),
            status.into(),
        ])
    })?;
    let mut report = Report::from(Table::with_rows(
        &[
            "kappa",
            "re_q",
            "im_q",
            "re_lambda_plus",
            "im_lambda_plus",
            "re_lambda_minus",
            "im_lambda_minus",
            "status",
        ],
        rows,
    ));
    report.note = Some(format!(
        "EP at |kappa| = {:.16e}, eigenvalue {:.16e}{:+.16e}i",
        case.critical_kappa(),
        case.ep_eigenvalue().re,
        case.ep_eigenvalue().im
    ));
    Ok(report)
}

pub fn fig1(xis: &[f64], n: usize) -> Result<Report, Failure> {
    if n < 2 {
        return Err(invalid("--n must be at least 2"));
    }
    if let Some(bad) = xis.iter().find(|x| !(x.is_finite() && **x > 0.0)) {
        return Err(invalid(format!("--xi = {bad} must be positive")));
    }
    let last = (n - 1) as f64;
    // s = (2k − (n−1))/(n−1) hits ±1, 0 and ±1/2 exactly for odd n
    let sines: Vec<f64> = (0..n).map(|k| (2.0 * k as f64 - last) / last).collect();
    let points: Vec<(f64, f64)> = xis
        .iter()
        .flat_map(|&xi| sines.iter().map(move |&s| (xi, s)))
        .collect();
    let rows = sweep(&points, |&(xi, s)| {
        let (lp, lm) = exceptional::normalized_eigenvalues(xi, s);
        let p = PTParams::with_zero_phi(xi, s.clamp(-1.0, 1.0).asin(), 1.0)?;
        let phase = hamiltonian::classify(&p, DEFAULT_EP_TOL)?;
        // EP curve through the (sinφ, λ/σ) plane: ξ = 1/|s|, λ/σ = √(1 − s²)/|s|
        let locus = (s != 0.0).then(|| (1.0 - s * s).sqrt() / s.abs());
        Ok(vec![
            xi.into(),
            s.into(),
            lp.re.into(),
            lp.im.into(),
            lm.re.into(),
            lm.im.into(),
            phase.tag().into(),
            locus.into(),
        ])
    })?;
    Ok(Table::with_rows(
        &[
            "xi",
            "sin_varphi",
            "re_lambda_plus",
            "im_lambda_plus",
            "re_lambda_minus",
            "im_lambda_minus",
            "phase",
            "ep_locus",
        ],
        rows,
    )
    .into())
}

/// Broken-phase point with sinφ > 0 and σ/(ρ sinφ) ∈ [0.05, 0.95].
fn sample_broken(rng: &mut impl Rng) -> PTParams {
    let rho = rng.gen_range(0.5..3.0);
    let varphi = rng.gen_range(0.1..(PI - 0.1));
    let ratio = rng.gen_range(0.05..0.95);
    PTParams {
        rho,
        varphi,
        sigma: ratio * rho * f64::sin(varphi),
        phi: 0.0,
    }
}

pub fn oracle_check(seed: u64, n_params: usize, n_times: usize) -> Result<Report, Failure> {
    if n_params == 0 || n_times < 2 {
        return Err(invalid("need --n-params >= 1 and --n-times >= 2"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let points: Vec<PTParams> = (0..n_params).map(|_| sample_broken(&mut rng)).collect();
    let indexed: Vec<(usize, PTParams)> = points.into_iter().enumerate().collect();
    let rows = sweep(&indexed, |&(k, p)| {
        let d = DerivedBrokenParams::from_pt(&p)?;
        let h = hamiltonian::build(&p);
        let (mut abs_dev, mut norm_dev) = (0.0f64, 0.0f64);
        for t in linspace(0.0, 5.0 / d.gamma, n_times) {
            let closed = dynamics::probabilities_pt(&d, t)?.as_array();
            let pu = Matrix2C::parity() * expm_oracle(&h, t)?;
            let oracle = [pu.m00, pu.m10, pu.m01, pu.m11].map(|a| a.norm_sqr());
            for (c, o) in closed.iter().zip(oracle) {
                let dev = (c - o).abs();
                abs_dev = abs_dev.max(dev);
                norm_dev = norm_dev.max(dev / o.abs().max(ORACLE_CHECK_FLOOR));
            }
        }
        Ok(vec![
            (k as f64).into(),
            p.rho.into(),
            p.varphi.into(),
            p.sigma.into(),
            d.gamma.into(),
            d.alpha_prime.into(),
            abs_dev.into(),
            norm_dev.into(),
        ])
    })?;
    let worst = rows
        .iter()
        .filter_map(|r| match r[7] {
            Cell::Num(x) => Some(x),
            _ => None,
        })
        .fold(0.0f64, f64::max);
    let mut report = Report::from(Table::with_rows(
        &[
            "index",
            "rho",
            "varphi",
            "sigma",
            "gamma",
            "alpha_prime",
            "max_abs_dev",
            "max_rel_dev",
        ],
        rows,
    ));
    report.note = Some(format!(
        "max relative deviation {worst:.3e} over {n_params} points x {n_times} times (tolerance {ORACLE_CHECK_TOL:e})"
    ));
    if !(worst < ORACLE_CHECK_TOL) {
        report.failure = Some(Failure::Numerical(format!(
            "oracle deviation {worst:e} exceeds {ORACLE_CHECK_TOL:e}"
        )));
    }
    Ok(report)
}
