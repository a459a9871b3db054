use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use cdpw_core::cdpw::{tau_with, PriorPath, Sign, TauConfig, TauMethod, TauRequest};
use cdpw_core::f22::{
    d_coeff_closed, d_coeffs_recursive, f22_form_a, f22_form_b, f22_form_c, f22_series,
    prop1_residual, F22Args,
};
use cdpw_core::special::SeriesControl;
use cdpw_core::{ComplexScalar as C, EvalResult};

use crate::config::RunConfig;
use crate::error::CliError;
use crate::table::{Cell, Table};

pub const GAMMAS: [f64; 4] = [0.25, 0.5, 1.0, 2.0];
pub const KR_F22: [f64; 8] = [0.1, 0.5, 1.0, 2.0, 5.0, 10.0, 20.0, 30.0];
pub const KR_TAU: [f64; 7] = [0.1, 0.5, 1.0, 2.0, 5.0, 10.0, 20.0];
const F22_MAX_L: usize = 5;
const TAU_MAX_L: usize = 8;
const COEFF_MAX_N: usize = 20;
const COEFF_MAX_L: usize = 6;

const RANDOM_GAMMA: (f64, f64) = (0.1, 3.0);
const RANDOM_KR: (f64, f64) = (0.1, 30.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Check {
    F22,
    Tau,
    Symmetry,
    Prop1,
    Coeffs,
}

impl Check {
    pub const ALL: [Check; 5] = [
        Check::F22,
        Check::Tau,
        Check::Symmetry,
        Check::Prop1,
        Check::Coeffs,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Check::F22 => "f22",
            Check::Tau => "tau",
            Check::Symmetry => "symmetry",
            Check::Prop1 => "prop1",
            Check::Coeffs => "coeffs",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Check::ALL.into_iter().find(|c| c.name() == s.trim())
    }
}

/// Which points each check visits.
#[derive(Debug, Clone, PartialEq)]
pub enum Grid {
    /// The fixed acceptance grid.
    Default,
    /// `n` uniform draws of (γ, kr, l, sign).
    Random { n: usize, seed: u64 },
    /// A single parameter a, on the default l and z lists.
    FixedA(C),
}

impl Grid {
    pub fn describe(&self) -> String {
        match self {
            Grid::Default => format!(
                "default: gamma {GAMMAS:?}, f22 l 0..={F22_MAX_L} kr {KR_F22:?}, tau l 0..={TAU_MAX_L} kr {KR_TAU:?}"
            ),
            Grid::Random { n, seed } => format!(
                "random: {n} points, seed {seed}, gamma in [{}, {}], kr in [{}, {}], l in 0..={TAU_MAX_L}",
                RANDOM_GAMMA.0, RANDOM_GAMMA.1, RANDOM_KR.0, RANDOM_KR.1
            ),
            Grid::FixedA(a) => format!("a = {a}, l 0..={F22_MAX_L}, z = -2i*kr, kr {KR_F22:?}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct TauPoint {
    sign: Sign,
    gamma: f64,
    l: usize,
    kr: f64,
}

impl TauPoint {
    fn a(&self) -> C {
        C::new(1.0, self.sign.s() * self.gamma)
    }

    fn z(&self) -> C {
        C::new(0.0, -2.0 * self.sign.s() * self.kr)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    Exempt,
    Error,
}

impl Status {
    fn name(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Exempt => "exempt",
            Status::Error => "error",
        }
    }
}

/// One checked point.
#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub check: Check,
    pub point: String,
    /// Method name and value, in evaluation order.
    pub values: Vec<(&'static str, C)>,
    pub metric: f64,
    pub threshold: f64,
    pub status: Status,
    pub note: String,
}

#[derive(Debug, Clone)]
pub struct ValidationReport {
    pub grid: String,
    pub rows: Vec<Row>,
}

impl ValidationReport {
    pub fn failures(&self) -> Vec<&Row> {
        self.rows
            .iter()
            .filter(|r| matches!(r.status, Status::Fail | Status::Error))
            .collect()
    }

    pub fn exempt(&self) -> Vec<&Row> {
        self.rows
            .iter()
            .filter(|r| r.status == Status::Exempt)
            .collect()
    }

    pub fn passed(&self) -> bool {
        self.failures().is_empty()
    }

    pub fn table(&self) -> Table {
        let mut t = Table::new(&[
            "check",
            "point",
            "values",
            "metric",
            "threshold",
            "status",
            "note",
        ]);
        for r in &self.rows {
            let values: Vec<String> = r
                .values
                .iter()
                .map(|(m, v)| format!("{m}={:.16e}{:+.16e}i", v.re, v.im))
                .collect();
            t.push(vec![
                r.check.name().into(),
                r.point.clone().into(),
                values.join(" ").into(),
                Cell::Num(r.metric),
                Cell::Num(r.threshold),
                r.status.name().into(),
                r.note.clone().into(),
            ]);
        }
        t
    }
}

/// Largest |x − y| / max(|x|, |y|) over all pairs.
pub fn spread(v: &[C]) -> f64 {
    let mut w: f64 = 0.0;
    for (i, x) in v.iter().enumerate() {
        for y in &v[i + 1..] {
            let m = x.norm().max(y.norm());
            if m > 0.0 {
                w = w.max((x - y).norm() / m);
            }
        }
    }
    w
}

pub fn run(grid: &Grid, only: &[Check], cfg: &RunConfig) -> Result<ValidationReport, CliError> {
    if let Grid::FixedA(a) = grid {
        F22Args::new(*a, 0, C::new(0.0, -2.0))?;
    }
    let tau_pts = tau_points(grid);
    let f22_pts = f22_points(grid);
    let a_list = a_points(grid, &tau_pts);
    let tcfg = cfg.tau_config();
    let mut rows = Vec::new();
    for check in Check::ALL {
        if !only.is_empty() && !only.contains(&check) {
            continue;
        }
        let part: Vec<Row> = match check {
            Check::F22 => f22_pts.par_iter().map(|&p| f22_row(p, cfg)).collect(),
            Check::Prop1 => f22_pts.par_iter().map(|&p| prop1_row(p, cfg)).collect(),
            Check::Tau => tau_pts
                .par_iter()
                .map(|&p| tau_row(p, cfg, &tcfg))
                .collect(),
            Check::Symmetry => tau_pts
                .par_iter()
                .flat_map_iter(|&p| symmetry_rows(p, cfg, &tcfg))
                .collect(),
            Check::Coeffs => a_list
                .par_iter()
                .flat_map_iter(|&(a, l)| coeff_rows(a, l, cfg))
                .collect(),
        };
        rows.extend(part);
    }
    Ok(ValidationReport {
        grid: grid.describe(),
        rows,
    })
}

fn random_points(n: usize, seed: u64) -> Vec<TauPoint> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            let gamma = rng.gen_range(RANDOM_GAMMA.0..=RANDOM_GAMMA.1);
            let kr = rng.gen_range(RANDOM_KR.0..=RANDOM_KR.1);
            let l = rng.gen_range(0..=TAU_MAX_L);
            let sign = if rng.gen_bool(0.5) {
                Sign::Post
            } else {
                Sign::Prior
            };
            TauPoint { sign, gamma, l, kr }
        })
        .collect()
}

fn tau_points(grid: &Grid) -> Vec<TauPoint> {
    match grid {
        Grid::Default => {
            let mut v = Vec::new();
            for gamma in GAMMAS {
                for l in 0..=TAU_MAX_L {
                    for kr in KR_TAU {
                        v.push(TauPoint {
                            sign: Sign::Post,
                            gamma,
                            l,
                            kr,
                        });
                    }
                }
            }
            v
        }
        Grid::Random { n, seed } => random_points(*n, *seed),
        Grid::FixedA(a) if a.re == 1.0 && a.im != 0.0 => {
            let sign = if a.im > 0.0 { Sign::Post } else { Sign::Prior };
            let mut v = Vec::new();
            for l in 0..=TAU_MAX_L {
                for kr in KR_TAU {
                    v.push(TauPoint {
                        sign,
                        gamma: a.im.abs(),
                        l,
                        kr,
                    });
                }
            }
            v
        }
        Grid::FixedA(_) => Vec::new(),
    }
}

fn f22_points(grid: &Grid) -> Vec<(C, usize, C)> {
    match grid {
        Grid::Default => {
            let mut v = Vec::new();
            for g in GAMMAS {
                for s in [1.0, -1.0] {
                    for l in 0..=F22_MAX_L {
                        for kr in KR_F22 {
                            v.push((C::new(1.0, s * g), l, C::new(0.0, -2.0 * s * kr)));
                        }
                    }
                }
            }
            v
        }
        Grid::Random { n, seed } => random_points(*n, *seed)
            .into_iter()
            .map(|p| (p.a(), p.l, p.z()))
            .collect(),
        Grid::FixedA(a) => {
            let mut v = Vec::new();
            for l in 0..=F22_MAX_L {
                for kr in KR_F22 {
                    v.push((*a, l, C::new(0.0, -2.0 * kr)));
                }
            }
            v
        }
    }
}

fn a_points(grid: &Grid, tau: &[TauPoint]) -> Vec<(C, usize)> {
    let a_list: Vec<C> = match grid {
        Grid::Default => GAMMAS
            .iter()
            .flat_map(|&g| [C::new(1.0, g), C::new(1.0, -g)])
            .collect(),
        Grid::Random { .. } => return tau.iter().map(|p| (p.a(), p.l.min(COEFF_MAX_L))).collect(),
        Grid::FixedA(a) => vec![*a],
    };
    a_list
        .into_iter()
        .flat_map(|a| (0..=COEFF_MAX_L).map(move |l| (a, l)))
        .collect()
}

fn describe_f22(a: C, l: usize, z: C) -> String {
    format!("a={a} l={l} z={z}")
}

fn describe_tau(p: TauPoint) -> String {
    format!(
        "sign={} gamma={} l={} kr={}",
        p.sign.name(),
        p.gamma,
        p.l,
        p.kr
    )
}

fn error_row(check: Check, point: String, threshold: f64, e: impl std::fmt::Display) -> Row {
    Row {
        check,
        point,
        values: Vec::new(),
        metric: f64::NAN,
        threshold,
        status: Status::Error,
        note: e.to_string(),
    }
}

/// Spread row; exempt when any input flagged cancellation.
fn spread_row(
    check: Check,
    point: String,
    vals: Vec<(&'static str, EvalResult)>,
    threshold: f64,
) -> Row {
    let metric = spread(&vals.iter().map(|(_, v)| v.value).collect::<Vec<_>>());
    let flagged: Vec<&str> = vals
        .iter()
        .filter(|(_, v)| v.cancellation_warning())
        .map(|(m, _)| *m)
        .collect();
    let (status, note) = if !flagged.is_empty() {
        (
            Status::Exempt,
            format!("cancellation warning from {}", flagged.join(",")),
        )
    } else if metric < threshold {
        (Status::Pass, String::new())
    } else {
        (Status::Fail, "spread above threshold".to_string())
    };
    Row {
        check,
        point,
        values: vals.iter().map(|(m, v)| (*m, v.value)).collect(),
        metric,
        threshold,
        status,
        note,
    }
}

fn f22_row((a, l, z): (C, usize, C), cfg: &RunConfig) -> Row {
    let point = describe_f22(a, l, z);
    let args = match F22Args::new(a, l, z) {
        Ok(v) => v,
        Err(e) => return error_row(Check::F22, point, cfg.rel_tol, e),
    };
    let ctl = SeriesControl::default();
    let mut vals = Vec::new();
    for (name, r) in [
        ("series", f22_series(args, &ctl)),
        ("form_a", f22_form_a(args)),
        ("form_b", f22_form_b(args)),
        ("form_c", f22_form_c(args)),
    ] {
        match r {
            Ok(v) => vals.push((name, v)),
            Err(e) => return error_row(Check::F22, point, cfg.rel_tol, e),
        }
    }
    spread_row(Check::F22, point, vals, cfg.rel_tol)
}

fn prop1_row((a, l, z): (C, usize, C), cfg: &RunConfig) -> Row {
    let point = describe_f22(a, l, z);
    match prop1_residual(a, l, z) {
        Ok(r) => Row {
            check: Check::Prop1,
            point,
            values: Vec::new(),
            metric: r,
            threshold: cfg.prop1_tol,
            status: if r < cfg.prop1_tol {
                Status::Pass
            } else {
                Status::Fail
            },
            note: String::new(),
        },
        Err(e) => error_row(Check::Prop1, point, cfg.prop1_tol, e),
    }
}

fn tau_row(p: TauPoint, cfg: &RunConfig, tcfg: &TauConfig) -> Row {
    let point = describe_tau(p);
    let mut vals = Vec::new();
    for m in TauMethod::EXACT {
        let r = TauRequest::new(p.sign, p.gamma, p.l, p.kr, m).and_then(|q| tau_with(&q, tcfg));
        match r {
            Ok(v) => vals.push((m.name(), v)),
            Err(e) => {
                return error_row(Check::Tau, point, cfg.rel_tol, format!("{}: {e}", m.name()))
            }
        }
    }
    spread_row(Check::Tau, point, vals, cfg.rel_tol)
}

/// τ^(−)_l against (−1)^l conj τ^(+)_l, with the prior form evaluated directly.
fn symmetry_rows(p: TauPoint, cfg: &RunConfig, tcfg: &TauConfig) -> Vec<Row> {
    let direct = TauConfig {
        prior_path: PriorPath::Direct,
        ..*tcfg
    };
    let point = format!("gamma={} l={} kr={}", p.gamma, p.l, p.kr);
    let sign_l = if p.l.is_multiple_of(2) { 1.0 } else { -1.0 };
    TauMethod::EXACT
        .into_iter()
        .map(|m| {
            let eval = |s: Sign| {
                TauRequest::new(s, p.gamma, p.l, p.kr, m).and_then(|q| tau_with(&q, &direct))
            };
            let point = format!("{point} method={}", m.name());
            match (eval(Sign::Post), eval(Sign::Prior)) {
                (Ok(post), Ok(prior)) => {
                    let mirrored = post.value.conj() * sign_l;
                    let metric = (prior.value - mirrored).norm() / mirrored.norm();
                    let exempt = post.cancellation_warning() || prior.cancellation_warning();
                    let status = if exempt {
                        Status::Exempt
                    } else if metric < cfg.symmetry_tol {
                        Status::Pass
                    } else {
                        Status::Fail
                    };
                    Row {
                        check: Check::Symmetry,
                        point,
                        values: vec![("post", post.value), ("prior", prior.value)],
                        metric,
                        threshold: cfg.symmetry_tol,
                        status,
                        note: if exempt {
                            "cancellation warning".into()
                        } else {
                            String::new()
                        },
                    }
                }
                (Err(e), _) | (_, Err(e)) => error_row(Check::Symmetry, point, cfg.symmetry_tol, e),
            }
        })
        .collect()
}

fn coeff_rows(a: C, l: usize, cfg: &RunConfig) -> Vec<Row> {
    let rec = d_coeffs_recursive(a, l, COEFF_MAX_N);
    (0..=COEFF_MAX_N)
        .map(|n| {
            let point = format!("a={a} l={l} n={n}");
            match d_coeff_closed(a, l, n) {
                Ok(closed) => {
                    let r = rec.d[n];
                    let metric = if closed.norm() > 0.0 {
                        (r - closed).norm() / closed.norm()
                    } else {
                        r.norm()
                    };
                    Row {
                        check: Check::Coeffs,
                        point,
                        values: vec![("recursive", r), ("closed", closed)],
                        metric,
                        threshold: cfg.coeff_tol,
                        status: if metric < cfg.coeff_tol {
                            Status::Pass
                        } else {
                            Status::Fail
                        },
                        note: String::new(),
                    }
                }
                Err(e) => error_row(Check::Coeffs, point, cfg.coeff_tol, e),
            }
        })
        .collect()
}
