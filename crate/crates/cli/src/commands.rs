use rayon::prelude::*;

use cdpw_core::cdpw::{
    asy3d_functional, cdpw_direct, cdpw_pw_sum_with, tau_asym, tau_with, AngularPoint,
    LegendreTestFunction, Sign, TauMethod, TauRequest, MAX_PW_L,
};
use cdpw_core::f22::{d_coeff_closed, d_coeffs_recursive, Truncation};
use cdpw_core::{ComplexScalar as C, Error};

use crate::config::RunConfig;
use crate::error::CliError;
use crate::table::{Cell, Table};

pub const MAX_COEFF_N: usize = 64;

/// A table plus lines for stderr.
#[derive(Debug, Default)]
pub struct Output {
    pub table: Table,
    pub notes: Vec<String>,
}

fn re_im(v: C) -> [Cell; 2] {
    [Cell::Num(v.re), Cell::Num(v.im)]
}

fn check_gamma(gamma: f64) -> Result<(), CliError> {
    if gamma.is_finite() {
        Ok(())
    } else {
        Err(CliError::Args(format!("gamma must be finite, got {gamma}")))
    }
}

pub fn eval(
    sign: Sign,
    gamma: f64,
    l: usize,
    kr: f64,
    method: TauMethod,
    n: Option<usize>,
    cfg: &RunConfig,
) -> Result<Output, CliError> {
    let req = TauRequest::new(sign, gamma, l, kr, method)?;
    let tcfg = cfg.tau_config();
    let r = match (method, n) {
        (TauMethod::Asymptotic, Some(n)) => tau_asym(&req, Truncation::Fixed(n), &tcfg)?,
        (_, Some(_)) => {
            return Err(CliError::Args(
                "--n applies to --method asymptotic only".into(),
            ))
        }
        _ => tau_with(&req, &tcfg)?,
    };
    let mut t = Table::new(&[
        "sign",
        "gamma",
        "l",
        "kr",
        "method",
        "value_re",
        "value_im",
        "terms_used",
        "err_estimate",
    ]);
    let [re, im] = re_im(r.value);
    t.push(vec![
        sign.name().into(),
        gamma.into(),
        l.into(),
        kr.into(),
        r.method.name().into(),
        re,
        im,
        r.terms_used.into(),
        r.err_estimate.into(),
    ]);
    Ok(Output {
        table: t,
        notes: Vec::new(),
    })
}

pub fn coeffs(sign: Sign, gamma: f64, l: usize, n_max: usize) -> Result<Output, CliError> {
    check_gamma(gamma)?;
    if n_max > MAX_COEFF_N {
        return Err(CliError::Args(format!(
            "N = {n_max} exceeds the table limit {MAX_COEFF_N}"
        )));
    }
    let a = C::new(1.0, sign.s() * gamma);
    let rec = d_coeffs_recursive(a, l, n_max);
    let mut t = Table::new(&[
        "n",
        "recursive_re",
        "recursive_im",
        "closed_re",
        "closed_im",
        "rel_diff",
    ]);
    let mut notes = Vec::new();
    for (n, &r) in rec.d.iter().enumerate() {
        let [rr, ri] = re_im(r);
        let (cr, ci, diff) = match d_coeff_closed(a, l, n) {
            Ok(c) => {
                let diff = if c.norm() > 0.0 {
                    (r - c).norm() / c.norm()
                } else {
                    r.norm()
                };
                (Cell::Num(c.re), Cell::Num(c.im), Cell::Num(diff))
            }
            Err(e) => {
                notes.push(format!("n = {n}: closed form unavailable: {e}"));
                (Cell::Missing, Cell::Missing, Cell::Missing)
            }
        };
        t.push(vec![n.into(), rr, ri, cr, ci, diff]);
    }
    Ok(Output { table: t, notes })
}

pub fn asymp_compare(
    sign: Sign,
    gamma: f64,
    l: usize,
    krs: &[f64],
    n: Option<usize>,
    cfg: &RunConfig,
) -> Result<Output, CliError> {
    let tcfg = cfg.tau_config();
    for &kr in krs {
        TauRequest::new(sign, gamma, l, kr, TauMethod::Asymptotic)?;
        if kr < tcfg.asym_min_kr {
            return Err(CliError::Args(format!(
                "kr = {kr} is below the asymptotic minimum {}",
                tcfg.asym_min_kr
            )));
        }
    }
    let trunc = n.map_or(Truncation::Auto, Truncation::Fixed);
    type Row = Result<(Vec<Cell>, Option<String>), CliError>;
    let rows: Vec<Row> = krs
        .par_iter()
        .map(|&kr| {
            let exact = tau_with(
                &TauRequest::new(sign, gamma, l, kr, TauMethod::KappaSplit)?,
                &tcfg,
            )?;
            let req = TauRequest::new(sign, gamma, l, kr, TauMethod::Asymptotic)?;
            let [er, ei] = re_im(exact.value);
            match tau_asym(&req, trunc, &tcfg) {
                Ok(asym) => {
                    let diff = (asym.value - exact.value).norm();
                    let order = n.unwrap_or(asym.terms_used.saturating_sub(1));
                    let [ar, ai] = re_im(asym.value);
                    Ok((
                        vec![
                            kr.into(),
                            er,
                            ei,
                            ar,
                            ai,
                            diff.into(),
                            asym.err_estimate.into(),
                            order.into(),
                            (diff * kr.powi(order as i32 + 1)).into(),
                            "".into(),
                        ],
                        None,
                    ))
                }
                Err(Error::DivergenceOnset {
                    requested, optimal, ..
                }) => {
                    let msg = format!(
                        "N = {requested} is beyond the divergence onset at kr = {kr} (optimal N = {optimal})"
                    );
                    Ok((
                        vec![
                            kr.into(),
                            er,
                            ei,
                            Cell::Missing,
                            Cell::Missing,
                            Cell::Missing,
                            Cell::Missing,
                            requested.into(),
                            Cell::Missing,
                            "beyond_divergence_onset".into(),
                        ],
                        Some(msg),
                    ))
                }
                Err(e) => Err(e.into()),
            }
        })
        .collect();
    let mut t = Table::new(&[
        "kr",
        "exact_re",
        "exact_im",
        "asym_re",
        "asym_im",
        "abs_diff",
        "err_estimate",
        "n",
        "decay",
        "flag",
    ]);
    let mut notes = Vec::new();
    for r in rows {
        let (row, note) = r?;
        t.push(row);
        if let Some(m) = note {
            notes.push(format!("warning: {m}"));
        }
    }
    Ok(Output { table: t, notes })
}

pub fn reconstruct(
    sign: Sign,
    gamma: f64,
    kr: f64,
    cos: &[f64],
    l_max: usize,
    cfg: &RunConfig,
) -> Result<Output, CliError> {
    if l_max > MAX_PW_L {
        return Err(CliError::Args(format!("lmax = {l_max} exceeds {MAX_PW_L}")));
    }
    let points = cos
        .iter()
        .map(|&c| AngularPoint::new(c))
        .collect::<Result<Vec<_>, _>>()?;
    for &pt in &points {
        cdpw_direct(sign, gamma, kr, pt)?;
    }
    let tcfg = cfg.tau_config();
    let rows: Vec<Result<(f64, C, C), Error>> = points
        .par_iter()
        .map(|&pt| {
            let d = cdpw_direct(sign, gamma, kr, pt)?;
            let s = cdpw_pw_sum_with(sign, gamma, kr, pt, l_max, &tcfg)?;
            Ok((pt.cos_theta(), d, s))
        })
        .collect();
    let mut t = Table::new(&[
        "cos_theta",
        "direct_re",
        "direct_im",
        "sum_re",
        "sum_im",
        "abs_diff",
    ]);
    let mut worst: f64 = 0.0;
    for r in rows {
        let (c, d, s) = r?;
        let diff = (d - s).norm();
        worst = worst.max(diff);
        let [dr, di] = re_im(d);
        let [sr, si] = re_im(s);
        t.push(vec![c.into(), dr, di, sr, si, diff.into()]);
    }
    Ok(Output {
        table: t,
        notes: vec![format!("max |diff| = {worst:.3e} (lmax = {l_max})")],
    })
}

pub fn asy3d(sign: Sign, gamma: f64, f: &[f64], krs: &[f64]) -> Result<Output, CliError> {
    check_gamma(gamma)?;
    let tf = LegendreTestFunction::from_real(f)?;
    for &kr in krs {
        TauRequest::new(sign, gamma, 0, kr, TauMethod::Auto)?;
    }
    let mut gammas = vec![gamma];
    if gamma != 0.0 {
        gammas.push(0.0);
    }
    let jobs: Vec<(f64, f64)> = gammas
        .iter()
        .flat_map(|&g| krs.iter().map(move |&kr| (g, kr)))
        .collect();
    let rows: Vec<Result<(C, C), Error>> = jobs
        .par_iter()
        .map(|&(g, kr)| asy3d_functional(sign, g, kr, &tf))
        .collect();
    let mut t = Table::new(&[
        "gamma",
        "kr",
        "exact_re",
        "exact_im",
        "leading_re",
        "leading_im",
        "scaled_diff",
    ]);
    let mut notes = Vec::new();
    let mut scaled = Vec::new();
    for (&(g, kr), r) in jobs.iter().zip(rows) {
        let (exact, leading) = r?;
        let s = kr * (exact - leading).norm();
        scaled.push((g, s));
        let [er, ei] = re_im(exact);
        let [lr, li] = re_im(leading);
        t.push(vec![g.into(), kr.into(), er, ei, lr, li, s.into()]);
    }
    for &g in &gammas {
        let s: Vec<f64> = scaled
            .iter()
            .filter(|(x, _)| *x == g)
            .map(|(_, v)| *v)
            .collect();
        let decreasing = s.windows(2).all(|w| w[1] < w[0]);
        notes.push(format!(
            "gamma = {g}: kr*|exact - leading| {} over the kr list",
            if decreasing {
                "strictly decreasing"
            } else {
                "not strictly decreasing"
            }
        ));
    }
    Ok(Output { table: t, notes })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn num(c: &Cell) -> f64 {
        match c {
            Cell::Num(x) => *x,
            other => panic!("not a number: {other:?}"),
        }
    }

    #[test]
    fn eval_chargeless_l1() {
        let o = eval(
            Sign::Post,
            0.0,
            1,
            1.0,
            TauMethod::Auto,
            None,
            &RunConfig::default(),
        )
        .unwrap();
        let row = &o.table.rows[0];
        assert!(num(&row[5]).abs() < 1e-15);
        assert!((num(&row[6]) - 0.30116867893975674).abs() < 1e-15);
    }

    #[test]
    fn eval_rejects_zero_kr() {
        let e = eval(
            Sign::Post,
            1.0,
            0,
            0.0,
            TauMethod::Auto,
            None,
            &RunConfig::default(),
        )
        .unwrap_err();
        assert_eq!(e.exit_code(), 2);
        assert!(e.to_string().contains("kr > 0"));
    }

    #[test]
    fn coeffs_first_rows() {
        let o = coeffs(Sign::Post, 1.0, 1, 3).unwrap();
        assert_eq!(o.table.rows.len(), 4);
        let r0 = &o.table.rows[0];
        assert_eq!((num(&r0[1]), num(&r0[3]), num(&r0[5])), (1.0, 1.0, 0.0));
        let r1 = &o.table.rows[1];
        for (re, im) in [(1, 2), (3, 4)] {
            assert!((num(&r1[re]) + 1.0).abs() < 1e-15);
            assert!((num(&r1[im]) + 0.5).abs() < 1e-15);
        }
        assert_eq!(coeffs(Sign::Post, 1.0, 1, 65).unwrap_err().exit_code(), 2);
    }

    #[test]
    fn asymp_compare_flags_divergent_order() {
        let o = asymp_compare(
            Sign::Post,
            1.0,
            2,
            &[20.0],
            Some(500),
            &RunConfig::default(),
        )
        .unwrap();
        assert_eq!(o.table.rows[0][9], Cell::from("beyond_divergence_onset"));
        assert!(o.notes[0].starts_with("warning"));
    }

    #[test]
    fn reconstruct_rejects_forward_post() {
        let e =
            reconstruct(Sign::Post, 1.0, 1.0, &[0.0, 1.0], 10, &RunConfig::default()).unwrap_err();
        assert_eq!(e.exit_code(), 2);
        assert!(e.to_string().contains("excluded direction"));
    }

    #[test]
    fn asy3d_appends_chargeless_rows() {
        let o = asy3d(Sign::Post, 1.0, &[1.0, 1.0], &[50.0, 100.0]).unwrap();
        let gammas: Vec<f64> = o.table.rows.iter().map(|r| num(&r[0])).collect();
        assert_eq!(gammas, [1.0, 1.0, 0.0, 0.0]);
        assert_eq!(o.notes.len(), 2);
    }
}
