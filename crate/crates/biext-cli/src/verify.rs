//! Invariant suites behind `biext verify`: compact, deterministic runs of
//! the library's structural identities with measured residuals.

use anyhow::anyhow;
use num_complex::Complex64;
use std::collections::BTreeMap;
use std::f64::consts::PI;

use biext::chen::{
    double_integral, is_relatively_closed, line_integral,
    IteratedIntegralExpr, Path,
};
use biext::greens::{green_oracle, solve_green, xi_phi_from_f};
use biext::hodge::{
    biextension_period, biextension_period_perturbed, split_biextension,
    standard_hodge_structure, twist, PeriodValue,
};
use biext::period::{graded_fiber, nondegeneracy_rank, psi, psi_p, PeriodEvaluator};
use biext::pushforward::{gr2_vanishing_check, pushforward_period, MonodromyHodgeMap};
use biext::qi::Qi;
use biext::series::{combine, extract_dependence, restriction_vanishing, DependenceOutcome, TruncatedSeries};
use biext::surface::{k_space_basis, third_kind_basis, OneForm, Puncture, Surface};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

struct Check {
    name: String,
    pass: bool,
    detail: String,
}

fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn check(name: &str, pass: bool, detail: String) -> Check {
    Check { name: name.to_string(), pass, detail }
}

fn sphere_inf_zero() -> Surface {
    Surface::sphere(vec![Puncture::Infinity, Puncture::Finite(c64(0.0, 0.0))]).unwrap()
}

fn torus_i() -> Surface {
    Surface::torus(c64(0.0, 1.0), vec![c64(0.0, 0.0), c64(0.5, 0.0)]).unwrap()
}

fn suite_shuffle(tol: f64) -> anyhow::Result<Vec<Check>> {
    let s = torus_i();
    let forms = vec![
        OneForm::constant_dz(&s, c64(1.0, 0.0)),
        OneForm::constant_dzbar(&s, c64(0.7, 0.0)),
        third_kind_basis(&s)?[0].form.clone(),
    ];
    let paths = [
        vec![c64(0.1, 0.3), c64(0.6, 0.42), c64(0.4, 0.7)],
        vec![c64(0.85, 0.3), c64(0.6, 0.62)],
        vec![c64(0.15, 0.55), c64(0.45, 0.3), c64(0.8, 0.66), c64(0.3, 0.75)],
    ];
    let mut worst = 0.0f64;
    for verts in &paths {
        let path = Path::new(s.clone(), verts.clone())?;
        for phi in &forms {
            for psi_form in &forms {
                let ab = double_integral(phi, psi_form, &path, 1e-12)?;
                let ba = double_integral(psi_form, phi, &path, 1e-12)?;
                let la = line_integral(phi, &path)?;
                let lb = line_integral(psi_form, &path)?;
                worst = worst.max((ab + ba - la * lb).norm());
            }
        }
    }
    Ok(vec![check(
        "shuffle.identity",
        worst < tol,
        format!("max residual {worst:.3e} over 27 form pairs"),
    )])
}

fn suite_composition(tol: f64) -> anyhow::Result<Vec<Check>> {
    let s = sphere_inf_zero();
    let phi = OneForm::SphereRational {
        poly: vec![],
        poles: vec![(c64(0.0, 0.0), c64(1.0, 0.0))],
        dzbar: c64(0.0, 0.0),
    };
    let psi_form = OneForm::SphereRational {
        poly: vec![c64(1.0, 0.0)],
        poles: vec![],
        dzbar: c64(0.2, 0.0),
    };
    let whole = Path::new(
        s.clone(),
        vec![c64(1.0, 0.2), c64(1.8, 1.0), c64(0.7, 1.9)],
    )?;
    let alpha = Path::new(s.clone(), vec![c64(1.0, 0.2), c64(1.8, 1.0)])?;
    let beta = Path::new(s.clone(), vec![c64(1.8, 1.0), c64(0.7, 1.9)])?;
    let d_whole = double_integral(&phi, &psi_form, &whole, 1e-12)?;
    let composed = double_integral(&phi, &psi_form, &alpha, 1e-12)?
        + double_integral(&phi, &psi_form, &beta, 1e-12)?
        + line_integral(&phi, &alpha)? * line_integral(&psi_form, &beta)?;
    let res = (d_whole - composed).norm();
    Ok(vec![check(
        "composition.chen",
        res < tol,
        format!("split-vs-whole residual {res:.3e}"),
    )])
}

fn suite_third_kind() -> anyhow::Result<Vec<Check>> {
    let mut out = Vec::new();
    let s = sphere_inf_zero();
    let basis = third_kind_basis(&s)?;
    let r = basis[0].certify(1e-9);
    out.push(check(
        "third-kind.sphere",
        r.is_ok(),
        "residues ∓(2πi)⁻¹ and real loop periods".into(),
    ));
    for tau in [c64(0.0, 1.0), c64(0.3, 1.1)] {
        let t = Surface::torus(tau, vec![c64(0.0, 0.0), c64(0.5, 0.0), c64(0.25, 0.55)])?;
        let mut ok = true;
        let mut max_im = 0.0f64;
        for tk in third_kind_basis(&t)? {
            ok &= tk.certify(1e-9).is_ok();
            for p in &tk.loop_periods {
                max_im = max_im.max(p.im.abs());
            }
        }
        out.push(check(
            &format!("third-kind.torus[{tau}]"),
            ok,
            format!("max |Im period| {max_im:.3e}"),
        ));
    }
    Ok(out)
}

fn suite_greens(fd_tol: f64) -> anyhow::Result<Vec<Check>> {
    let tau = c64(0.0, 1.0);
    let s = torus_i();
    let kb = k_space_basis(&s);
    let x0 = c64(0.0, 0.0);
    let p = 0.5 * (c64(1.0, 0.0) + tau);
    let g = solve_green(&s, &kb.elements[0], x0, p)?;
    let n = 128;
    let o = green_oracle(&s, &kb.elements[0], x0, p, n)?;
    let lat = s.lattice().unwrap();
    let mask = (13.0 * o.sigma).max(0.1);
    let mut sup = 0.0f64;
    for j in 0..n {
        for i in 0..n {
            let z = o.node(tau, i, j);
            if lat.dist(z, x0) < mask {
                continue;
            }
            sup = sup.max((o.value_at(i, j) - g.eval(z)?).abs());
        }
    }
    let h = 1e-4;
    let z = c64(0.31, 0.42);
    let lap = (g.eval(z + h)? + g.eval(z - h)? + g.eval(z + c64(0.0, h))?
        + g.eval(z - c64(0.0, h))?
        - 4.0 * g.eval(z)?)
        / (h * h);
    let fd_res = (lap / 4.0 - g.s_coef).abs();
    Ok(vec![
        check("greens.oracle", sup < 1e-6, format!("sup distance {sup:.3e} at 128²")),
        check(
            "greens.current-equation",
            fd_res < fd_tol,
            format!("finite-difference residual {fd_res:.3e}"),
        ),
        check(
            "greens.normalisation",
            g.eval(p)?.abs() == 0.0,
            "f_Ω(p) = 0".into(),
        ),
    ])
}

fn suite_relations(fd_tol: f64) -> anyhow::Result<Vec<Check>> {
    let tau = c64(0.3, 1.1);
    let s = Surface::torus(tau, vec![c64(0.0, 0.0), c64(0.5, 0.0)])?;
    let kb = k_space_basis(&s);
    let g = solve_green(&s, &kb.elements[0], c64(0.0, 0.0), 0.5 * (c64(1.0, 0.0) + tau))?;
    let (xi, phi) = xi_phi_from_f(&g);
    let lat = s.lattice().unwrap();
    let h = 1e-4;
    let mut worst = 0.0f64;
    for jj in 0..4 {
        for ii in 0..4 {
            let z = c64((ii as f64 + 0.5) / 4.0, 0.0) + tau * ((jj as f64 + 0.5) / 4.0);
            if lat.dist(z, c64(0.0, 0.0)) < 0.15 {
                continue;
            }
            let fx = (g.eval(z + h)? - g.eval(z - h)?) / (2.0 * h);
            let fy = (g.eval(z + c64(0.0, h))? - g.eval(z - c64(0.0, h))?) / (2.0 * h);
            let fz_fd = c64(fx, -fy) * 0.5;
            let (xa, _) = xi.eval(z)?;
            let (pa, _) = phi.eval(z)?;
            worst = worst.max((2.0 * xa - pa - I * fz_fd).norm());
        }
    }
    // closedness of the combined Green expression
    let dz = OneForm::constant_dz(&s, c64(1.0, 0.0));
    let dzbar = OneForm::constant_dzbar(&s, c64(1.0, 0.0));
    let mut expr = IteratedIntegralExpr::new();
    expr.length1.push((c64(2.0, 0.0), xi));
    expr.length2.push((I, dz.clone(), dzbar.clone()));
    expr.length2.push((-I, dzbar, dz));
    let rep = is_relatively_closed(&expr, &s, 1e-9)?;
    Ok(vec![
        check(
            "relations.xi-phi-df",
            worst < fd_tol,
            format!("max |2ξ−φ−i df| = {worst:.3e}"),
        ),
        check(
            "relations.integrability",
            rep.closed,
            format!("dξ + wedge residual {:.3e}", rep.max_residual),
        ),
    ])
}

fn suite_period(tol: f64) -> anyhow::Result<Vec<Check>> {
    let mut out = Vec::new();
    // diagonal vanishing on both backends
    let mut diag_ok = true;
    for (s, p) in [
        (sphere_inf_zero(), c64(1.3, 0.4)),
        (torus_i(), c64(0.35, 0.62)),
    ] {
        let v = psi_p(&s, p, p)?;
        diag_ok &= v.iter().all(|x| *x == 0.0);
    }
    out.push(check("period.diagonal", diag_ok, "Ψ_p(p) = 0 exactly".into()));

    // closed-form vs quadrature
    let s = torus_i();
    let eval = PeriodEvaluator::new(&s, c64(0.21, 0.33))?;
    let mut worst = 0.0f64;
    for q in [c64(0.71, 0.64), c64(0.4, 0.8)] {
        let a = eval.psi(q)?;
        let b = eval.psi_closed(q)?;
        for (x, y) in a.iter().zip(&b) {
            worst = worst.max((x - y).abs());
        }
    }
    out.push(check(
        "period.closed-vs-quadrature",
        worst < tol,
        format!("max coordinate gap {worst:.3e}"),
    ));

    // the classical log value
    let sp = sphere_inf_zero();
    let v = psi_p(&sp, c64(1.0, 0.0), c64(2.0, 0.0))?;
    let gap = (v[0] + (2.0f64).ln() / (2.0 * PI)).abs();
    out.push(check(
        "period.log-value",
        gap < tol,
        format!("|h₁(2) + log2/2π| = {gap:.3e}"),
    ));
    Ok(out)
}

fn suite_antisymmetry(tol: f64) -> anyhow::Result<Vec<Check>> {
    let pairs = [
        (c64(1.3, 0.2), c64(-0.7, 1.1)),
        (c64(2.2, -0.4), c64(0.6, -1.3)),
    ];
    let mut worst = 0.0f64;
    let s = sphere_inf_zero();
    for (p, q) in pairs {
        let a = psi(&s, p, q)?;
        let b = psi(&s, q, p)?;
        for (x, y) in a.iter().zip(&b) {
            worst = worst.max((x + y).abs());
        }
    }
    let t = torus_i();
    for (p, q) in [(c64(0.2, 0.3), c64(0.7, 0.8)), (c64(0.8, 0.25), c64(0.3, 0.6))] {
        let a = psi(&t, p, q)?;
        let b = psi(&t, q, p)?;
        for (x, y) in a.iter().zip(&b) {
            worst = worst.max((x + y).abs());
        }
    }
    Ok(vec![check(
        "antisymmetry.psi",
        worst < 10.0 * tol,
        format!("max |Ψ(p,q)+Ψ(q,p)| = {worst:.3e}"),
    )])
}

fn suite_rank() -> anyhow::Result<Vec<Check>> {
    let t = torus_i();
    let samples: Vec<Complex64> = (0..30)
        .map(|k| {
            let a = (k as f64 * 0.37 + 0.05).fract();
            let b = (k as f64 * 0.61 + 0.17).fract();
            c64(a, b)
        })
        .filter(|z| t.puncture_distance(*z) > 0.1)
        .collect();
    let rank_t = nondegeneracy_rank(&t, c64(0.21, 0.43), &samples)?;
    let dim_t = graded_fiber(&t).dimension();
    let s = Surface::sphere(vec![
        Puncture::Infinity,
        Puncture::Finite(c64(0.0, 0.0)),
        Puncture::Finite(c64(1.0, 0.0)),
    ])?;
    let samples: Vec<Complex64> = (0..30)
        .map(|k| {
            let th = 2.0 * PI * (k as f64 + 0.3) / 17.0;
            c64(0.5, 0.1) + (1.4 + 0.1 * (k % 5) as f64) * c64(th.cos(), th.sin())
        })
        .filter(|z| s.puncture_distance(*z) > 0.2)
        .collect();
    let rank_s = nondegeneracy_rank(&s, c64(2.0, 0.0), &samples)?;
    let dim_s = graded_fiber(&s).dimension();
    Ok(vec![
        check(
            "rank.torus",
            rank_t == dim_t,
            format!("rank {rank_t} of {dim_t}"),
        ),
        check(
            "rank.sphere",
            rank_s == dim_s,
            format!("rank {rank_s} of {dim_s}"),
        ),
    ])
}

fn suite_series() -> anyhow::Result<Vec<Check>> {
    let pad = |coeffs: Vec<Complex64>, order: usize| {
        let mut v = coeffs;
        v.resize(order + 1, c64(0.0, 0.0));
        TruncatedSeries::new(v)
    };
    let r = 1.0 / 2.0f64.sqrt();
    let fs = vec![
        pad(vec![c64(r, 0.0), c64(r, 0.0)], 4),
        pad(vec![c64(r, 0.0), c64(-r, 0.0)], 4),
    ];
    let hs = vec![pad(vec![c64(1.0, 0.0)], 4), pad(vec![c64(0.0, 0.0), c64(1.0, 0.0)], 4)];
    let dep_ok = match extract_dependence(&fs, &hs)? {
        DependenceOutcome::Dependence(v) => {
            let z = combine(&v, &fs, &hs);
            z.coeffs.iter().map(|x| x.norm()).fold(0.0f64, f64::max) < 1e-10
        }
        _ => false,
    };
    let t = Surface::torus(c64(0.0, 1.0), vec![c64(0.0, 0.0)])?;
    let samples = vec![c64(0.31, 0.17), c64(0.72, 0.58)];
    let zero_ok = restriction_vanishing(&[vec![c64(0.0, 0.0)]], &samples, &t)?.vanishes;
    let nonzero_ok = !restriction_vanishing(&[vec![I]], &samples, &t)?.vanishes;
    Ok(vec![
        check("series.dependence", dep_ok, "√2 example annihilates".into()),
        check(
            "series.restriction",
            zero_ok && nonzero_ok,
            "vanishing ⇔ h = 0 on the torus class".into(),
        ),
    ])
}

fn suite_hodge() -> anyhow::Result<Vec<Check>> {
    let mut dims = BTreeMap::new();
    dims.insert(0i64, 1usize);
    dims.insert(-1i64, 1usize);
    let b = standard_hodge_structure(-1, &dims)?;
    let mut dims = BTreeMap::new();
    dims.insert(-1i64, 1usize);
    let c = standard_hodge_structure(-2, &dims)?;
    let v0 = split_biextension(&b, &c)?;
    let zero_ok = biextension_period(&v0)?.is_zero();
    let labels = v0.period_labels()?;
    let t = PeriodValue::from_f64(labels.clone(), &[0.8125]).unwrap();
    let v1 = twist(&v0, &t)?;
    let round_ok = biextension_period(&v1)? == t;
    let perturbed = biextension_period_perturbed(&v1, &[Qi::from_ratio(2, 3)], &[Qi::zero()])?;
    let lift_ok = perturbed == biextension_period(&v1)?;
    Ok(vec![
        check("hodge.split-period", zero_ok, "split biextension has period 0".into()),
        check("hodge.twist-roundtrip", round_ok, "period(twist(V₀,t)) = t exactly".into()),
        check("hodge.lift-independence", lift_ok, "perturbed lifts agree".into()),
    ])
}

fn suite_pushforward(tol: f64) -> anyhow::Result<Vec<Check>> {
    let s = torus_i();
    let fiber = graded_fiber(&s);
    let phi = MonodromyHodgeMap::new(
        fiber,
        vec!["c0".into(), "c1".into()],
        vec![vec![0.7, -1.3], vec![0.2, 0.9]],
    )?;
    let base = PeriodValue::from_f64(vec!["c0".into(), "c1".into()], &[0.11, -0.37]).unwrap();
    let p = c64(0.2, 0.3);
    let p2 = c64(0.6, 0.8);
    let q = c64(0.8, 0.35);
    let direct = pushforward_period(&phi, &base, &s, p, q)?;
    let base2 = pushforward_period(&phi, &base, &s, p, p2)?;
    let via = pushforward_period(&phi, &base2, &s, p2, q)?;
    let defect = direct
        .to_f64()
        .iter()
        .zip(via.to_f64())
        .map(|(a, b)| (a - b).abs())
        .fold(0.0f64, f64::max);
    let gr2_ok = gr2_vanishing_check(&Surface::sphere(vec![Puncture::Infinity])?)
        && !gr2_vanishing_check(&sphere_inf_zero())
        && !gr2_vanishing_check(&torus_i())
        && gr2_vanishing_check(&Surface::torus(c64(0.0, 1.0), vec![])?);
    Ok(vec![
        check(
            "pushforward.cocycle",
            defect < 10.0 * tol,
            format!("two-evaluation defect {defect:.3e}"),
        ),
        check("pushforward.gr2-cases", gr2_ok, "ℙ¹/ℂ/elliptic classification".into()),
    ])
}

/// Known suite names in execution order.
const SUITES: &[&str] = &[
    "shuffle",
    "composition",
    "third-kind",
    "greens",
    "relations",
    "period",
    "antisymmetry",
    "rank",
    "series",
    "hodge",
    "pushforward",
];

pub fn run(suite: Option<&str>, tol: f64, fd_tol: f64) -> anyhow::Result<bool> {
    let selected: Vec<&str> = match suite {
        None | Some("all") => SUITES.to_vec(),
        Some(name) => {
            if !SUITES.contains(&name) {
                return Err(anyhow!(
                    "unknown suite {name:?}; available: {}",
                    SUITES.join(", ")
                ));
            }
            vec![name]
        }
    };
    let mut all_ok = true;
    for name in selected {
        let checks = match name {
            "shuffle" => suite_shuffle(tol)?,
            "composition" => suite_composition(tol)?,
            "third-kind" => suite_third_kind()?,
            "greens" => suite_greens(fd_tol)?,
            "relations" => suite_relations(fd_tol)?,
            "period" => suite_period(tol)?,
            "antisymmetry" => suite_antisymmetry(tol)?,
            "rank" => suite_rank()?,
            "series" => suite_series()?,
            "hodge" => suite_hodge()?,
            "pushforward" => suite_pushforward(tol)?,
            _ => unreachable!(),
        };
        for c in checks {
            println!("{} {} ({})", if c.pass { "PASS" } else { "FAIL" }, c.name, c.detail);
            all_ok &= c.pass;
        }
    }
    Ok(all_ok)
}
