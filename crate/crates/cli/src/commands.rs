use std::time::Instant;

use exkn::conjecture::{hull_membership, v_nm, verify_extremes, ExtremeVerdict, MembershipEvidence};
use exkn::eppf::{sharp_bound_kn, sn_table};
use exkn::exact_geom::{format_rational, Rational};
use exkn::k3_region::{classify, Constraint, K3Point};
use exkn::mc::{sample_crp, sample_dirichlet_uniform, sample_paintbox, SampleReport};
use exkn::paintbox::{law_of_kn, LawOfK, RankedDiscreteDistribution};
use exkn::two_param::{dual_params, h, inverse_map, k3_law_at, ParamsAT, Regime};

use crate::args::{Model, ParamArgs, PointArgs, SampleArgs};
use crate::error::{CliError, CliResult};
use crate::output::{exact_and_float, Cell, Kind, OutputRecord};

fn join_rationals(xs: &[Rational]) -> String {
    xs.iter().map(format_rational).collect::<Vec<_>>().join(",")
}

fn law_table(command: &str, law: &LawOfK) -> OutputRecord {
    let mut rec = OutputRecord::new(command, &[("k", Kind::Integer), ("p", Kind::Rational), ("p_f64", Kind::Float)]);
    for (i, p) in law.probs().iter().enumerate() {
        let [a, b] = exact_and_float(p);
        rec.push(vec![Cell::from(i + 1), a, b]);
    }
    rec
}

pub fn vnm(n: usize, m: exkn::paintbox::Support) -> CliResult<OutputRecord> {
    let v = v_nm(n, m)?;
    let mut rec = law_table("vnm", &v.law);
    rec.param("n", n).param("m", m);
    Ok(rec)
}

pub fn law(atoms: &[Rational], n: usize) -> CliResult<OutputRecord> {
    let p = RankedDiscreteDistribution::new(atoms.to_vec())?;
    let law = law_of_kn(&p, n)?;
    let mut rec = law_table("law", &law);
    rec.param("atoms", join_rationals(p.atoms()))
        .param("dust", format_rational(p.dust()))
        .param("n", n);
    Ok(rec)
}

fn constraint_text(c: &Constraint) -> String {
    match c {
        Constraint::Box => "box".into(),
        Constraint::LimitVertex => "limit-vertex".into(),
        Constraint::Segment(n) => format!("segment:{n}"),
    }
}

pub fn region_check(a: &PointArgs) -> CliResult<OutputRecord> {
    let check = classify(&K3Point::new(a.q1.clone(), a.q3.clone()));
    let mut rec = OutputRecord::new(
        "region-check",
        &[
            ("q1", Kind::Rational),
            ("q3", Kind::Rational),
            ("inside", Kind::Bool),
            ("active", Kind::Text),
            ("segments", Kind::Text),
        ],
    );
    rec.param("q1", format_rational(&a.q1)).param("q3", format_rational(&a.q3));
    let active = check.active.iter().map(constraint_text).collect::<Vec<_>>().join(";");
    let segments = check.segments.iter().map(u64::to_string).collect::<Vec<_>>().join(";");
    rec.push(vec![
        Cell::from(&a.q1),
        Cell::from(&a.q3),
        Cell::from(check.inside),
        Cell::from(if active.is_empty() { "interior".to_string() } else { active }),
        Cell::from(segments),
    ]);
    Ok(rec)
}

/// Returns the record and whether every point was certified extreme.
pub fn verify(n: usize, m_max: u64) -> CliResult<(OutputRecord, bool)> {
    let report = verify_extremes(n, m_max)?;
    let mut rec = OutputRecord::new("verify-extremes", &[("m", Kind::Integer), ("verdict", Kind::Text)]);
    rec.param("n", n).param("m_max", m_max);
    for (m, v) in &report.verdicts {
        let verdict = match v {
            ExtremeVerdict::ExtremeInTruncation => "extreme",
            ExtremeVerdict::NotExtreme => "not-extreme",
        };
        rec.push(vec![Cell::from(*m), Cell::from(verdict)]);
    }
    eprintln!("verify-extremes: n={n} m_max={m_max} elapsed={:.3}s", report.elapsed.as_secs_f64());
    Ok((rec, report.all_extreme()))
}

pub fn hull_member(law: &[Rational], n: usize, m_max: u64) -> CliResult<OutputRecord> {
    if law.len() != n {
        return Err(CliError::Usage(format!("--law has {} entries but --n is {n}", law.len())));
    }
    let law = LawOfK::new(law.to_vec())?;
    let evidence = hull_membership(&law, n, m_max)?;
    let mut rec = OutputRecord::new(
        "hull-member",
        &[
            ("label", Kind::Text),
            ("verdict", Kind::Text),
            ("m", Kind::Text),
            ("weight", Kind::Rational),
        ],
    );
    rec.param("law", join_rationals(law.probs())).param("n", n).param("m_max", m_max);
    match evidence {
        MembershipEvidence::Member { weights } => {
            for (m, w) in weights {
                rec.push(vec!["EVIDENCE".into(), "member".into(), Cell::Text(m.to_string()), Cell::from(w)]);
            }
        }
        MembershipEvidence::Inconclusive => {
            rec.push(vec!["EVIDENCE".into(), "inconclusive".into(), Cell::Empty, Cell::Empty]);
        }
    }
    Ok(rec)
}

pub fn sn(m_min: usize, m_max: usize) -> CliResult<OutputRecord> {
    let start = Instant::now();
    let rows = sn_table(m_min, m_max)?;
    let mut rec = OutputRecord::new("sn-table", &[("m", Kind::Integer), ("s_m", Kind::Integer)]);
    rec.param("m_min", m_min).param("m_max", m_max);
    for (m, s) in rows {
        rec.push(vec![Cell::from(m), Cell::from(s)]);
    }
    eprintln!("sn-table: elapsed={:.3}s", start.elapsed().as_secs_f64());
    Ok(rec)
}

pub fn sharp(n: usize) -> CliResult<OutputRecord> {
    let b = sharp_bound_kn(n)?;
    let mut rec = OutputRecord::new(
        "sharp-bound",
        &[
            ("n", Kind::Integer),
            ("bound", Kind::Rational),
            ("bound_f64", Kind::Float),
            ("partition", Kind::Text),
        ],
    );
    rec.param("n", n);
    let [a, f] = exact_and_float(&b.value);
    rec.push(vec![Cell::from(n), a, f, Cell::Text(b.argmax.to_string())]);
    Ok(rec)
}

fn params(a: &ParamArgs) -> CliResult<ParamsAT> {
    Ok(ParamsAT::new(a.alpha.clone(), a.theta.clone())?)
}

fn regime_text(p: &ParamsAT) -> String {
    match p.regime() {
        Regime::Main => "main".into(),
        Regime::Exceptional { m } => format!("exceptional:{m}"),
    }
}

pub fn two_param(a: &ParamArgs) -> CliResult<OutputRecord> {
    let p = params(a)?;
    let (q1, q2, q3) = k3_law_at(&p);
    let mut rec = OutputRecord::new(
        "two-param",
        &[
            ("alpha", Kind::Rational),
            ("theta", Kind::Rational),
            ("regime", Kind::Text),
            ("m", Kind::Rational),
            ("q1", Kind::Rational),
            ("q2", Kind::Rational),
            ("q3", Kind::Rational),
            ("h", Kind::Rational),
            ("q1_f64", Kind::Float),
            ("q2_f64", Kind::Float),
            ("q3_f64", Kind::Float),
        ],
    );
    rec.param("alpha", format_rational(p.alpha())).param("theta", format_rational(p.theta()));
    let m = p.m_ray().map_or(Cell::Empty, |r| Cell::from(r.m()));
    let hv = h(&q1, &q3);
    let floats: Vec<Cell> = [&q1, &q2, &q3].iter().map(|x| exact_and_float(x)[1].clone()).collect();
    let mut row = vec![
        Cell::from(p.alpha()),
        Cell::from(p.theta()),
        Cell::Text(regime_text(&p)),
        m,
        Cell::from(q1),
        Cell::from(q2),
        Cell::from(q3),
        Cell::from(hv),
    ];
    row.extend(floats);
    rec.push(row);
    Ok(rec)
}

pub fn dual(a: &ParamArgs) -> CliResult<OutputRecord> {
    let p = params(a)?;
    let d = dual_params(&p)?;
    let (a1, a2, a3) = k3_law_at(&p);
    let (b1, b2, b3) = k3_law_at(&d);
    if a1 != b3 || a3 != b1 || a2 != b2 {
        return Err(CliError::Verification("dual parameters do not swap q1 and q3".into()));
    }
    let mut rec = OutputRecord::new(
        "dual",
        &[
            ("role", Kind::Text),
            ("alpha", Kind::Rational),
            ("theta", Kind::Rational),
            ("q1", Kind::Rational),
            ("q2", Kind::Rational),
            ("q3", Kind::Rational),
        ],
    );
    rec.param("alpha", format_rational(p.alpha())).param("theta", format_rational(p.theta()));
    for (role, x, (q1, q2, q3)) in [("original", &p, (a1, a2, a3)), ("dual", &d, (b1, b2, b3))] {
        rec.push(vec![
            role.into(),
            Cell::from(x.alpha()),
            Cell::from(x.theta()),
            Cell::from(q1),
            Cell::from(q2),
            Cell::from(q3),
        ]);
    }
    Ok(rec)
}

pub fn inverse(a: &PointArgs) -> CliResult<OutputRecord> {
    let p = inverse_map(&a.q1, &a.q3)?;
    let (q1, _, q3) = k3_law_at(&p);
    if q1 != a.q1 || q3 != a.q3 {
        return Err(CliError::Verification("inverse does not reproduce (q1, q3)".into()));
    }
    let mut rec = OutputRecord::new(
        "inverse",
        &[("alpha", Kind::Rational), ("theta", Kind::Rational), ("regime", Kind::Text)],
    );
    rec.param("q1", format_rational(&a.q1)).param("q3", format_rational(&a.q3));
    rec.push(vec![Cell::from(p.alpha()), Cell::from(p.theta()), Cell::Text(regime_text(&p))]);
    Ok(rec)
}

fn required<T: Clone>(v: &Option<T>, flag: &str, model: &str) -> CliResult<T> {
    v.clone().ok_or_else(|| CliError::Usage(format!("--model {model} needs --{flag}")))
}

pub fn sample(a: &SampleArgs) -> CliResult<OutputRecord> {
    let mut extra: Vec<(&str, String)> = Vec::new();
    let report: SampleReport = match a.model {
        Model::Crp => {
            let alpha = required(&a.alpha, "alpha", "crp")?;
            let theta = required(&a.theta, "theta", "crp")?;
            extra.push(("alpha", format_rational(&alpha)));
            extra.push(("theta", format_rational(&theta)));
            sample_crp(&ParamsAT::new(alpha, theta)?, a.n, a.reps, a.seed)?
        }
        Model::Paintbox => {
            if a.atoms.is_empty() {
                return Err(CliError::Usage("--model paintbox needs --atoms".into()));
            }
            let p = RankedDiscreteDistribution::new(a.atoms.clone())?;
            extra.push(("atoms", join_rationals(p.atoms())));
            extra.push(("dust", format_rational(p.dust())));
            sample_paintbox(&p, a.n, a.reps, a.seed)?
        }
        Model::Dirichlet => {
            let m = required(&a.m, "m", "dirichlet")?;
            let neg_alpha = required(&a.neg_alpha, "neg-alpha", "dirichlet")?;
            extra.push(("m", m.to_string()));
            extra.push(("neg_alpha", format_rational(&neg_alpha)));
            sample_dirichlet_uniform(m, &neg_alpha, a.n, a.reps, a.seed)?
        }
    };
    let mut rec = OutputRecord::new(
        "sample",
        &[
            ("k", Kind::Integer),
            ("count", Kind::Integer),
            ("empirical", Kind::Rational),
            ("exact", Kind::Rational),
            ("empirical_f64", Kind::Float),
            ("exact_f64", Kind::Float),
        ],
    );
    let model = match a.model {
        Model::Crp => "crp",
        Model::Paintbox => "paintbox",
        Model::Dirichlet => "dirichlet",
    };
    rec.param("model", model)
        .param("n", a.n)
        .param("reps", a.reps)
        .param("seed", a.seed)
        .param("algorithm", report.algorithm)
        .param("max_abs_deviation", format_rational(&report.max_abs_deviation))
        .param("sigma_bound", format_rational(&report.sigma_bound))
        .param("within_4_sigma", report.within_4_sigma());
    for (k, v) in extra {
        rec.param(k, v);
    }
    for (i, ((c, e), p)) in report.counts.iter().zip(&report.empirical).zip(report.exact.probs()).enumerate() {
        let [e_exact, e_float] = exact_and_float(e);
        let [p_exact, p_float] = exact_and_float(p);
        rec.push(vec![Cell::from(i + 1), Cell::from(*c), e_exact, p_exact, e_float, p_float]);
    }
    Ok(rec)
}
