use exkn::combinatorics::partitions_of;
use exkn::eppf::achievable_k3_regions;
use exkn::exact_geom::{int, rat, to_f64, Rational};
use exkn::k3_region::{segment_level, segment_slope, v_point};
use exkn::paintbox::{q3_closed, RankedDiscreteDistribution, Support};
use exkn::two_param::{dirichlet_ray_law, k3_law_formula, k3_law_on_ray, q2_max, tau, MRay};
use num_traits::Zero;

use crate::error::{CliError, CliResult};
use crate::output::{Cell, Kind, OutputRecord};

const LATTICE_STEP: i64 = 40;
const FIG3_LEVELS: [usize; 6] = [4, 5, 7, 12, 19, 41];

pub fn figure(id: u32) -> CliResult<OutputRecord> {
    let mut rec = match id {
        1 => vertices_and_segments(),
        2 => lattice_images()?,
        3 => finite_hulls()?,
        5 => ewens_curves()?,
        6 => q2_contour()?,
        7 => bijection_boundaries()?,
        8 => dirichlet_rays()?,
        _ => {
            return Err(CliError::Usage(format!(
                "unknown figure id {id}; expected one of 1, 2, 3, 5, 6, 7, 8"
            )))
        }
    };
    rec.param("id", id);
    Ok(rec)
}

fn q_columns(leading: &[(&'static str, Kind)]) -> Vec<(&'static str, Kind)> {
    let mut cols = leading.to_vec();
    cols.extend([
        ("q1", Kind::Rational),
        ("q3", Kind::Rational),
        ("q1_f64", Kind::Float),
        ("q3_f64", Kind::Float),
    ]);
    cols
}

fn q_cells(q1: &Rational, q3: &Rational) -> [Cell; 4] {
    [Cell::from(q1), Cell::from(q3), Cell::Float(to_f64(q1)), Cell::Float(to_f64(q3))]
}

/// Vertices `v_N` for `N = 1..=30` and `∞`, and the supporting line of each edge.
fn vertices_and_segments() -> OutputRecord {
    let mut rec = OutputRecord::new(
        "figure",
        &q_columns(&[
            ("series", Kind::Text),
            ("N", Kind::Text),
            ("slope", Kind::Rational),
            ("level", Kind::Rational),
        ]),
    );
    let supports = (1..=30).map(Support::Finite).chain([Support::Infinite]);
    for s in supports {
        let v = v_point(s);
        let mut row = vec!["vertex".into(), Cell::Text(s.to_string()), Cell::Empty, Cell::Empty];
        row.extend(q_cells(&v.q1, &v.q3));
        rec.push(row);
    }
    for big_n in 1..=29u64 {
        let slope = segment_slope(big_n).expect("N >= 1");
        let v = v_point(Support::Finite(big_n));
        let mut row = vec![
            "segment".into(),
            Cell::Text(big_n.to_string()),
            Cell::from(slope),
            Cell::from(segment_level(big_n)),
        ];
        row.extend(q_cells(&v.q1, &v.q3));
        rec.push(row);
    }
    rec
}

/// Images of ranked lattice points `(c_1, ..., c_m)/40` with `Σ c_i = 40`, for `m = 3, 4, 5`.
fn lattice_images() -> CliResult<OutputRecord> {
    let mut rec = OutputRecord::new("figure", &q_columns(&[("m", Kind::Integer), ("p", Kind::Text)]));
    rec.param("lattice_step", format!("1/{LATTICE_STEP}"));
    let parts = partitions_of(LATTICE_STEP as usize)?;
    for m in 3..=5usize {
        for lambda in parts.iter().filter(|l| l.len() <= m) {
            let atoms: Vec<Rational> = lambda.parts().iter().map(|&c| rat(c as i64, LATTICE_STEP)).collect();
            let p = RankedDiscreteDistribution::new(atoms)?;
            let (q1, _, q3) = q3_closed(&p);
            let label = lambda
                .parts()
                .iter()
                .map(|c| c.to_string())
                .chain(std::iter::repeat_n("0".to_string(), m - lambda.len()))
                .collect::<Vec<_>>()
                .join(" ");
            let mut row = vec![Cell::from(m), Cell::Text(label)];
            row.extend(q_cells(&q1, &q3));
            rec.push(row);
        }
    }
    Ok(rec)
}

fn finite_hulls() -> CliResult<OutputRecord> {
    let mut rec = OutputRecord::new("figure", &q_columns(&[("m", Kind::Integer), ("vertex", Kind::Integer)]));
    let regions = achievable_k3_regions(FIG3_LEVELS[0], *FIG3_LEVELS.last().unwrap())?;
    for region in regions.iter().filter(|r| FIG3_LEVELS.contains(&r.m)) {
        for (i, v) in region.hull.iter().enumerate() {
            let mut row = vec![Cell::from(region.m), Cell::from(i)];
            row.extend(q_cells(&v.q1, &v.q3));
            rec.push(row);
        }
    }
    Ok(rec)
}

/// `q_i^{(0)}(θ)` for `θ = i/20`, `i = 1..=100`, plus the crossing at `θ = √2`.
fn ewens_curves() -> CliResult<OutputRecord> {
    let mut rec = OutputRecord::new(
        "figure",
        &[
            ("series", Kind::Text),
            ("theta", Kind::Rational),
            ("q1", Kind::Rational),
            ("q2", Kind::Rational),
            ("q3", Kind::Rational),
            ("theta_f64", Kind::Float),
            ("q1_f64", Kind::Float),
            ("q2_f64", Kind::Float),
            ("q3_f64", Kind::Float),
        ],
    );
    for i in 1..=100 {
        let theta = rat(i, 20);
        let (q1, q2, q3) = k3_law_on_ray(&MRay::new(Rational::zero(), theta.clone())?);
        rec.push(vec![
            "curve".into(),
            Cell::from(&theta),
            Cell::from(&q1),
            Cell::from(&q2),
            Cell::from(&q3),
            Cell::Float(to_f64(&theta)),
            Cell::Float(to_f64(&q1)),
            Cell::Float(to_f64(&q2)),
            Cell::Float(to_f64(&q3)),
        ]);
    }
    let t = tau(&Rational::zero())?;
    let peak = q2_max(&Rational::zero())?;
    rec.push(vec![
        "q2_max".into(),
        Cell::Empty,
        Cell::Empty,
        Cell::Empty,
        Cell::Empty,
        Cell::Float(t.to_f64()),
        Cell::Float((1.0 - peak.to_f64()) / 2.0),
        Cell::Float(peak.to_f64()),
        Cell::Float((1.0 - peak.to_f64()) / 2.0),
    ]);
    Ok(rec)
}

/// `q_2(α, θ)` on a grid, the curve `q_1 = q_3`, and the tangent rays at
/// levels `0.1, ..., 0.5`.
fn q2_contour() -> CliResult<OutputRecord> {
    let mut rec = OutputRecord::new(
        "figure",
        &[
            ("series", Kind::Text),
            ("alpha", Kind::Rational),
            ("theta", Kind::Rational),
            ("q2", Kind::Rational),
            ("m", Kind::Rational),
            ("alpha_f64", Kind::Float),
            ("theta_f64", Kind::Float),
            ("q2_f64", Kind::Float),
        ],
    );
    for i in 0..20 {
        let alpha = rat(i, 20);
        for j in 0..=60 {
            let theta = rat(-1, 1) + rat(j, 10);
            if theta <= -alpha.clone() {
                continue;
            }
            let (_, q2, _) = k3_law_formula(&alpha, &theta)?;
            rec.push(vec![
                "grid".into(),
                Cell::from(&alpha),
                Cell::from(&theta),
                Cell::from(&q2),
                Cell::Empty,
                Cell::Float(to_f64(&alpha)),
                Cell::Float(to_f64(&theta)),
                Cell::Float(to_f64(&q2)),
            ]);
        }
    }
    for i in 0..=40 {
        let m = rat(i, 10);
        let t = tau(&m)?.to_f64();
        let alpha = to_f64(&m) * (1.0 + t);
        if alpha >= 1.0 {
            continue;
        }
        rec.push(vec![
            "q1_eq_q3".into(),
            Cell::Empty,
            Cell::Empty,
            Cell::Empty,
            Cell::from(&m),
            Cell::Float(alpha),
            Cell::Float(t),
            Cell::Float(q2_max(&m)?.to_f64()),
        ]);
    }
    // q2_max(m) = p  <=>  m = ((9 - p)^2 - 72) / (12 p)
    for i in 1..=5 {
        let p = rat(i, 10);
        let nine_minus = int(9) - &p;
        let m = (&nine_minus * &nine_minus - int(72)) / (int(12) * &p);
        let t = tau(&m)?.to_f64();
        rec.push(vec![
            "tangent".into(),
            Cell::Empty,
            Cell::Empty,
            Cell::from(&p),
            Cell::from(&m),
            Cell::Float(to_f64(&m) * (1.0 + t)),
            Cell::Float(t),
            Cell::Float(to_f64(&p)),
        ]);
    }
    Ok(rec)
}

/// The Ewens ray `α = 0` and its image `h = 0`, the line `q1 + q3 = 1`, and
/// sample rays `α = m(1 + θ)` with their images.
fn bijection_boundaries() -> CliResult<OutputRecord> {
    let mut rec = OutputRecord::new(
        "figure",
        &q_columns(&[
            ("series", Kind::Text),
            ("m", Kind::Rational),
            ("alpha", Kind::Rational),
            ("theta", Kind::Rational),
        ]),
    );
    for j in 1..=80 {
        let theta = rat(j, 4);
        let (q1, _, q3) = k3_law_formula(&Rational::zero(), &theta)?;
        let mut row = vec!["ewens".into(), Cell::from(Rational::zero()), Cell::from(Rational::zero()), Cell::from(&theta)];
        row.extend(q_cells(&q1, &q3));
        rec.push(row);
    }
    for j in 0..=40 {
        let q1 = rat(j, 40);
        let q3 = int(1) - &q1;
        let mut row = vec!["line".into(), Cell::Empty, Cell::Empty, Cell::Empty];
        row.extend(q_cells(&q1, &q3));
        rec.push(row);
    }
    for m in [rat(1, 8), rat(1, 4), rat(1, 2), int(1), int(2), int(4), int(8)] {
        let lo = -m.clone() / (&m + int(1));
        let hi = (int(1) - &m) / &m;
        for j in 1..40 {
            let theta = &lo + (&hi - &lo) * rat(j, 40);
            let ray = MRay::new(m.clone(), theta.clone())?;
            let (q1, _, q3) = k3_law_on_ray(&ray);
            let mut row = vec!["ray".into(), Cell::from(&m), Cell::from(ray.alpha()), Cell::from(&theta)];
            row.extend(q_cells(&q1, &q3));
            rec.push(row);
        }
    }
    Ok(rec)
}

/// Images of `(α, -mα)` for `m = 2..=6` as `α` decreases, the limit points
/// `v_m`, and the curve `h = 0`.
fn dirichlet_rays() -> CliResult<OutputRecord> {
    let mut rec = OutputRecord::new(
        "figure",
        &q_columns(&[("series", Kind::Text), ("m", Kind::Text), ("alpha", Kind::Rational)]),
    );
    let alphas: Vec<Rational> = (1..=40)
        .map(|j| rat(-j, 4))
        .chain([-20, -50, -100, -1000].into_iter().map(int))
        .collect();
    for m in 2..=6u64 {
        for alpha in &alphas {
            let (q1, _, q3) = dirichlet_ray_law(m, alpha)?;
            let mut row = vec!["dirichlet".into(), Cell::Text(m.to_string()), Cell::from(alpha)];
            row.extend(q_cells(&q1, &q3));
            rec.push(row);
        }
        let v = v_point(Support::Finite(m));
        let mut row = vec!["limit".into(), Cell::Text(m.to_string()), Cell::Empty];
        row.extend(q_cells(&v.q1, &v.q3));
        rec.push(row);
    }
    for j in 1..=80 {
        let theta = rat(j, 4);
        let (q1, _, q3) = k3_law_formula(&Rational::zero(), &theta)?;
        let mut row = vec!["h_zero".into(), Cell::Text("0".into()), Cell::Empty];
        row.extend(q_cells(&q1, &q3));
        rec.push(row);
    }
    Ok(rec)
}
