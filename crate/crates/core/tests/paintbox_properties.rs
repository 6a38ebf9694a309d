use exkn::combinatorics::{binomial, partitions_of, stirling2};
use exkn::exact_geom::{int, rat, Rational};
use exkn::k3_region::{contains, segment_level, v_point, K3Point};
use exkn::paintbox::{
    khintchine_decompose, khintchine_reconstruct, l_n_functional, law_of_kn, merge_delta, merge_two_smallest,
    q3_closed, f_of, LawOfK, RankedDiscreteDistribution, Support,
};
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rng(tag: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(0x5eed_0000 + tag)
}

/// Up to `max_atoms` atoms with small integer weights, optionally leaving dust.
fn random_paintbox(rng: &mut ChaCha8Rng, max_atoms: usize, dust: bool) -> RankedDiscreteDistribution {
    let m = rng.random_range(1..=max_atoms);
    let weights: Vec<i64> = (0..m).map(|_| rng.random_range(1..=20)).collect();
    let extra = if dust { rng.random_range(0..=10) } else { 0 };
    let total: i64 = weights.iter().sum::<i64>() + extra;
    RankedDiscreteDistribution::new(weights.iter().map(|&w| rat(w, total)).collect()).unwrap()
}

fn q2(p: &RankedDiscreteDistribution, n: usize) -> Rational {
    law_of_kn(p, n).unwrap().at(2).clone()
}

/// Sums product weights over all `m^n` sequences of atom indices.
fn brute_force_law(atoms: &[Rational], n: usize) -> Vec<Rational> {
    let m = atoms.len();
    let mut probs = vec![Rational::zero(); n];
    let mut seq = vec![0usize; n];
    loop {
        let w: Rational = seq.iter().map(|&i| atoms[i].clone()).product();
        let mut seen = seq.clone();
        seen.sort_unstable();
        seen.dedup();
        probs[seen.len() - 1] += w;
        let mut pos = 0;
        loop {
            if pos == n {
                return probs;
            }
            seq[pos] += 1;
            if seq[pos] < m {
                break;
            }
            seq[pos] = 0;
            pos += 1;
        }
    }
}

/// Ranked compositions of `d` into at most `parts` positive parts.
fn ranked_compositions(d: i64, parts: usize, max: i64) -> Vec<Vec<i64>> {
    if d == 0 {
        return vec![vec![]];
    }
    if parts == 0 {
        return vec![];
    }
    let mut out = Vec::new();
    for first in (1..=d.min(max)).rev() {
        for mut rest in ranked_compositions(d - first, parts - 1, first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

#[test]
fn law_matches_brute_force_on_small_grids() {
    let mut checked = 0;
    for d in 1..=6 {
        for comp in ranked_compositions(d, 4, d) {
            let atoms: Vec<Rational> = comp.iter().map(|&c| rat(c, d)).collect();
            let p = RankedDiscreteDistribution::new(atoms.clone()).unwrap();
            for n in 1..=5 {
                assert_eq!(law_of_kn(&p, n).unwrap().probs(), brute_force_law(&atoms, n).as_slice());
                checked += 1;
            }
        }
    }
    assert!(checked > 100);
}

#[test]
fn law_matches_brute_force_on_random_paintboxes() {
    let mut r = rng(1);
    for _ in 0..50 {
        let p = random_paintbox(&mut r, 4, false);
        for n in 1..=5 {
            assert_eq!(law_of_kn(&p, n).unwrap().probs(), brute_force_law(p.atoms(), n).as_slice());
        }
    }
}

#[test]
fn closed_form_k3_law_agrees() {
    let mut r = rng(2);
    for i in 0..200 {
        let p = random_paintbox(&mut r, 6, i % 2 == 0);
        let (a, b, c) = q3_closed(&p);
        assert_eq!(law_of_kn(&p, 3).unwrap().probs(), &[a, b, c]);
    }
}

#[test]
fn q2_bounds() {
    let three_quarters = rat(3, 4);
    let u2 = RankedDiscreteDistribution::uniform(Support::Finite(2));
    assert_eq!(q2(&u2, 3), three_quarters);
    for n in 3..=10 {
        let bound = int(1) - rat(1, 1i64 << (n - 1));
        assert_eq!(q2(&u2, n), bound);
    }
    let mut r = rng(3);
    for _ in 0..10_000 {
        let p = random_paintbox(&mut r, 8, true);
        assert!(q3_closed(&p).1 <= three_quarters);
    }
    for n in 4..=8 {
        let bound = int(1) - rat(1, 1i64 << (n - 1));
        for _ in 0..1000 {
            let p = random_paintbox(&mut r, 8, true);
            assert!(q2(&p, n) <= bound, "n={n}");
        }
    }
}

#[test]
fn merging_small_atoms_raises_q2() {
    let mut r = rng(4);
    let mut done = 0;
    while done < 500 {
        let p = random_paintbox(&mut r, 8, false);
        if p.num_atoms() < 3 {
            continue;
        }
        let merged = merge_two_smallest(&p).unwrap();
        assert!(q3_closed(&merged).1 >= q3_closed(&p).1);
        done += 1;
    }
}

#[test]
fn dust_as_atom_does_not_lower_q2() {
    let mut r = rng(5);
    for _ in 0..300 {
        let p = random_paintbox(&mut r, 5, true);
        let promoted = p.dust_as_atom();
        for n in 3..=8 {
            assert!(q2(&promoted, n) >= q2(&p, n), "n={n}");
        }
    }
}

#[test]
fn merge_delta_is_the_exact_change() {
    let mut r = rng(6);
    for _ in 0..500 {
        let p = random_paintbox(&mut r, 8, true);
        if p.num_atoms() < 2 {
            continue;
        }
        let i = r.random_range(0..p.num_atoms());
        let mut j = r.random_range(0..p.num_atoms() - 1);
        if j >= i {
            j += 1;
        }
        let (a, b) = (p.atoms()[i].clone(), p.atoms()[j].clone());
        let mut atoms: Vec<Rational> = p
            .atoms()
            .iter()
            .enumerate()
            .filter(|(k, _)| *k != i && *k != j)
            .map(|(_, x)| x.clone())
            .collect();
        atoms.push(&a + &b);
        let merged = RankedDiscreteDistribution::new(atoms).unwrap();
        for big_n in 1..=12 {
            let delta = l_n_functional(&merged, big_n).unwrap() - l_n_functional(&p, big_n).unwrap();
            assert_eq!(delta, merge_delta(&a, &b, big_n));
        }
    }
}

#[test]
fn line_bounds_hold_and_are_tight_at_uniforms() {
    for big_n in 1..=50u64 {
        let level = segment_level(big_n);
        let un = RankedDiscreteDistribution::uniform(Support::Finite(big_n));
        let un1 = RankedDiscreteDistribution::uniform(Support::Finite(big_n + 1));
        assert_eq!(l_n_functional(&un, big_n).unwrap(), level);
        assert_eq!(l_n_functional(&un1, big_n).unwrap(), level);
        assert_eq!(level, Rational::new((2 * big_n as i64 - 2).into(), (2 * big_n as i64 + 1).into()));
    }
    let mut r = rng(7);
    for _ in 0..1000 {
        let p = random_paintbox(&mut r, 8, true);
        for big_n in 1..=10 {
            assert!(l_n_functional(&p, big_n).unwrap() >= segment_level(big_n));
        }
    }
}

#[test]
fn region_contains_random_paintboxes() {
    let mut r = rng(8);
    for _ in 0..10_000 {
        let p = random_paintbox(&mut r, 8, false);
        assert!(contains(&K3Point::of(&p)), "{p:?}");
    }
    for _ in 0..1000 {
        let p = random_paintbox(&mut r, 8, true);
        assert!(contains(&K3Point::of(&p)));
    }
}

#[test]
fn region_rejects_points_just_below_vertices() {
    let eps = rat(1, 1_000_000);
    for big_n in 2..=50u64 {
        let v = v_point(Support::Finite(big_n));
        assert!(contains(&v));
        let below = K3Point::new(v.q1.clone(), &v.q3 - &eps);
        assert!(!contains(&below), "N={big_n}");
    }
}

#[test]
fn small_new_atom_lowers_l_n() {
    let mut r = rng(9);
    let mut done = 0;
    while done < 500 {
        let p = random_paintbox(&mut r, 6, true);
        if p.dust().is_zero() {
            continue;
        }
        let big_n = r.random_range(1..=12u64);
        let cap = (int(3) / f_of(big_n)).min(p.dust().clone());
        let eps = cap * rat(r.random_range(1..100), 100);
        let mut atoms = p.atoms().to_vec();
        atoms.push(eps);
        let q = RankedDiscreteDistribution::new(atoms).unwrap();
        assert!(l_n_functional(&q, big_n).unwrap() < l_n_functional(&p, big_n).unwrap());
        done += 1;
    }
}

#[test]
fn merge_or_average_lowers_l_n_off_uniform() {
    let mut r = rng(10);
    let mut done = 0;
    while done < 500 {
        let p = random_paintbox(&mut r, 6, false);
        let atoms = p.atoms();
        let Some((i, j)) = (0..atoms.len())
            .flat_map(|i| (i + 1..atoms.len()).map(move |j| (i, j)))
            .find(|&(i, j)| atoms[i] != atoms[j])
        else {
            continue;
        };
        let big_n = r.random_range(2..=12u64);
        let (a, b) = (&atoms[i], &atoms[j]);
        let threshold = int(2) / f_of(big_n);
        let s = a + b;
        if s == threshold {
            continue;
        }
        let mut rest: Vec<Rational> = atoms
            .iter()
            .enumerate()
            .filter(|(k, _)| *k != i && *k != j)
            .map(|(_, x)| x.clone())
            .collect();
        if s < threshold {
            rest.push(s);
        } else {
            let half = s * rat(1, 2);
            rest.push(half.clone());
            rest.push(half);
        }
        let q = RankedDiscreteDistribution::new(rest).unwrap();
        assert!(l_n_functional(&q, big_n).unwrap() < l_n_functional(&p, big_n).unwrap());
        done += 1;
    }
}

#[test]
fn khintchine_round_trip() {
    let mut r = rng(11);
    for i in 0..1000 {
        let p = random_paintbox(&mut r, 8, i % 3 == 0);
        let w = khintchine_decompose(&p);
        assert!(w.values().all(|x| x.is_positive()));
        assert!(w.values().sum::<Rational>().is_one());
        assert_eq!(khintchine_reconstruct(&w, p.num_atoms()), p.atoms());
    }
}

#[test]
fn cluster_counts_sum_to_bell_and_stirling() {
    use exkn::combinatorics::cluster_count;
    use num_bigint::BigUint;
    for n in 1..=15 {
        let mut by_k = vec![BigUint::zero(); n + 1];
        for lambda in partitions_of(n).unwrap() {
            by_k[lambda.len()] += cluster_count(&lambda);
        }
        for (k, total) in by_k.iter().enumerate().skip(1) {
            assert_eq!(total, &stirling2(n, k).unwrap());
        }
    }
}

#[test]
fn binomial_expansion_sandwich() {
    let mut r = rng(12);
    for _ in 0..500 {
        let a = rat(r.random_range(1..=50), r.random_range(1..=50)).min(int(1));
        let b = rat(r.random_range(1..=50), r.random_range(1..=50)).min(int(1));
        let n: u32 = r.random_range(2..=12);
        let s = &a + &b;
        let core = &a * &b * num_traits::pow(s.clone(), n as usize - 2);
        let mid = num_traits::pow(s.clone(), n as usize) - num_traits::pow(a.clone(), n as usize) - num_traits::pow(b.clone(), n as usize);
        let nn = int(n as i64);
        assert!(int(4) * (&nn - int(1)) / &nn * &core <= mid);
        assert!(mid <= nn * core);
    }
    let _ = binomial(4, 2);
}

#[test]
fn law_type_validation() {
    assert!(LawOfK::new(vec![rat(1, 2), rat(1, 2)]).is_ok());
    assert!(LawOfK::new(vec![rat(1, 2), rat(1, 3)]).is_err());
    assert!(LawOfK::new(vec![rat(3, 2), rat(-1, 2)]).is_err());
}
