use std::collections::BTreeMap;

use pcl_core::arith::primes_up_to;
use pcl_core::classgroup::*;
use pcl_core::numberfield::*;
use proptest::prelude::*;
use serde::Deserialize;

#[derive(Deserialize)]
struct OracleField {
    cyc: Vec<i128>,
    disc: i128,
    #[serde(default)]
    principal_i0: Option<bool>,
    #[serde(default)]
    principal_p0: Option<bool>,
    #[serde(default, rename = "principal_I")]
    principal_i: Option<bool>,
    #[serde(default, rename = "principal_P")]
    principal_p: Option<bool>,
}

#[derive(Deserialize)]
struct Oracle {
    cubic: BTreeMap<String, serde_json::Value>,
    sextic: BTreeMap<String, OracleField>,
    pure_cubic: BTreeMap<String, OracleField>,
}

fn oracle() -> Oracle {
    let s = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/tests/data/pari_oracle.json")).unwrap();
    serde_json::from_str(&s).unwrap()
}

fn cubic_entry(o: &Oracle, p: u64) -> OracleField {
    let v = &o.cubic[&p.to_string()];
    OracleField {
        cyc: serde_json::from_value(v["cyc"].clone()).unwrap(),
        disc: v["disc"].as_i64().unwrap() as i128,
        principal_i0: v.get("principal_I0").and_then(|x| x.as_bool()),
        principal_p0: v.get("principal_P0").and_then(|x| x.as_bool()),
        principal_i: None,
        principal_p: None,
    }
}

/// Invariants in ascending divisibility order, as our SNF reports them.
fn ascending(mut v: Vec<i128>) -> Vec<i128> {
    v.retain(|&d| d != 1);
    v.sort();
    v
}

fn cfg() -> ClassGroupConfig {
    ClassGroupConfig::default()
}

#[test]
fn minkowski_bounds() {
    assert_eq!(minkowski_bound(&build_cubic_order(7).unwrap()), 11);
    assert_eq!(minkowski_bound_for(1, 0, 1), 1);
    // (4/π)³·6!/6⁶·√5250987 = 72.992… by a 60-digit evaluation
    assert_eq!(minkowski_bound(&build_sextic_order(7).unwrap()), 73);
}

#[test]
fn factor_base_counts() {
    for order in [build_cubic_order(7).unwrap(), build_sextic_order(13).unwrap(), build_cubic_order(61).unwrap()] {
        for bound in [10u64, 50, 200] {
            let fb = build_factor_base(&order, bound).unwrap();
            let expected: usize = primes_up_to(bound)
                .into_iter()
                .map(|q| order.factor_rational_prime(q).unwrap().iter().filter(|p| p.norm() <= bound as i128).count())
                .sum();
            assert_eq!(fb.len(), expected);
            assert!(fb.windows(2).all(|w| w[0].ideal < w[1].ideal));
        }
    }
    assert!(build_factor_base(&build_cubic_order(7).unwrap(), 1).unwrap().is_empty());

    let l = build_cubic_order(7).unwrap();
    let fb = build_factor_base(&l, 7).unwrap();
    let s = cubic_special_ideals(&l).unwrap();
    assert!(fb.iter().any(|p| p.ideal == s.i0.as_ref().unwrap().ideal));
    assert!(fb.iter().any(|p| p.ideal == s.p0.ideal));
}

#[test]
fn relation_lattice_examples() {
    let o = build_pure_cubic_order(2).unwrap();
    let base = build_factor_base(&o, minkowski_bound(&o)).unwrap();
    let (rels, cert) = find_relations(&o, &base, &cfg()).unwrap();
    assert!(!rels.is_empty());
    assert!(cert.stable_across_seeds);
    assert_eq!(class_group(&o, &cfg()).unwrap().class_number, 1);

    assert_eq!(class_group(&build_cubic_order(7).unwrap(), &cfg()).unwrap().v3_class_number(), 1);
    assert_eq!(class_group(&build_cubic_order(199).unwrap(), &cfg()).unwrap().v3_class_number(), 2);
}

#[test]
fn pure_cubic_fields_match_oracle() {
    let or = oracle();
    for (d, want) in &or.pure_cubic {
        let d: u64 = d.parse().unwrap();
        let o = build_pure_cubic_order(d).unwrap();
        assert_eq!(o.discriminant, want.disc, "d={d}");
        let cg = class_group(&o, &cfg()).unwrap();
        assert_eq!(cg.invariants, ascending(want.cyc.clone()), "d={d}");
    }
}

#[test]
fn cubic_class_groups_match_oracle() {
    let or = oracle();
    for p in primes_up_to(1000).into_iter().filter(|p| p % 3 == 1) {
        let want = cubic_entry(&or, p);
        let o = build_cubic_order(p).unwrap();
        assert_eq!(o.discriminant, want.disc, "p={p}");
        let cg = class_group(&o, &cfg()).unwrap();
        assert_eq!(cg.invariants, ascending(want.cyc.clone()), "p={p}");
        let s = cubic_special_ideals(&o).unwrap();
        assert_eq!(is_principal(&o, &cg, &s.p0.ideal).unwrap(), want.principal_p0.unwrap(), "P₀, p={p}");
        if let (Some(i0), Some(w)) = (&s.i0, want.principal_i0) {
            assert_eq!(is_principal(&o, &cg, &i0.ideal).unwrap(), w, "I₀, p={p}");
        }
    }
}

#[test]
fn sextic_class_groups_match_oracle() {
    let or = oracle();
    for p in primes_up_to(250).into_iter().filter(|p| p % 3 == 1) {
        let want = &or.sextic[&p.to_string()];
        let o = build_sextic_order(p).unwrap();
        assert_eq!(o.discriminant, want.disc, "p={p}");
        let cg = class_group(&o, &cfg()).unwrap();
        assert_eq!(cg.invariants, ascending(want.cyc.clone()), "p={p}");
        let s = sextic_special_ideals(&o).unwrap();
        assert_eq!(is_principal(&o, &cg, &s.p.ideal).unwrap(), want.principal_p.unwrap(), "P, p={p}");
        assert_eq!(is_principal(&o, &cg, &s.q.ideal).unwrap(), want.principal_p.unwrap(), "Q, p={p}");
        if let (Some(i), Some(w)) = (&s.i, want.principal_i) {
            assert_eq!(is_principal(&o, &cg, &i.ideal).unwrap(), w, "I, p={p}");
        }
    }
}

#[test]
fn three_parts_from_tables() {
    let l61 = class_group(&build_cubic_order(61).unwrap(), &cfg()).unwrap();
    assert_eq!(l61.three_part(), vec![3]);
    let k61 = class_group(&build_sextic_order(61).unwrap(), &cfg()).unwrap();
    assert_eq!(k61.three_part(), vec![3, 3]);
    let k7 = class_group(&build_sextic_order(7).unwrap(), &cfg()).unwrap();
    assert_eq!(k7.three_part(), vec![3]);
}

#[test]
fn principality_examples() {
    let k61o = build_sextic_order(61).unwrap();
    let k61 = class_group(&k61o, &cfg()).unwrap();
    let theta = k61o.from_product(&[0, 1, 0, 0, 0, 0]).unwrap();
    let cbrt = k61o.principal_ideal(&theta).unwrap();
    assert!(class_coordinates(&k61o, &k61, &cbrt).unwrap().iter().all(|&c| c == 0));
    let s = sextic_special_ideals(&k61o).unwrap();
    assert!(class_coordinates(&k61o, &k61, &s.i.as_ref().unwrap().ideal).unwrap().iter().all(|&c| c == 0));
    assert!(class_coordinates(&k61o, &k61, &s.p.ideal).unwrap().iter().any(|&c| c != 0));

    let k7o = build_sextic_order(7).unwrap();
    let k7 = class_group(&k7o, &cfg()).unwrap();
    let s = sextic_special_ideals(&k7o).unwrap();
    assert!(!is_principal(&k7o, &k7, &s.i.as_ref().unwrap().ideal).unwrap());
    assert!(is_principal(&k7o, &k7, &s.p.ideal).unwrap());

    let l7o = build_cubic_order(7).unwrap();
    let l7 = class_group(&l7o, &cfg()).unwrap();
    assert!(is_principal(&l7o, &l7, &cubic_special_ideals(&l7o).unwrap().p0.ideal).unwrap());
}

#[test]
fn coordinates_are_additive() {
    // [ab] = [a] + [b] for random products of base primes
    let o = build_sextic_order(61).unwrap();
    let cg = class_group(&o, &cfg()).unwrap();
    let fb = &cg.factor_base;
    for (i, j) in [(3usize, 7usize), (10, 20), (5, 5), (1, 30)] {
        let ab = o.ideal_mul(&fb[i].ideal, &fb[j].ideal).unwrap();
        let c = class_coordinates(&o, &cg, &ab).unwrap();
        let want: Vec<i128> = cg.generator_map[i]
            .iter()
            .zip(&cg.generator_map[j])
            .zip(&cg.invariants)
            .map(|((x, y), d)| (x + y).rem_euclid(*d))
            .collect();
        assert_eq!(c, want);
        // and the map agrees with direct coordinates of each prime
        assert_eq!(class_coordinates(&o, &cg, &fb[i].ideal).unwrap(), cg.generator_map[i]);
    }
}

#[test]
fn fixed_subgroups() {
    let k7 = class_group(&build_sextic_order(7).unwrap(), &cfg()).unwrap();
    assert_eq!(fixed_subgroup(&k7, Automorphism::Sigma).unwrap().order, 3);
    let k61 = class_group(&build_sextic_order(61).unwrap(), &cfg()).unwrap();
    assert_eq!(fixed_subgroup(&k61, Automorphism::Sigma).unwrap().order, 3);
    let l61 = class_group(&build_cubic_order(61).unwrap(), &cfg()).unwrap();
    let plus = fixed_subgroup(&k61, Automorphism::Tau).unwrap();
    assert_eq!(plus.order, l61.three_order());
    assert_eq!(plus.invariants, vec![3]);
}

#[test]
fn structure_reports() {
    let report = |p: u64| {
        let l = class_group(&build_cubic_order(p).unwrap(), &cfg()).unwrap();
        let k = class_group(&build_sextic_order(p).unwrap(), &cfg()).unwrap();
        structure_report(&l, &k).unwrap()
    };
    let r = report(7);
    assert_eq!((r.s, r.u, r.type3.clone()), (1, 1, vec![3]));
    let r = report(61);
    assert_eq!((r.s, r.u, r.type3.clone()), (2, 3, vec![3, 3]));
    let r = report(199);
    assert_eq!((r.s, r.u, r.type3.clone()), (3, 1, vec![9, 3]));
    assert_eq!(r.rank3, 2);
    let (a, b) = r.sigma_filtration_ranks;
    assert_eq!(a + b, r.rank3);
}

#[test]
fn inverse_class_under_tau() {
    for p in [7u64, 61, 67] {
        let o = build_sextic_order(p).unwrap();
        let cg = class_group(&o, &cfg()).unwrap();
        let s = sextic_special_ideals(&o).unwrap();
        let q2 = o.ideal_pow(&s.q.ideal, 2).unwrap();
        let pq2 = o.ideal_mul(&s.p.ideal, &q2).unwrap();
        let c = class_coordinates(&o, &cg, &pq2).unwrap();
        let ct = class_coordinates(&o, &cg, &o.apply_galois(Automorphism::Tau, &pq2).unwrap()).unwrap();
        let neg: Vec<i128> = c.iter().zip(&cg.invariants).map(|(x, d)| (-x).rem_euclid(*d)).collect();
        assert_eq!(ct, neg, "p={p}");
    }
}

fn v3(mut d: i128) -> u32 {
    let mut v = 0;
    while d % 3 == 0 {
        d /= 3;
        v += 1;
    }
    v
}

/// Structural identities over every p ≡ 1 (mod 3) up to 250.
#[test]
fn structure_properties_up_to_250() {
    for p in primes_up_to(250).into_iter().filter(|p| p % 3 == 1) {
        let lo = build_cubic_order(p).unwrap();
        let ko = build_sextic_order(p).unwrap();
        let l = class_group(&lo, &cfg()).unwrap();
        let k = class_group(&ko, &cfg()).unwrap();
        let r = structure_report(&l, &k).unwrap();
        assert_eq!(k.three_order(), 3i128.pow(r.s), "p={p}");
        assert_eq!(r.ambiguous_order, 3, "p={p}");
        assert_eq!(3 * k.three_order(), r.u as i128 * l.three_order() * l.three_order(), "p={p}");
        assert_eq!(r.sigma_filtration_ranks.0 + r.sigma_filtration_ranks.1, r.rank3, "p={p}");
        // τ-fixed part ≅ C_L,3
        let plus = fixed_subgroup(&k, Automorphism::Tau).unwrap();
        assert_eq!((plus.order, plus.invariants), (l.three_order(), l.three_part()), "p={p}");
        match r.ambiguous_plus_order {
            3 => assert_eq!(r.u, 1, "p={p}"),
            1 => assert_eq!(r.u, 3, "p={p}"),
            o => panic!("p={p}: ambiguous τ-fixed order {o}"),
        }
        let s = sextic_special_ideals(&ko).unwrap();
        let pq2 = ko.ideal_mul(&s.p.ideal, &ko.ideal_pow(&s.q.ideal, 2).unwrap()).unwrap();
        let c = k.three_coordinates(&class_coordinates(&ko, &k, &pq2).unwrap());
        let ct = k.three_coordinates(&class_coordinates(&ko, &k, &ko.apply_galois(Automorphism::Tau, &pq2).unwrap()).unwrap());
        let three: Vec<i128> = k.invariants.iter().map(|&d| 3i128.pow(v3(d))).filter(|&t| t > 1).collect();
        let neg: Vec<i128> = c.iter().zip(&three).map(|(x, d)| (-x).rem_euclid(*d)).collect();
        assert_eq!(ct, neg, "p={p}");
    }
}

#[test]
fn results_are_deterministic() {
    let o = build_sextic_order(13).unwrap();
    let a = class_group(&o, &cfg()).unwrap();
    let b = class_group(&o, &cfg()).unwrap();
    assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    let other = class_group(&o, &ClassGroupConfig { seed: 99, ..cfg() }).unwrap();
    assert_eq!(a.invariants, other.invariants);
}

#[test]
fn parity_formula() {
    assert_eq!(parity_type(1), vec![3]);
    assert_eq!(parity_type(2), vec![3, 3]);
    assert_eq!(parity_type(3), vec![9, 3]);
    assert_eq!(parity_type(4), vec![9, 9]);
}

/// Invariant factors from determinantal divisors: `d₁⋯d_k = gcd of k×k minors`.
fn minors_oracle(m: &[Vec<i128>]) -> Vec<i128> {
    fn det(m: &[Vec<i128>], rows: &[usize], cols: &[usize]) -> i128 {
        if rows.len() == 1 {
            return m[rows[0]][cols[0]];
        }
        let mut s = 0;
        for (k, &c) in cols.iter().enumerate() {
            let sub: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
            let t = m[rows[0]][c] * det(m, &rows[1..], &sub);
            s += if k % 2 == 0 { t } else { -t };
        }
        s
    }
    fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
        if k == 0 {
            return vec![vec![]];
        }
        if n < k {
            return vec![];
        }
        let mut out = subsets(n - 1, k);
        for mut s in subsets(n - 1, k - 1) {
            s.push(n - 1);
            out.push(s);
        }
        out
    }
    let n = m.len();
    let gcd = |a: i128, b: i128| num_integer::Integer::gcd(&a, &b);
    let mut divisors = vec![1i128];
    for k in 1..=n {
        let mut g = 0;
        for r in subsets(n, k) {
            for c in subsets(n, k) {
                g = gcd(g, det(m, &r, &c));
            }
        }
        if g == 0 {
            break;
        }
        divisors.push(g);
    }
    (1..divisors.len()).map(|k| divisors[k] / divisors[k - 1]).filter(|&d| d != 1).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]
    #[test]
    fn smith_form_matches_minors(entries in proptest::collection::vec(-9i128..=9, 25)) {
        let m: Vec<Vec<i128>> = entries.chunks(5).map(|c| c.to_vec()).collect();
        let s = smith_normal_form(&m).unwrap();
        let nonzero: Vec<i128> = s.invariants().into_iter().filter(|&d| d != 0).collect();
        prop_assert_eq!(nonzero, minors_oracle(&m));
        let d = pcl_core::linalg::mat_mul(&pcl_core::linalg::mat_mul(&s.u, &m).unwrap(), &s.v).unwrap();
        for i in 0..5 {
            for j in 0..5 {
                prop_assert_eq!(d[i][j], if i == j { s.diagonal[i] } else { 0 });
            }
        }
        for w in s.diagonal.windows(2) {
            if w[0] == 0 {
                prop_assert_eq!(w[1], 0);
            } else {
                prop_assert_eq!(w[1] % w[0], 0);
            }
        }
    }
}
