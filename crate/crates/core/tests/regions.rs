use num_rational::Ratio;
use proptest::prelude::*;
use ssops::regions::{
    lemma_one, lemma_two, polygon_csv, region_polygon, region_svg, remark_one, theorem_one, theorem_one_bounds,
    theorem_two, theorem_two_bounds, RegionQuery,
};
use ssops::RationalQuery;

type Q = Ratio<i64>;

fn r(a: i64, b: i64) -> Q {
    Q::new(a, b)
}

#[test]
fn theorem_one_examples() {
    let (lo, hi) = theorem_one_bounds(2, &r(1, 1), &r(1, 2));
    assert_eq!((lo, hi), (r(7, 12), r(11, 12)));
    let q = RationalQuery::new(2, r(1, 1), r(1, 1), r(1, 2), Some(r(1, 2))).unwrap();
    let v = theorem_one(&q).unwrap();
    assert!(!v.admissible);
    assert_eq!(v.violated(), vec!["alpha/n = 1/p - 1/q", "1/p interval"]);
}

#[test]
fn half_smoothness_bounds_match_their_specialised_form() {
    // At s = 1/2: (n−1)/(2n) + ((n+1)/(2n)) t < 1/p < (n+1)/(2n) + ((n−1)/(2n)) t.
    for n in [2i64, 3, 4, 7] {
        for k in 0..=12 {
            let t = r(k, 12);
            let (lo, hi) = theorem_one_bounds(n as u32, &r(1, 2), &t);
            assert_eq!(lo, r(n - 1, 2 * n) + r(n + 1, 2 * n) * t);
            assert_eq!(hi, r(n + 1, 2 * n) + r(n - 1, 2 * n) * t);
            let (lo, hi) = theorem_two_bounds(n as u32, &r(1, 2), &t);
            assert_eq!(lo, r(n - 1, 2 * n) - r(n + 1, 2 * n) * t);
            assert_eq!(hi, r(n + 1, 2 * n) + r(n + 1, 2 * n) * t);
        }
    }
}

#[test]
fn theorem_two_examples() {
    assert_eq!(theorem_two_bounds(3, &r(1, 2), &r(1, 3)), (r(1, 9), r(8, 9)));
    assert_eq!(theorem_two_bounds(2, &r(1, 1), &r(1, 4)), (r(1, 24), r(23, 24)));
    assert_eq!(theorem_two_bounds(3, &r(2, 1), &r(0, 1)), (r(2, 12), r(10, 12)));
    let q = RationalQuery::new(3, r(1, 2), r(1, 1), r(1, 2), None).unwrap();
    assert!(theorem_two(&q).unwrap().admissible);
}

#[test]
fn remark_one_examples() {
    let q = |alpha: Q| RationalQuery::new(3, r(0, 1), alpha, r(1, 2), Some(r(1, 2))).unwrap();
    assert!(remark_one(&q(r(3, 2))).unwrap().admissible);
    assert!(!remark_one(&q(r(14, 10))).unwrap().admissible);
    assert!(theorem_two(&RationalQuery::new(3, r(1, 2), r(14, 10), r(1, 2), None).unwrap()).is_ok());
    let at_n = remark_one(&q(r(3, 1))).unwrap();
    assert!(!at_n.admissible && at_n.boundary);
}

#[test]
fn lemma_one_examples() {
    let q = RationalQuery::from_exponents(2, r(0, 1), r(1, 1), r(4, 3), Some(r(4, 1))).unwrap();
    assert!(lemma_one(&q).unwrap().admissible);
    let q = RationalQuery::from_exponents(2, r(0, 1), r(2, 5), r(4, 3), Some(r(4, 1))).unwrap();
    assert!(!lemma_one(&q).unwrap().admissible);
    let q = RationalQuery::new(2, r(0, 1), r(1, 5), r(1, 3), None).unwrap();
    assert!(lemma_one(&q).unwrap().admissible);
}

#[test]
fn lemma_two_examples() {
    // s = 1, n = 3, α = 1: 1/6 = 1/p − 1/q and 1/2 ≤ 1/p ≤ 2/3.
    let q = RationalQuery::new(3, r(1, 1), r(1, 1), r(2, 3), Some(r(1, 2))).unwrap();
    assert!(lemma_two(&q).unwrap().admissible);
    let q = RationalQuery::new(3, r(1, 1), r(1, 1), r(3, 4), Some(r(7, 12))).unwrap();
    assert!(!lemma_two(&q).unwrap().admissible);
    // s = 0: the interval collapses to the single point 1/p = 1/2 + α/(2n).
    let q = RationalQuery::new(2, r(0, 1), r(1, 1), r(3, 4), Some(r(1, 4))).unwrap();
    assert!(lemma_two(&q).unwrap().admissible);
    let q = RationalQuery::new(2, r(0, 1), r(1, 1), r(2, 3), Some(r(1, 6))).unwrap();
    assert!(!lemma_two(&q).unwrap().admissible);
}

#[test]
fn lemma_two_branches_agree_at_half() {
    for inv_p in [r(1, 2), r(5, 8), r(3, 4), r(4, 5)] {
        for inv_q in [r(1, 4), r(3, 8), r(1, 2)] {
            let q = RationalQuery::new(2, r(1, 2), r(1, 1), inv_p, Some(inv_q)).unwrap();
            let below = lemma_two(&q).unwrap();
            // Same data through the s ≥ 1/2 formulas.
            let t = r(1, 2);
            let upper_branch = inv_p - inv_q == t / 2 && inv_p >= r(1, 2) && inv_p <= r(1, 2) + t / 2;
            assert_eq!(below.admissible, upper_branch, "1/p={inv_p} 1/q={inv_q}");
        }
    }
}

#[test]
fn corollary_coefficients() {
    // α/n = 2/(n+1): the wave-estimate interval.
    for n in 2i64..8 {
        for s in [r(1, 4), r(1, 2), r(3, 1)] {
            let t = r(2, n + 1);
            let d = r(2 * n - 2, 1) + r(4, 1) * s;
            let lo = r(n - 1, 1) / d + (r(4, 1) * s + r(n - 1, 1)) / d * t;
            let hi = (r(n - 1, 1) + r(4, 1) * s) / d + r(n - 1, 1) / d * t;
            assert_eq!(theorem_one_bounds(n as u32, &s, &t), (lo, hi));
        }
    }
}

#[test]
fn polygon_limits() {
    let rows = region_polygon(3, r(1, 2), 5).unwrap();
    assert_eq!(rows.len(), 5);
    assert_eq!((rows[0].inv_p_lower, rows[0].inv_p_upper), (r(2, 6), r(4, 6)));
    assert_eq!((rows[4].inv_p_lower, rows[4].inv_p_upper), (r(1, 1), r(1, 1)));
    assert_eq!((rows[2].inv_p_lower, rows[2].inv_p_upper), (r(2, 3), r(5, 6)));
    let csv = polygon_csv(&rows);
    assert!(csv.starts_with("alpha_over_n,inv_p_lower,inv_p_upper,s,n\n"));
    assert!(csv.contains("\n0.5,0.666666666666667,0.833333333333333,0.5,3\n"), "{csv}");
    // Large s: the interval tends to (α/n, 1).
    let rows = region_polygon::<f64>(3, 1e9, 3).unwrap();
    assert!((rows[1].inv_p_lower - 0.5).abs() < 1e-8 && (rows[1].inv_p_upper - 1.0).abs() < 1e-8);
    assert!(region_polygon::<f64>(3, 0.5, 1).is_err());
}

#[test]
fn svg_is_well_formed() {
    let svg = region_svg(3, 0.5, 1.5).unwrap();
    assert!(svg.starts_with("<svg") && svg.trim_end().ends_with("</svg>"));
    assert!(svg.contains("<polygon"));
    assert!(region_svg(3, 0.5, 3.0).is_err());
}

fn small_ratio() -> impl Strategy<Value = Q> {
    (1i64..60, 1i64..60).prop_map(|(a, b)| r(a, a + b))
}

proptest! {
    #[test]
    fn duality_reflection(n in 2u32..8, s in (1i64..40).prop_map(|k| r(k, 8)), t in small_ratio(), inv_p in small_ratio()) {
        let inv_q = inv_p - t;
        prop_assume!(inv_q > r(0, 1));
        let alpha = t * r(n as i64, 1);
        let a = RationalQuery::new(n, s, alpha, inv_p, Some(inv_q)).unwrap();
        let b = RationalQuery::new(n, s, alpha, r(1, 1) - inv_q, Some(r(1, 1) - inv_p)).unwrap();
        let (va, vb) = (theorem_one(&a).unwrap(), theorem_one(&b).unwrap());
        prop_assert_eq!(va.admissible, vb.admissible);
        // The bounds swap under the reflection.
        let (lo, hi) = theorem_one_bounds(n, &s, &t);
        prop_assert_eq!(lo + hi, r(1, 1) + t);
    }

    #[test]
    fn monotone_widening(n in 2u32..8, s1 in 1i64..40, ds in 1i64..40, t in small_ratio()) {
        let (a, b) = (r(s1, 8), r(s1 + ds, 8));
        let (lo1, hi1) = theorem_one_bounds(n, &a, &t);
        let (lo2, hi2) = theorem_one_bounds(n, &b, &t);
        prop_assert!(lo2 <= lo1 && hi1 <= hi2);
    }

    #[test]
    fn float_and_exact_agree(n in 2u32..6, s in 1i64..16, t in small_ratio(), inv_p in small_ratio()) {
        let inv_q = inv_p - t;
        prop_assume!(inv_q > r(0, 1));
        let alpha = t * r(n as i64, 1);
        let exact = theorem_one(&RationalQuery::new(n, r(s, 4), alpha, inv_p, Some(inv_q)).unwrap()).unwrap();
        let f = |x: Q| *x.numer() as f64 / *x.denom() as f64;
        let float = theorem_one(&RegionQuery::<f64>::new(n, s as f64 / 4.0, f(alpha), f(inv_p), Some(f(inv_q))).unwrap()).unwrap();
        prop_assert_eq!(exact.admissible, float.admissible);
    }

    #[test]
    fn lemma_two_continuity(n in 2u32..6, t in small_ratio(), inv_p in small_ratio(), inv_q in small_ratio()) {
        prop_assume!(inv_q <= inv_p);
        let alpha = t * r(n as i64, 1);
        let q = RationalQuery::new(n, r(1, 2), alpha, inv_p, Some(inv_q)).unwrap();
        let v = lemma_two(&q).unwrap();
        let upper = inv_p - inv_q == t / 2 && inv_p >= r(1, 2) && inv_p <= r(1, 2) + t / 2;
        prop_assert_eq!(v.admissible, upper);
    }
}
