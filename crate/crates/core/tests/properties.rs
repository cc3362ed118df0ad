use num_bigint::BigInt;
use num_integer::Integer;
use periodpoly::closedform::{classify, counts_formula_upto, factorization};
use periodpoly::codes::{build_code, codeword_weight, weight_from_period};
use periodpoly::cycloint::{newton_from_power_sums, power_sums_of, CycloInt, IntPoly};
use periodpoly::ffield::build_field;
use periodpoly::Error;
use periodpoly::periods::{
    coset_index, count_diagonal_power_sums, diagonal_counts_convolution, oracle_period_poly, period_counts,
    reduced_periods,
};
use periodpoly::quadpart::{partitions_for_instance, solve_2b2, solve_d2};
use proptest::prelude::*;

/// (p, s) with q <= 10^4 for p = 3 or 5 mod 8.
const SMALL_FIELDS: [(u64, u32); 9] = [(3, 2), (3, 4), (3, 6), (3, 8), (5, 2), (5, 4), (11, 2), (13, 2), (29, 2)];

fn field_and_order() -> impl Strategy<Value = (u64, u32, u64)> {
    prop::sample::select(SMALL_FIELDS.to_vec()).prop_flat_map(|(p, s)| {
        let q = p.pow(s);
        let divisors: Vec<u64> = (2..=16).filter(|e| (q - 1) % e == 0).collect();
        prop::sample::select(divisors).prop_map(move |e| (p, s, e))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn power_sum_counts_equal_convolution((p, s, e) in field_and_order()) {
        let f = build_field(p, s).unwrap();
        let periods = reduced_periods(&period_counts(&f, e).unwrap());
        let n_max = e.min(6) as u32;
        let conv = diagonal_counts_convolution(&f, e, n_max, 10_000).unwrap();
        for n in 1..=n_max {
            prop_assert_eq!(&count_diagonal_power_sums(&f, e, n, &periods).unwrap(), &conv[n as usize - 1]);
        }
    }

    #[test]
    fn count_rows_sum_to_q_and_periods_sum_to_zero((p, s, e) in field_and_order()) {
        let f = build_field(p, s).unwrap();
        let pc = period_counts(&f, e).unwrap();
        prop_assert!(pc.rows().iter().all(|r| r.iter().sum::<u64>() == f.q()));
        let total = reduced_periods(&pc).iter().fold(CycloInt::zero(p), |acc, z| acc.add(z).unwrap());
        prop_assert!(total.is_zero());
    }

    #[test]
    fn spectrum_is_generator_independent((p, s, e) in field_and_order(), k in 2u64..200) {
        let f = build_field(p, s).unwrap();
        let qm1 = f.q() - 1;
        prop_assume!(k.gcd(&qm1) == 1);
        let g = f.with_generator(f.pow(f.gamma(), k)).unwrap();
        prop_assert_eq!(oracle_period_poly(&f, e).unwrap(), oracle_period_poly(&g, e).unwrap());
    }

    #[test]
    fn newton_recovers_products_of_linear_factors(roots in prop::collection::vec(-50i64..50, 1..10)) {
        let poly = roots.iter().fold(IntPoly::one(), |acc, r| acc.mul(&IntPoly::linear(&BigInt::from(*r))));
        let again = newton_from_power_sums(&power_sums_of(&poly, roots.len())).unwrap();
        prop_assert_eq!(&again, &poly);
        for r in &roots {
            prop_assert_eq!(poly.eval(&BigInt::from(*r)), BigInt::from(0));
        }
    }

    #[test]
    fn two_b2_partition_is_a_representation(p in prop::sample::select(vec![3u64, 11, 19, 43, 59, 67]), k in 1u32..10) {
        let sol = solve_2b2(p, k).unwrap();
        let n = BigInt::from(p).pow(k);
        prop_assert_eq!(sol.a() * sol.a() + 2 * sol.b() * sol.b(), n);
        prop_assert_eq!(sol.a().mod_floor(&BigInt::from(4)), BigInt::from(3));
    }

    #[test]
    fn d2_partition_is_a_representation(p in prop::sample::select(vec![5u64, 13, 29, 37, 53, 61]), k in 1u32..10) {
        let sol = solve_d2(p, k).unwrap();
        let n = BigInt::from(p).pow(k);
        prop_assert_eq!(sol.c() * sol.c() + sol.d() * sol.d(), n);
        prop_assert_eq!(sol.c().mod_floor(&BigInt::from(4)), BigInt::from(3));
    }

    #[test]
    fn codeword_weight_follows_its_coset_period(idx in 1u64..6561) {
        let f = build_field(3, 8).unwrap();
        let c = build_code(3, 1, 8, 16).unwrap();
        let periods = reduced_periods(&period_counts(&f, c.e()).unwrap());
        let beta = f.element(idx);
        let j = coset_index(&f, c.e(), &beta).unwrap() as usize;
        let expect = weight_from_period(&c, periods[j].as_integer().unwrap()).unwrap();
        prop_assert_eq!(codeword_weight(&f, &c, &beta).unwrap(), expect);
    }
}

#[test]
fn closed_forms_match_oracle_on_small_fields() {
    let mut checked = 0;
    for (p, s) in SMALL_FIELDS {
        let q = p.pow(s);
        for m in 2..=4u32 {
            if (q - 1) % (1 << m) != 0 {
                continue;
            }
            let tag = classify(p, s, m).unwrap();
            let parts = partitions_for_instance(&tag).unwrap();
            let fp = match factorization(&tag, &parts) {
                Err(Error::Unsupported(_)) => continue,
                other => other.unwrap(),
            };
            checked += 1;
            let f = build_field(p, s).unwrap();
            let e = 1u64 << m;
            assert_eq!(fp.expand(), oracle_period_poly(&f, e).unwrap(), "p = {p}, s = {s}, m = {m}");
            let periods = reduced_periods(&period_counts(&f, e).unwrap());
            let formula = counts_formula_upto(&tag, &parts, e as u32).unwrap();
            for n in 1..=e as u32 {
                assert_eq!(formula[n as usize - 1], count_diagonal_power_sums(&f, e, n, &periods).unwrap());
            }
        }
    }
    assert!(checked >= 10, "only {checked} instances had a closed form");
}
