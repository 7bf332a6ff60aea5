use glmn::character::{
    agree_on_interior, bl_char, denominator_check, irr_char, irr_char_variant, CharCache, ConeKind,
    FormalChar, OddRootSet, Variant,
};
use glmn::kl::comp_factors;
use glmn::weight::dominant_weights_in_box;
use glmn::{analyze, Weight};

fn w(s: &str) -> Weight {
    s.parse().unwrap()
}

fn check_character_sum(cache: &CharCache, lam: &Weight) {
    let row = comp_factors(lam, None).unwrap();
    let (m, n) = lam.shape();
    let mut sum = FormalChar::zero(m, n);
    for mu in &row.factors {
        sum.add_scaled(&cache.irr_char(mu, Variant::Floor).unwrap(), 1);
    }
    assert_eq!(cache.kac_char(lam).unwrap(), sum, "Kac({lam})");
}

#[test]
fn character_sum_gl11_gl21() {
    let cache = CharCache::new();
    for lam in dominant_weights_in_box(1, 1, -3, 3) {
        check_character_sum(&cache, &lam);
    }
    for lam in dominant_weights_in_box(2, 1, -2, 2) {
        check_character_sum(&cache, &lam);
    }
}

#[test]
fn character_sum_gl22_atypical() {
    let cache = CharCache::new();
    let mut count = 0;
    for lam in dominant_weights_in_box(2, 2, -1, 1) {
        if analyze(&lam).unwrap().r == 2 {
            count += 1;
        }
        check_character_sum(&cache, &lam);
    }
    assert!(count >= 3);
}

#[test]
fn variants_agree() {
    for lam in dominant_weights_in_box(2, 2, -1, 1) {
        assert_eq!(
            irr_char_variant(&lam, Variant::Floor).unwrap(),
            irr_char_variant(&lam, Variant::Ceiling).unwrap(),
            "{lam}"
        );
    }
}

#[test]
fn irreducible_support_is_below_highest_weight() {
    for lam in dominant_weights_in_box(2, 2, -1, 1) {
        let ch = irr_char(&lam).unwrap();
        assert_eq!(ch.coefficient(&lam), 1);
        for (mu, c) in ch.sorted_terms() {
            assert!(c > 0, "{lam}: {mu} has {c}");
            assert!(below_in_root_order(&lam, &mu), "{lam}: {mu}");
        }
    }
}

/// `lam - mu` is a nonnegative sum of simple roots: partial sums of the
/// coefficient sequence (eps entries, then negated delta entries) are nonnegative and total zero.
fn below_in_root_order(lam: &Weight, mu: &Weight) -> bool {
    let m = lam.m();
    let diff: Vec<i64> = lam
        .entries()
        .iter()
        .zip(mu.entries())
        .enumerate()
        .map(|(k, (a, b))| if k < m { a - b } else { b - a })
        .collect();
    let mut run = 0;
    for d in &diff {
        run += d;
        if run < 0 {
            return false;
        }
    }
    run == 0
}

#[test]
fn totally_disconnected_is_single_bl_term() {
    let lam = w("(3,0|0,3)");
    let st = analyze(&lam).unwrap();
    assert_eq!(st.r, 2);
    assert!(!st.chat[0][1]);
    let gamma = OddRootSet::of_structure(&st);
    assert_eq!(irr_char(&lam).unwrap(), bl_char(&gamma, &lam).unwrap());
}

#[test]
fn totally_connected_is_raised_bl_term() {
    for lam in [
        Weight::zero(2, 2),
        w("(1,1|1,1)"),
        Weight::zero(3, 2),
        Weight::zero(3, 3),
    ] {
        let st = analyze(&lam).unwrap();
        assert!(st.chat[0][st.r - 1]);
        let top = *st.aty.iter().max().unwrap();
        let raised = st.weight_at(&vec![top; st.r]);
        let gamma = OddRootSet::of_structure(&st);
        let bl = bl_char(&gamma, &raised).unwrap();
        let fact: i64 = (1..=st.r as i64).product();
        let sign = if st.level(&vec![top; st.r]) % 2 == 0 {
            1
        } else {
            -1
        };
        assert_eq!(
            irr_char(&lam).unwrap().scaled(fact),
            bl.scaled(sign),
            "{lam}"
        );
    }
}

#[test]
fn denominator_identity() {
    for m in 1..=3 {
        for n in 1..=3 {
            assert!(denominator_check(m, n), "gl({m}|{n})");
        }
    }
}

#[test]
fn normal_cone_is_bl_character() {
    let cache = CharCache::new();
    for lam in [w("(0,0|0,0)"), w("(2,0|0,2)"), w("(1|1)")] {
        let st = analyze(&lam).unwrap();
        let depth = st.r as i64 + 3;
        let cone = cache
            .cone_char_window(ConeKind::Normal, &lam, &st, depth)
            .unwrap();
        let gamma = OddRootSet::of_structure(&st);
        let bl = bl_char(&gamma, &lam).unwrap();
        assert!(agree_on_interior(&cone, &bl, lam.eps_sum(), depth), "{lam}");
    }
}

#[test]
fn truncated_cone_gives_irreducible() {
    let cache = CharCache::new();
    for lam in [
        w("(0,0|0,0)"),
        w("(2,0|0,2)"),
        w("(1,1|0,0)"),
        w("(2,1|0,0)"),
    ] {
        let st = analyze(&lam).unwrap();
        let depth = st.r as i64 + 3;
        let cone = cache
            .cone_char_window(ConeKind::Truncated, &lam, &st, depth)
            .unwrap();
        let irr = cache.irr_char(&lam, Variant::Floor).unwrap();
        assert!(
            agree_on_interior(&cone, &irr, lam.eps_sum(), depth),
            "{lam}"
        );
    }
}
