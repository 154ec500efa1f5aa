//! Randomized invariants: generating-function symmetry, interpolation
//! linearity/cardinality, spectral conjugate symmetry.

use num_complex::Complex64;
use proptest::prelude::*;
use std::sync::OnceLock;

use holoctf::fields::{choose_odd_fresnel, nudft_at, Grid2D, RealField2D};
use holoctf::genfn::{build_genfn, GenFn, GenFnKind, ZeroTable};
use holoctf::pw::{interpolate, interpolate_even, InterpConfig, SampleSet};

const SUPPORTED: [(GenFnKind, u32); 7] = [
    (GenFnKind::Phase, 1),
    (GenFnKind::Phase, 3),
    (GenFnKind::Phase, 5),
    (GenFnKind::Phase, 2),
    (GenFnKind::Phase, 4),
    (GenFnKind::Attenuation, 1),
    (GenFnKind::Attenuation, 3),
];

fn setup() -> &'static Vec<(GenFn, ZeroTable)> {
    static CELL: OnceLock<Vec<(GenFn, ZeroTable)>> = OnceLock::new();
    CELL.get_or_init(|| {
        SUPPORTED
            .iter()
            .map(|&(kind, f)| {
                let g = build_genfn(kind, f).unwrap();
                let tab = g.zeros_up_to(25.0, 0).unwrap();
                (g, tab)
            })
            .collect()
    })
}

fn complex_strategy() -> impl Strategy<Value = Complex64> {
    (-3.0f64..3.0, -3.0f64..3.0).prop_map(|(re, im)| Complex64::new(re, im))
}

fn samples_strategy(n: usize) -> impl Strategy<Value = SampleSet> {
    (
        proptest::collection::vec(complex_strategy(), n),
        proptest::collection::vec(complex_strategy(), n),
    )
        .prop_map(|(values_pos, values_neg)| SampleSet { values_pos, values_neg })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn genfn_is_even(which in 0usize..SUPPORTED.len(), t in -20.0f64..20.0) {
        let (g, _) = &setup()[which];
        // evenness must be exact: everything is a function of t²
        prop_assert_eq!(g.eval(t), g.eval(-t));
    }

    #[test]
    fn interpolation_is_linear(
        which in 0usize..SUPPORTED.len(),
        t in -10.0f64..10.0,
        a in complex_strategy(),
        b in complex_strategy(),
        seed in any::<u64>(),
    ) {
        let (g, tab) = &setup()[which];
        let n = tab.entries.len();
        let mut state = seed | 1;
        let mut rnd = move || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (state >> 11) as f64 / (1u64 << 53) as f64 - 0.5
        };
        let mut draw = |_: usize| Complex64::new(rnd(), rnd());
        let s1 = SampleSet {
            values_pos: (0..n).map(&mut draw).collect(),
            values_neg: (0..n).map(&mut draw).collect(),
        };
        let s2 = SampleSet {
            values_pos: (0..n).map(&mut draw).collect(),
            values_neg: (0..n).map(&mut draw).collect(),
        };
        let combo = SampleSet {
            values_pos: (0..n).map(|j| a * s1.values_pos[j] + b * s2.values_pos[j]).collect(),
            values_neg: (0..n).map(|j| a * s1.values_neg[j] + b * s2.values_neg[j]).collect(),
        };
        let cfg = InterpConfig::new(n).unwrap();
        let v = interpolate(g, tab, &combo, t, &cfg).unwrap();
        let v1 = interpolate(g, tab, &s1, t, &cfg).unwrap();
        let v2 = interpolate(g, tab, &s2, t, &cfg).unwrap();
        let want = a * v1 + b * v2;
        prop_assert!((v - want).norm() <= 1e-11 * want.norm().max(1.0),
            "{v} vs {want}");
    }

    #[test]
    fn interpolation_is_cardinal_at_zeros(
        which in 0usize..SUPPORTED.len(),
        j in 0usize..8,
        negate in any::<bool>(),
        seed in any::<u64>(),
    ) {
        let (g, tab) = &setup()[which];
        let n = tab.entries.len();
        prop_assume!(j < n);
        let mut state = seed | 1;
        let mut rnd = move || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (state >> 11) as f64 / (1u64 << 53) as f64 - 0.5
        };
        let mut draw = |_: usize| Complex64::new(rnd(), rnd());
        let s = SampleSet {
            values_pos: (0..n).map(&mut draw).collect(),
            values_neg: (0..n).map(&mut draw).collect(),
        };
        let cfg = InterpConfig::new(n).unwrap();
        let t = if negate { -tab.entries[j].lambda } else { tab.entries[j].lambda };
        let want = if negate { s.values_neg[j] } else { s.values_pos[j] };
        for v in [
            interpolate(g, tab, &s, t, &cfg).unwrap(),
            interpolate_even(g, tab, &s, t, &cfg).unwrap(),
        ] {
            prop_assert!((v - want).norm() <= 1e-12, "{v} vs {want}");
        }
    }

    #[test]
    fn spectra_of_real_fields_are_hermitian(
        seed in any::<u64>(),
        e1 in -5.0f64..5.0,
        e2 in -5.0f64..5.0,
    ) {
        let grid = Grid2D::new(8, 2.0).unwrap();
        let mut state = seed | 1;
        let mut rnd = move || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (state >> 11) as f64 / (1u64 << 53) as f64 - 0.5
        };
        let field = RealField2D::from_fn(grid, |_, _| rnd());
        let v = nudft_at(&field, &[[e1, e2], [-e1, -e2]]);
        prop_assert!((v[0] - v[1].conj()).norm() <= 1e-13);
    }

    #[test]
    fn odd_fresnel_choice_is_sound(f_raw in 1e-3f64..1e3) {
        let (f_odd, scale) = choose_odd_fresnel(f_raw).unwrap();
        prop_assert_eq!(f_odd % 2, 1);
        prop_assert!(f_odd as f64 >= f_raw);
        prop_assert!(f_odd as f64 - f_raw < 2.0);
        // scaling the support diameter by `scale` realizes exactly f_odd
        prop_assert!((scale * scale * f_raw - f_odd as f64).abs() <= 1e-12 * f_odd as f64);
    }

    #[test]
    fn zero_signs_match_parity(which in 0usize..SUPPORTED.len(), j in 0usize..20) {
        let (g, tab) = &setup()[which];
        prop_assume!(j < tab.entries.len());
        let e = &tab.entries[j];
        // (−1)^l via the chirp at the zero, f-periodized: both channels
        // carry the object sample with this sign at λ_j
        let ff = g.f as f64;
        let chirp = match g.kind {
            GenFnKind::Phase => (std::f64::consts::PI * e.lambda * e.lambda / ff).sin(),
            GenFnKind::Attenuation => (std::f64::consts::PI * e.lambda * e.lambda / ff).cos(),
        };
        prop_assert!((chirp - e.sign()).abs() <= 1e-9);
    }
}
