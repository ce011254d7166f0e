use exactform::exact::{check_exact, cost_model_standard, CheckMethod};
use exactform::expr::{eval_numeric, Assignment};
use exactform::fuzz::{derive_form, generate_potential, run_trials, FuzzConfig, GenConfig};
use exactform::numcheck::{gradient_check, path_independence_check, reconstruct_potential, PATH_TOLERANCE};
use exactform::sample::SampleConfig;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn five_hundred_trials_round_trip() {
    let summary = run_trials(&FuzzConfig::new(2024, 500, 2, 5, 8).unwrap());
    let failures: Vec<_> = summary.failures().collect();
    assert!(failures.is_empty(), "{failures:#?}");
    for r in &summary.reports {
        let tally = r.basic_tally.unwrap();
        assert_eq!((tally.integrations, tally.differentiations), (r.num_vars, 0));
    }
}

#[test]
fn standard_tally_is_reported_next_to_the_model() {
    let summary = run_trials(&FuzzConfig::new(5, 40, 2, 5, 8).unwrap());
    for r in &summary.reports {
        let tally = r.standard_tally.unwrap();
        assert_eq!(tally.differentiations, r.num_vars - 1);
        assert!(tally.integrations <= r.num_vars);
        assert!(tally.total() as u64 <= cost_model_standard(r.num_vars as u32).unwrap());
    }
}

#[test]
fn derived_forms_are_symbolically_exact() {
    for stream in 0..100 {
        let cfg = GenConfig::new(11, 2 + stream as usize % 5, 1 + stream as usize % 8).unwrap().with_stream(stream);
        let p = generate_potential(&cfg);
        let report = check_exact(&derive_form(&p.expr, &p.vars), &SampleConfig::default());
        assert!(report.exact && report.method == CheckMethod::Symbolic, "{}", p.expr);
    }
}

#[test]
fn line_integrals_recover_generated_potentials() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for stream in 0..20 {
        let cfg = GenConfig::new(3, 2 + stream as usize % 3, 4).unwrap().with_stream(stream);
        let p = generate_potential(&cfg);
        let form = derive_form(&p.expr, &p.vars);
        assert!(gradient_check(&p.expr, &form, &p.domain, 20).unwrap().passed);
        let point = |rng: &mut ChaCha8Rng| -> Vec<f64> {
            p.vars.iter().map(|v| {
                let (lo, hi) = p.domain.interval(v);
                rng.gen_range(lo..=hi)
            }).collect()
        };
        let at = |xs: &[f64]| {
            let a: Assignment = p.vars.iter().cloned().zip(xs.iter().copied()).collect();
            eval_numeric(&p.expr, &a).unwrap()
        };
        let (a, b) = (point(&mut rng), point(&mut rng));
        let got = reconstruct_potential(&form, &a, &b).unwrap();
        assert!((got - (at(&b) - at(&a))).abs() < PATH_TOLERANCE, "{}", p.expr);
        assert!(path_independence_check(&form, &a, &b).unwrap().passed);
    }
}
