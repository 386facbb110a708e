use amd_relay::amd::AmdParams;
use amd_relay::games::adversaries::Corrupter;
use amd_relay::games::{
    run_forge_relay, run_ind_relay, CorruptionMode, RelayContext, RunConfig, SssContext,
};
use amd_relay::gf::FieldSpec;
use amd_relay::sss::{AccessStructure, RobustScheme};

fn shamir_3_of_5() -> (RobustScheme, RelayContext) {
    let params = AmdParams::new(FieldSpec::binary(16).unwrap(), 3).unwrap();
    let scheme = RobustScheme::new(AccessStructure::threshold(3, 5).unwrap(), params).unwrap();
    let ctx = RelayContext::new(
        SssContext::robust(&scheme),
        vec![2, 3, 2, 4, 2],
        0.0,
        CorruptionMode::Dynamic,
    )
    .unwrap();
    (scheme, ctx)
}

#[test]
fn guessing_advantage_jumps_at_the_threshold() {
    let (scheme, ctx) = shamir_3_of_5();
    let cfg = RunConfig::new(4000, 21).ungated();
    for k in 0..=5 {
        let r = run_ind_relay(&scheme, &ctx, &Corrupter::with_budget(k), &cfg);
        if k < 3 {
            assert!(r.near_half(), "budget {k}: {}", r.summary_line());
        } else {
            assert!(r.rate > 0.99, "budget {k}: {}", r.summary_line());
        }
    }
}

#[test]
fn gating_zeroes_qualified_corruption() {
    let (scheme, ctx) = shamir_3_of_5();
    let r = run_ind_relay(
        &scheme,
        &ctx,
        &Corrupter::with_budget(3),
        &RunConfig::new(500, 22),
    );
    assert_eq!(r.wins, 0);
    assert!(!r.violation);
}

#[test]
fn forging_with_an_unqualified_set_stays_under_the_bound() {
    let (scheme, ctx) = shamir_3_of_5();
    for k in 0..3 {
        let r = run_forge_relay(
            &scheme,
            &ctx,
            &Corrupter::with_budget(k),
            &RunConfig::new(5000, 23),
        );
        assert!(!r.violation, "budget {k}: {}", r.summary_line());
    }
}

#[test]
fn positive_epsilon_raises_the_bound() {
    let (scheme, _) = shamir_3_of_5();
    let ctx = |eps| {
        RelayContext::new(
            SssContext::robust(&scheme),
            vec![2; 5],
            eps,
            CorruptionMode::Static,
        )
        .unwrap()
    };
    let cfg = RunConfig::new(200, 24);
    let tight = run_forge_relay(&scheme, &ctx(0.0), &Corrupter::unqualified(), &cfg);
    let loose = run_forge_relay(&scheme, &ctx(0.01), &Corrupter::unqualified(), &cfg);
    assert!((loose.bound - tight.bound - 5.0 * 2.0 * 0.01).abs() < 1e-12);
}
