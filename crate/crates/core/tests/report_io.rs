use hjoints::config::{generic_hyperplanes, generically_induced, JointsConfiguration};
use hjoints::extremal::SimpleHypergraph;
use hjoints::field::Gf61;
use hjoints::hypergraph::{Hypergraph, WeightFunction};
use hjoints::io::{
    config_to_text, host_to_text, hypergraph_to_text, parse_config_file, parse_host, parse_hypergraph, parse_weights,
    read_text, weights_to_text, write_text,
};
use hjoints::rational::{ratio, Rational};
use hjoints::report::{inputs_digest, CheckRecord, Status, VerificationReport};
use proptest::prelude::*;

fn arb_record() -> impl Strategy<Value = CheckRecord> {
    ("[a-z.]{1,12}", any::<f64>(), any::<f64>(), -1e3f64..1e3, 0.0f64..1.0).prop_map(|(n, l, r, s, t)| CheckRecord::from_slack(n, l, r, s, t))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn status_is_fail_iff_slack_below_tolerance(s in -1.0f64..1.0, t in 0.0f64..0.5) {
        let r = CheckRecord::from_slack("x", 0.0, 0.0, s, t);
        prop_assert_eq!(r.status == Status::Fail, s < -t);
    }

    #[test]
    fn reports_round_trip(checks in proptest::collection::vec(arb_record(), 0..6), seeds in proptest::collection::vec(any::<u64>(), 0..3), secs in 0.0f64..100.0) {
        let mut r = VerificationReport::new("suite", inputs_digest(&[b"a", b"bc"]));
        for c in checks {
            r.push(c);
        }
        r.seeds = seeds;
        let back = VerificationReport::from_json(&r.to_json()).unwrap();
        prop_assert_eq!(&back, &r);
        prop_assert_eq!(back.digest(), r.digest());
        let mut timed = r.clone();
        timed.timing.wall_seconds = secs;
        prop_assert_eq!(timed.digest(), r.digest());
        prop_assert_eq!(r.exit_code(), r.checks.iter().any(|c| c.status == Status::Fail) as i32);
    }

    #[test]
    fn weights_round_trip(ws in proptest::collection::vec((0i64..50, 1i64..20), 1..6)) {
        let w = WeightFunction::new(ws.iter().map(|&(a, b)| ratio(a, b)).collect()).unwrap();
        let back = parse_weights(&weights_to_text(&w)).unwrap();
        prop_assert_eq!(back.weights(), w.weights());
    }
}

#[test]
fn digest_separates_parts() {
    assert_ne!(inputs_digest(&[b"ab", b"c"]), inputs_digest(&[b"a", b"bc"]));
    assert_eq!(inputs_digest(&[b"ab"]), inputs_digest(&[b"ab"]));
}

#[test]
fn files_round_trip_on_disk() {
    let dir = std::env::temp_dir().join(format!("hjoints-io-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let h = Hypergraph::cycle(5);
    let hp = dir.join("c5.hg");
    write_text(&hp, &hypergraph_to_text(&h)).unwrap();
    assert_eq!(parse_hypergraph(&read_text(&hp).unwrap()).unwrap(), h);

    let host = SimpleHypergraph::complete(5, 2);
    assert_eq!(parse_host(&host_to_text(&host)).unwrap(), host);

    let k3 = Hypergraph::complete_codim1(3);
    let fam = generic_hyperplanes::<Gf61>(5, 3, 3).unwrap();
    let cfg = generically_induced(&host, &k3, &fam).unwrap();
    let cp = dir.join("k3.cfg");
    write_text(&cp, &config_to_text(&cfg)).unwrap();
    let back: JointsConfiguration<Gf61> = parse_config_file(&read_text(&cp).unwrap()).unwrap().to_config().unwrap();
    assert_eq!(back, cfg);
    assert!(parse_config_file(&read_text(&cp).unwrap()).unwrap().to_config::<Rational>().is_err());
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn malformed_inputs_are_rejected() {
    assert!(parse_hypergraph("{").is_err());
    assert!(parse_hypergraph(r#"{"d": 3, "edges": [[1, 4]]}"#).is_err());
    // a full edge parses but has no flat dimension
    assert!(parse_hypergraph(r#"{"d": 3, "edges": [[1, 2, 3]]}"#).unwrap().validate_uniform_coloring().is_err());
    assert!(parse_weights(r#"{"weights": ["x"]}"#).is_err());
    assert!(read_text(std::path::Path::new("/nonexistent/file.hg")).is_err());
}
