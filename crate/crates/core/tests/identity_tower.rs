use tmcf_core::identity::*;

#[test]
fn identity_suite_through_k5() {
    let t = std::time::Instant::now();
    let certs = verify_identity_suite(5).unwrap();
    for c in &certs {
        eprintln!("{:40} {} {:?}", c.name, c.pass, c.wall_time);
        assert!(
            c.pass,
            "{} failed: {:?}",
            c.name,
            c.failed_checks().collect::<Vec<_>>()
        );
    }
    eprintln!("total {:?}", t.elapsed());
}
