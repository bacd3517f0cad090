use gamma_core::fixtures;
use gamma_core::reduction::{
    apply_oracle, build_substitution, gamma_params_for, normalize_er, verify_reduction, NORMALIZE_SLOPE,
};

#[test]
fn fixtures_end_to_end() {
    for f in fixtures::all().into_iter().chain([fixtures::php_3_2()]) {
        let t0 = std::time::Instant::now();
        let nr = normalize_er(&f.er).unwrap();
        nr.check().unwrap();
        let p = gamma_params_for(&nr).unwrap();
        let sigma = build_substitution(&nr, p).unwrap();
        let report = verify_reduction(f.delta(), &sigma).unwrap();
        assert!(report.is_valid(), "{}: {:?}", f.name, &report.failures[..report.failures.len().min(5)]);
        let w = f.delta().iter().map(|c| c.width()).max().unwrap();
        assert!(sigma.width() <= w.max(3));
        let bound = NORMALIZE_SLOPE
            * (f.n() as usize + f.er.extensions.len() + 1)
            * f.er.proof.steps.len()
            + f.delta().len();
        assert!(nr.steps.len() <= bound, "{}: k={} > {bound}", f.name, nr.steps.len());
        for a in 0..1u32 << f.n() {
            let alpha: Vec<bool> = (0..f.n()).map(|i| (a >> i) & 1 == 1).collect();
            let ans = apply_oracle(f.delta(), &sigma, &alpha).unwrap();
            assert!(!ans.delta_clause.eval(|v| alpha[v.index() as usize - 1]));
            assert!(ans.max_queries_per_var <= w);
        }
        eprintln!(
            "{}: k(pi)={} s={} k={} t={} clauses={} a={} b={} c={} in {:?}",
            f.name,
            f.er.proof.steps.len(),
            nr.s(),
            nr.k(),
            p.t(),
            report.total,
            report.case_a,
            report.case_b,
            report.case_c,
            t0.elapsed()
        );
    }
}
