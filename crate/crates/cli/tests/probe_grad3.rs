use rwov_core::models::{Mlp, MlpHyper};

#[test]
#[ignore]
fn probe_analytic_vs_numeric() {
    let hyper = MlpHyper::<f64> { l2: 0.0, seed: 99, ..MlpHyper::default() };
    let model = Mlp::<f64>::init(&[2, 3, 2, 1], hyper).unwrap();
    let x = vec![vec![0.4, -0.7], vec![-1.1, 0.3], vec![0.9, 0.8]];
    let y = vec![0u8, 1, 1];
    let (gw, gb) = model.gradients(&x, &y);
    let eps = 1e-6;
    let mut probe = model.clone();
    for l in 0..model.weights.len() {
        for i in 0..model.weights[l].len() {
            let orig = probe.weights[l][i];
            probe.weights[l][i] = orig + eps;
            let plus = probe.loss(&x, &y);
            probe.weights[l][i] = orig - eps;
            let minus = probe.loss(&x, &y);
            probe.weights[l][i] = orig;
            let numeric = (plus - minus) / (2.0 * eps);
            println!("w[{l}][{i}] analytic {:.8} numeric {numeric:.8}", gw[l][i]);
        }
        for i in 0..model.biases[l].len() {
            let orig = probe.biases[l][i];
            probe.biases[l][i] = orig + eps;
            let plus = probe.loss(&x, &y);
            probe.biases[l][i] = orig - eps;
            let minus = probe.loss(&x, &y);
            probe.biases[l][i] = orig;
            let numeric = (plus - minus) / (2.0 * eps);
            println!("b[{l}][{i}] analytic {:.8} numeric {numeric:.8}", gb[l][i]);
        }
    }
}
