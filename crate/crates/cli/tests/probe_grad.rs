use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rwov_core::models::{mlp_gradient_check, Mlp, MlpHyper};

#[test]
#[ignore]
fn probe_failing_trial() {
    let mut rng = ChaCha8Rng::seed_from_u64(424_242);
    for trial in 0..3u64 {
        let input = rng.gen_range(2..=5usize);
        let mut layers = vec![input];
        if rng.gen_bool(0.3) {
            layers.push(rng.gen_range(2..=5));
        }
        layers.push(rng.gen_range(2..=8));
        layers.push(1);
        let hyper = MlpHyper {
            l2: if trial % 2 == 0 { 1e-3 } else { 0.0 },
            seed: rng.gen(),
            ..MlpHyper::default()
        };
        let model = Mlp::<f64>::init(&layers, hyper).unwrap();
        let batch = rng.gen_range(2..=8usize);
        let x: Vec<Vec<f64>> = (0..batch)
            .map(|_| (0..input).map(|_| rng.gen_range(-1.5..1.5)).collect())
            .collect();
        let y: Vec<u8> = (0..batch).map(|_| u8::from(rng.gen_bool(0.5))).collect();
        let err = mlp_gradient_check(&model, &x, &y, 1e-6);
        println!("trial {trial}: layers {layers:?} batch {batch} y {y:?} err {err}");
        if err > 1e-4 {
            println!("  x = {x:?}");
            println!("  model weights = {:?}", model.weights);
        }
    }
}
