//! The training engine on XOR: a 2-2-1 sigmoid network with momentum.

use scriptid::mlp::{target_for, train_on, MlpModel, TrainConfig};

fn main() -> scriptid::Result<()> {
    let pairs: Vec<(Vec<f64>, Vec<f64>)> =
        [(0.0, 0.0, 0), (0.0, 1.0, 1), (1.0, 0.0, 1), (1.0, 1.0, 0)]
            .iter()
            .map(|&(a, b, y)| (vec![a, b], target_for(y, 1)))
            .collect();
    let model = MlpModel::new(&[2, 2, 1], 1)?;
    let cfg = TrainConfig {
        epochs: 5000,
        seed: 1,
        ..Default::default()
    };
    let out = train_on(&model, &pairs, &cfg)?;

    println!("initial mse {:.4}", out.initial_mse);
    if let Some(e) = out.epoch_mse.iter().position(|&m| m < 0.05) {
        println!("mse < 0.05 after epoch {}", e + 1);
    }
    for (x, _) in &pairs {
        println!("{:?} -> {:.3}", x, out.model.forward(x)?[0]);
    }
    Ok(())
}
