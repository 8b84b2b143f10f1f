//! Limited tomography of the Toffoli-3 template: an ideal gate gives an
//! anti-diagonal table, while a stray controlled phase does not.

use iongrover::decompose::{cz_template, relative_phase_toffoli_template, toffoli3_template, SignMap};
use iongrover::noise::NoiseModel;
use iongrover::tomography::{limited_tomography, noisy_limited_tomography, tomography_success};

fn main() -> iongrover::Result<()> {
    let signs = SignMap::new();
    let toffoli = toffoli3_template(0, 1, 2, &signs)?;
    let tt = limited_tomography(&toffoli)?;
    let mut out = Vec::new();
    tt.write_csv(&mut out)?;
    print!("{}", String::from_utf8_lossy(&out));
    println!("ideal success {:.6}", tomography_success(&tt)?);

    let mut spurious = toffoli.clone();
    spurious.append(&cz_template(0, 1, &signs)?)?;
    println!("with a stray CZ {:.4}", tomography_success(&limited_tomography(&spurious)?)?);

    let margolus = relative_phase_toffoli_template(0, 1, 2, &signs)?;
    println!("relative-phase Toffoli {:.4}", tomography_success(&limited_tomography(&margolus)?)?);

    let noisy = noisy_limited_tomography(&toffoli, &NoiseModel::new(0.027, 0.0)?, 10_000, 3)?;
    println!("p_xx 0.027: {:.4}", tomography_success(&noisy)?);
    Ok(())
}
