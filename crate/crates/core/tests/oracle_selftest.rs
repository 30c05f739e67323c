mod common;

use common::*;

#[test]
fn oracles_reproduce_textbook_values() {
    assert!(rel(bessel_k1(1.0), 0.601_907_230_197_234_6) < 1e-14);
    assert!(rel(bessel_k1(2.0), 0.139_865_881_816_522_4) < 1e-14);
    // ∫₀¹ √x dx, ∫₀^∞ e^{-x} x^{1/2} dx = Γ(3/2)
    assert!(rel(tanh_sinh(|x| x.sqrt(), 0.0, 1.0, 1e-14), 2.0 / 3.0) < 1e-13);
    assert!(rel(exp_sinh(|x| (-x).exp() * x.sqrt(), 0.0, 1e-14), 0.886_226_925_452_758) < 1e-12);
    // ₂F₁(1,1;2;x) = −ln(1−x)/x
    assert!(rel(hyp2f1_series(1.0, 1.0, 2.0, 0.3), -(0.7f64).ln() / 0.3) < 1e-14);
    // F_D with b2 = 0 collapses to ₂F₁
    assert!(rel(lauricella_fd2(0.7, 1.3, 0.0, 2.1, 0.4, 0.9), hyp2f1_series(0.7, 1.3, 2.1, 0.4)) < 1e-14);
}
