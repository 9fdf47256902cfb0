//! Riemann zeta at integers and the products built from it.

const EM_TERMS: usize = 20;
// B_2, B_4, ..., B_12
const BERNOULLI: [f64; 6] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
];

/// `ζ(s)` for real `s > 1` by Euler–Maclaurin summation.
pub fn zeta(s: f64) -> f64 {
    assert!(s > 1.0, "zeta diverges at s <= 1");
    let n = EM_TERMS as f64;
    // sum the small terms from the tail up for accuracy
    let mut head = 0.0;
    for k in (1..EM_TERMS).rev() {
        head += (k as f64).powf(-s);
    }
    let mut tail = n.powf(1.0 - s) / (s - 1.0) + 0.5 * n.powf(-s);
    let mut rising = s; // s (s+1) ... (s+2j-2)
    let mut fact = 2.0; // (2j)!
    for (j, b) in BERNOULLI.iter().enumerate() {
        let j = j + 1;
        tail += b / fact * rising * n.powf(-s - (2 * j - 1) as f64);
        rising *= (s + (2 * j - 1) as f64) * (s + (2 * j) as f64);
        fact *= ((2 * j + 1) * (2 * j + 2)) as f64;
    }
    head + tail
}

/// `∏_{i >= from} ζ(i)^{-1}` for integer `from >= 2`.
pub fn zeta_inverse_product(from: u32) -> f64 {
    assert!(from >= 2);
    let mut p = 1.0;
    let mut i = from;
    loop {
        let z = zeta(i as f64);
        if z - 1.0 < 1e-17 {
            return p;
        }
        p /= z;
        i += 1;
    }
}

/// `2 Σ_{i>=1} ∏_{j<i} p_j - 1` with `p_j = 1 - ∏_{k>j} ζ(k)^{-1}`.
pub fn expected_phases() -> f64 {
    2.0 * phases_inner_sum() - 1.0
}

/// `p_j = 1 - ∏_{k >= j+1} ζ(k)^{-1}`.
pub fn phase_continue_probability(j: u32) -> f64 {
    1.0 - zeta_inverse_product(j + 1)
}

pub fn phases_inner_sum() -> f64 {
    let mut sum = 0.0;
    let mut term = 1.0;
    let mut i = 1;
    while term >= 1e-10 {
        sum += term;
        term *= phase_continue_probability(i);
        i += 1;
    }
    sum
}
