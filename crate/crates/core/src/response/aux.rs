//! Scalar auxiliary functions of ζ.
//!
//! Every function here has removable singularities at ζ = 0 that the direct
//! closed form only reaches through heavy cancellation (h has a 1/ζ⁴), so
//! for |ζ| < SERIES_RADIUS a 22-term Taylor series is used instead.

const SERIES_RADIUS: f64 = 0.5;

/// E = ∫₀¹ e^(−ζε) dε = (1 − e^(−ζ))/ζ.
pub fn e(z: f64) -> f64 {
    if z.abs() < SERIES_RADIUS {
        series(&E_SERIES, z)
    } else {
        -(-z).exp_m1() / z
    }
}

/// (1 − E)/ζ.
pub fn one_minus_e_over_z(z: f64) -> f64 {
    if z.abs() < SERIES_RADIUS {
        series(&ONE_MINUS_E_OVER_Z_SERIES, z)
    } else {
        (1.0 - e(z)) / z
    }
}

/// Σ = 2e^(−ζ)[sinh ζ − ζ].
pub fn sigma(z: f64) -> f64 {
    if z.abs() < SERIES_RADIUS {
        z * z * z * series(&SIGMA_OVER_Z3_SERIES, z)
    } else if z > 20.0 {
        1.0 - (-2.0 * z).exp() - 2.0 * z * (-z).exp()
    } else {
        2.0 * (-z).exp() * (z.sinh() - z)
    }
}

/// Σ/ζ³, finite at the origin.
fn sigma_over_z3(z: f64) -> f64 {
    if z.abs() < SERIES_RADIUS {
        series(&SIGMA_OVER_Z3_SERIES, z)
    } else {
        sigma(z) / (z * z * z)
    }
}

/// g(ζ) = (1 − e^(−ζ)E)/ζ.
pub fn g(z: f64) -> f64 {
    if z.abs() < SERIES_RADIUS {
        series(&G_SERIES, z)
    } else {
        (1.0 - (-z).exp() * e(z)) / z
    }
}

/// h(ζ) = 4(1−E)/ζ³ − 2E/ζ² + E⁴ + Σ(2ζE − 1)/ζ⁴.
pub fn h(z: f64) -> f64 {
    if z.abs() < SERIES_RADIUS {
        series(&H_SERIES, z)
    } else {
        let e = e(z);
        let z2 = z * z;
        4.0 * (1.0 - e) / (z2 * z) - 2.0 * e / z2 + e.powi(4) + sigma(z) * (2.0 * z * e - 1.0) / (z2 * z2)
    }
}

/// h′(ζ) = E⁴ + EΣ/ζ³.
pub fn h_prime(z: f64) -> f64 {
    if z.abs() < SERIES_RADIUS {
        series(&H_PRIME_SERIES, z)
    } else {
        let e = e(z);
        e.powi(4) + e * sigma_over_z3(z)
    }
}

/// {4ζ(1−E) − 2ζ²E − Σ}/ζ⁴, the bracket of the storage FWM trace.
pub fn trm_bracket(z: f64) -> f64 {
    if z.abs() < SERIES_RADIUS {
        series(&TRM_BRACKET_SERIES, z)
    } else {
        let e = e(z);
        let z2 = z * z;
        (4.0 * z * (1.0 - e) - 2.0 * z2 * e - sigma(z)) / (z2 * z2)
    }
}

/// (e^ζE − 1)/ζ = ∫₀¹ (1−ε) e^(ζε) dε.
pub fn j1(z: f64) -> f64 {
    if z.abs() < SERIES_RADIUS {
        series(&J1_SERIES, z)
    } else {
        (z.exp_m1() / z - 1.0) / z
    }
}

/// (e^ζE − 2 + E)/ζ² = ∫₀¹ e^(−ζε) [(e^(ζε) − 1)/ζ]² dε.
pub fn j2(z: f64) -> f64 {
    if z.abs() < SERIES_RADIUS {
        series(&J2_SERIES, z)
    } else {
        (z.exp_m1() / z - 2.0 + e(z)) / (z * z)
    }
}

fn series(c: &[f64], z: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, &k| acc * z + k)
}

const E_SERIES: [f64; 22] = [
    1.0,
    -0.5,
    0.16666666666666666,
    -0.041666666666666664,
    0.008333333333333333,
    -0.001388888888888889,
    0.0001984126984126984,
    -2.48015873015873e-05,
    2.7557319223985893e-06,
    -2.755731922398589e-07,
    2.505210838544172e-08,
    -2.08767569878681e-09,
    1.6059043836821613e-10,
    -1.1470745597729725e-11,
    7.647163731819816e-13,
    -4.779477332387385e-14,
    2.8114572543455206e-15,
    -1.5619206968586225e-16,
    8.22063524662433e-18,
    -4.110317623312165e-19,
    1.9572941063391263e-20,
    -8.896791392450574e-22,
];
const SIGMA_OVER_Z3_SERIES: [f64; 22] = [
    0.3333333333333333,
    -0.3333333333333333,
    0.18333333333333332,
    -0.07222222222222222,
    0.02261904761904762,
    -0.005952380952380952,
    0.001361331569664903,
    -0.00027667548500881836,
    5.075557158890492e-05,
    -8.50101544545989e-06,
    1.311381519714853e-06,
    -1.876155149964674e-07,
    2.5035284625231715e-08,
    -3.130748831807033e-09,
    3.6840773569492835e-10,
    -4.0939191001221986e-11,
    4.309668028042805e-12,
    -4.309815999477244e-13,
    4.104661043344845e-14,
    -3.731545626569974e-15,
    3.2448385302886073e-16,
    -2.704039200219152e-17,
];
const G_SERIES: [f64; 22] = [
    1.5,
    -1.1666666666666667,
    0.625,
    -0.25833333333333336,
    0.0875,
    -0.0251984126984127,
    0.006324404761904762,
    -0.001408179012345679,
    0.0002819113756613757,
    -5.12816658649992e-05,
    8.549031986531986e-06,
    -1.3153962806740584e-06,
    1.8792522512760608e-07,
    -2.5057461400053994e-08,
    3.132230469780073e-09,
    -3.6850051378432175e-10,
    4.094465772366099e-11,
    -4.30997219154693e-12,
    4.3099763018645533e-13,
    -4.104741292403205e-14,
    3.731583882772962e-15,
    -3.244855937054375e-16,
];
const H_SERIES: [f64; 22] = [
    1.8333333333333333,
    -3.1333333333333333,
    3.0388888888888888,
    -2.153968253968254,
    1.2300595238095238,
    -0.595568783068783,
    0.2521814373897707,
    -0.09532808241141574,
    0.032643957765485544,
    -0.010237348813737703,
    0.002965103817038341,
    -0.0007985358079604111,
    0.00020107760019197685,
    -4.7563637147821514e-05,
    1.0611143993550292e-05,
    -2.2404197258092985e-06,
    4.49052758861745e-07,
    -8.567170664736147e-08,
    1.5595417257423966e-08,
    -2.7146862310946708e-09,
    4.527522279575159e-10,
    -7.247686134955313e-11,
];
const H_PRIME_SERIES: [f64; 22] = [
    1.3333333333333333,
    -2.5,
    2.5722222222222224,
    -1.9,
    1.118452380952381,
    -0.5540674603174603,
    0.23873567019400352,
    -0.09145502645502646,
    0.03163713858158303,
    -0.009998421717171717,
    0.0029128709969483777,
    -0.000787938857879334,
    0.0001990703097577271,
    -4.720682974341208e-05,
    1.0551368997339495e-05,
    -2.230947088143439e-06,
    4.4762819970056557e-07,
    -8.546782876746268e-08,
    1.5567580278223902e-08,
    -2.7110520759048093e-09,
    4.522976746337195e-10,
    -7.242229115507886e-11,
];
const J1_SERIES: [f64; 22] = [
    0.5,
    0.16666666666666666,
    0.041666666666666664,
    0.008333333333333333,
    0.001388888888888889,
    0.0001984126984126984,
    2.48015873015873e-05,
    2.7557319223985893e-06,
    2.755731922398589e-07,
    2.505210838544172e-08,
    2.08767569878681e-09,
    1.6059043836821613e-10,
    1.1470745597729725e-11,
    7.647163731819816e-13,
    4.779477332387385e-14,
    2.8114572543455206e-15,
    1.5619206968586225e-16,
    8.22063524662433e-18,
    4.110317623312165e-19,
    1.9572941063391263e-20,
    8.896791392450574e-22,
    3.868170170630684e-23,
];
const J2_SERIES: [f64; 22] = [
    0.3333333333333333,
    0.0,
    0.016666666666666666,
    0.0,
    0.0003968253968253968,
    0.0,
    5.5114638447971785e-06,
    0.0,
    5.010421677088344e-08,
    0.0,
    3.2118087673643227e-10,
    0.0,
    1.5294327463639633e-12,
    0.0,
    5.622914508691041e-15,
    0.0,
    1.644127049324866e-17,
    0.0,
    3.9145882126782525e-20,
    0.0,
    7.736340341261368e-23,
    0.0,
];
const ONE_MINUS_E_OVER_Z_SERIES: [f64; 22] = [
    0.5,
    -0.16666666666666666,
    0.041666666666666664,
    -0.008333333333333333,
    0.001388888888888889,
    -0.0001984126984126984,
    2.48015873015873e-05,
    -2.7557319223985893e-06,
    2.755731922398589e-07,
    -2.505210838544172e-08,
    2.08767569878681e-09,
    -1.6059043836821613e-10,
    1.1470745597729725e-11,
    -7.647163731819816e-13,
    4.779477332387385e-14,
    -2.8114572543455206e-15,
    1.5619206968586225e-16,
    -8.22063524662433e-18,
    4.110317623312165e-19,
    -1.9572941063391263e-20,
    8.896791392450574e-22,
    -3.868170170630684e-23,
];
const TRM_BRACKET_SERIES: [f64; 22] = [
    0.16666666666666666,
    -0.13333333333333333,
    0.06111111111111111,
    -0.020634920634920634,
    0.005654761904761905,
    -0.0013227513227513227,
    0.0002722663139329806,
    -5.030463363796697e-05,
    8.459261931484154e-06,
    -1.3078485300707523e-06,
    1.8734021710212187e-07,
    -2.5015401999528985e-08,
    3.1294105781539644e-09,
    -3.68323391977298e-10,
    4.093419285499204e-11,
    -4.30938852644442e-12,
    4.3096680280428046e-13,
    -4.104586666168804e-14,
    3.731510039404404e-15,
    -3.244822283973891e-16,
    2.7040321085738392e-17,
    -2.163231360175322e-18,
];

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn e_examples() {
        assert_eq!(e(0.0), 1.0);
        assert_relative_eq!(e(1.0), 1.0 - (-1.0f64).exp(), max_relative = 1e-15);
        assert_relative_eq!(e(-1.0), std::f64::consts::E - 1.0, max_relative = 1e-15);
        assert_relative_eq!(e(1e-9), 1.0 - 0.5e-9, max_relative = 1e-15);
    }

    #[test]
    fn weak_limits() {
        assert_eq!(sigma(0.0), 0.0);
        assert_relative_eq!(sigma(1e-3) / 1e-9, 1.0 / 3.0, max_relative = 2e-3);
        assert_relative_eq!(g(0.0), 1.5);
        assert_relative_eq!(h(0.0), 11.0 / 6.0);
        assert_relative_eq!(h_prime(0.0), 4.0 / 3.0);
        // first-order slopes
        let dz = 1e-6;
        assert_relative_eq!((g(dz) - g(-dz)) / (2.0 * dz), -7.0 / 6.0, max_relative = 1e-6);
        assert_relative_eq!((h_prime(dz) - h_prime(-dz)) / (2.0 * dz), -5.0 / 2.0, max_relative = 1e-6);
        assert_relative_eq!((h(dz) - h(-dz)) / (2.0 * dz), -47.0 / 15.0, max_relative = 1e-6);
    }

    #[test]
    fn strong_limits() {
        let z = 1e4;
        assert_relative_eq!(e(z), 1.0 / z, max_relative = 1e-12);
        assert_relative_eq!(g(z), 1.0 / z, max_relative = 1e-3);
        assert_relative_eq!(sigma(z), 1.0, max_relative = 1e-12);
        assert_relative_eq!(h(z), 2.0 * (z - 1.0) / z.powi(4), max_relative = 1e-3);
        assert_relative_eq!(h_prime(z), 2.0 / z.powi(4), max_relative = 1e-3);
    }

    #[test]
    fn series_and_direct_agree_at_switch() {
        for &z in &[-0.5f64, 0.5, -0.4999999, 0.4999999] {
            let ez = (1.0 - (-z).exp()) / z;
            assert_relative_eq!(e(z), ez, max_relative = 1e-14);
            let sig = 2.0 * (-z).exp() * (z.sinh() - z);
            assert_relative_eq!(sigma(z), sig, max_relative = 1e-12);
            assert_relative_eq!(g(z), (1.0 - (-z).exp() * ez) / z, max_relative = 1e-13);
            let hd = 4.0 * (1.0 - ez) / z.powi(3) - 2.0 * ez / (z * z) + ez.powi(4)
                + sig / z.powi(4) * (2.0 * z * ez - 1.0);
            assert_relative_eq!(h(z), hd, max_relative = 1e-11);
            assert_relative_eq!(h_prime(z), ez.powi(4) + ez * sig / z.powi(3), max_relative = 1e-12);
        }
    }

    #[test]
    fn against_integral_representations() {
        for &z in &[-0.5, 0.3, 2.0, 7.5] {
            let ez = crate::quad::integrate(|t| (-z * t).exp(), 8);
            assert_relative_eq!(e(z), ez, max_relative = 1e-12);
            let ome = crate::quad::integrate(|t| (1.0 - t) * (-z * t).exp(), 8);
            assert_relative_eq!(one_minus_e_over_z(z), ome, max_relative = 1e-12);
            assert_relative_eq!(g(z), ez * ez + ome, max_relative = 1e-12);
            // sinh ζ − ζ = ζ ∫₀¹ (cosh ζt − 1) dt
            let sig = 2.0 * (-z).exp() * crate::quad::integrate(|t| z * ((z * t).cosh() - 1.0), 8);
            assert_relative_eq!(sigma(z), sig, max_relative = 1e-10);
            let j1q = crate::quad::integrate(|t| (1.0 - t) * (z * t).exp(), 8);
            assert_relative_eq!(j1(z), j1q, max_relative = 1e-12);
            let j2q = crate::quad::integrate(|t| (-z * t).exp() * ((z * t).exp_m1() / z).powi(2), 8);
            assert_relative_eq!(j2(z), j2q, max_relative = 1e-11);
        }
    }

    #[test]
    fn g2_noise_only_limit() {
        assert_relative_eq!(1.0 + h(0.0) / g(0.0).powi(2), 1.0 + 44.0 / 54.0, max_relative = 1e-15);
    }
}
