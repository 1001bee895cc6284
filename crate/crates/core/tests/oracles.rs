use num_complex::Complex64 as C;
use plasment_core::measurement::{visibility_from_density, ChshAngles};
use plasment_core::{
    aperture, apply_chain, apply_element, chsh_s, coincidence_probability, fringe_scan, hole_array, lens_transform,
    make_spdc_state, polarizer, rate_budget, simulate_counts, waveplate_half, ArrayModel, Beam, Channel, Density,
    Dimensionality, FringePlan, Grid, RateBudget, Representation, Source, State, DEGENERATE_WAVELENGTH,
};
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

fn grid1(points: usize, extent: f64) -> Grid {
    Grid::new(points, extent, Dimensionality::One).unwrap()
}

fn x_of(g: &Grid, j: usize) -> f64 {
    g.centered(j) * g.spacing()
}

/// State whose HV channel is `f(x1)` on beam 1 times a single sample of beam 2.
fn single_beam_state(g: Grid, rep: Representation, f: impl Fn(f64) -> C) -> State {
    let g2 = grid1(2, 1e-6);
    let m2 = g2.modes();
    let pair = g.modes() * m2;
    let mut amps = vec![C::new(0.0, 0.0); 4 * pair];
    for j in 0..g.modes() {
        amps[Channel::HV.index() * pair + j * m2] = f(x_of(&g, j));
    }
    State::from_channels(g, g2, [rep, Representation::Position], DEGENERATE_WAVELENGTH, amps).unwrap()
}

fn beam1_profile(s: &State) -> Vec<C> {
    let m2 = s.modes(Beam::Two);
    (0..s.modes(Beam::One)).map(|j| s.channel(Channel::HV)[j * m2]).collect()
}

fn singlet(points: usize) -> State {
    let g = grid1(points, 64e-6);
    make_spdc_state(g, g, &Source::new(8e-6, 4e-6, PI), DEGENERATE_WAVELENGTH).unwrap()
}

/// Simpson's rule on `[a, b]` with `n` (even) panels.
fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let h = (b - a) / n as f64;
    let mut acc = f(a) + f(b);
    for k in 1..n {
        acc += f(a + k as f64 * h) * if k % 2 == 1 { 4.0 } else { 2.0 };
    }
    acc * h / 3.0
}

#[test]
fn gaussian_maps_to_gaussian_of_inverse_width() {
    let w = 4e-6;
    let g = grid1(256, 128e-6);
    let s = single_beam_state(g, Representation::Position, |x| C::new((-(x * x) / (w * w)).exp(), 0.0));
    let q = s.to_representation(Beam::One, Representation::Wavevector);
    let prof = beam1_profile(&q);
    let centre = g.points() / 2;
    let peak = prof[centre].norm();
    // exp(−x²/w²) ↔ exp(−q²w²/4): 1/e² amplitude half-width 2/w, i.e. 1/w in units of 2/(2w)
    for (j, a) in prof.iter().enumerate() {
        let qv = g.centered(j) * g.wavevector_spacing();
        if qv.abs() > 4.0 / w {
            continue;
        }
        let expected = (-(qv * qv) * w * w / 4.0).exp();
        assert!((a.norm() / peak - expected).abs() < 1e-9, "q = {qv}");
    }
}

#[test]
fn shifted_channel_gram_matches_brute_force() {
    let (w, sc) = (8e-6, 4e-6);
    let g = grid1(128, 128e-6);
    let phi = |x1: f64, x2: f64| (-(x1 + x2).powi(2) / (8.0 * w * w) - (x1 - x2).powi(2) / (8.0 * sc * sc)).exp();
    for shift in [0.0, 2e-6, 4e-6, 7e-6, 40e-6] {
        let pair = g.modes() * g.modes();
        let mut amps = vec![C::new(0.0, 0.0); 4 * pair];
        for a in 0..g.modes() {
            for b in 0..g.modes() {
                let (x1, x2) = (x_of(&g, a), x_of(&g, b));
                amps[Channel::HV.index() * pair + a * g.modes() + b] = C::new(phi(x1, x2), 0.0);
                amps[Channel::VH.index() * pair + a * g.modes() + b] = C::new(-phi(x1 - shift, x2), 0.0);
            }
        }
        let state = State::from_channels(
            g,
            g,
            [Representation::Position; 2],
            DEGENERATE_WAVELENGTH,
            amps.clone(),
        )
        .unwrap();
        let rho = state.reduce_polarization().unwrap();

        // test-side Gram matrix
        let norm: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        for c in Channel::ALL {
            for d in Channel::ALL {
                let (ci, di) = (c.index() * pair, d.index() * pair);
                let g_cd: C = (0..pair).map(|k| amps[ci + k] * amps[di + k].conj()).sum::<C>() / norm;
                assert!((rho.entry(c, d) - g_cd).norm() < 1e-12);
            }
        }

        // analytic shift overlap of the double Gaussian along x1
        let sigma_eff2 = 2.0 / (1.0 / (w * w) + 1.0 / (sc * sc));
        let analytic = 0.5 * (-(shift * shift) / (8.0 * sigma_eff2)).exp();
        let od = rho.entry(Channel::HV, Channel::VH).norm();
        assert!((od - analytic).abs() < 1e-6, "shift {shift}: {od} vs {analytic}");

        let o = state.overlap_degree().unwrap();
        let pops = rho.entry(Channel::HV, Channel::HV).re + rho.entry(Channel::VH, Channel::VH).re;
        assert!((o - 2.0 * od / pops).abs() < 1e-12);
        if shift >= 40e-6 {
            assert!(o < 0.01, "displaced channels overlap {o}");
        }
    }
}

#[test]
fn aperture_transmits_clipped_gaussian_fraction() {
    let half = 2.5e-3;
    let k0 = 2.0 * PI / DEGENERATE_WAVELENGTH;
    let q0 = k0 * half;
    // dq = q0/50
    let extent = 2.0 * PI / (q0 / 50.0);
    let g = grid1(512, extent);
    let spectrum = |q: f64| (-(q * q) / (q0 * q0)).exp();
    let s = single_beam_state(g, Representation::Wavevector, |_| C::new(0.0, 0.0));
    // the sampled wavevectors of a 1-D grid are signed offsets along its axis
    let mut amps = s.amplitudes().to_vec();
    let m2 = s.modes(Beam::Two);
    let pair = g.modes() * m2;
    for j in 0..g.modes() {
        let q = g.centered(j) * g.wavevector_spacing();
        amps[Channel::HV.index() * pair + j * m2] = C::new(spectrum(q), 0.0);
    }
    let s = State::from_channels(
        g,
        *s.grid(Beam::Two),
        [Representation::Wavevector, Representation::Position],
        DEGENERATE_WAVELENGTH,
        amps,
    )
    .unwrap();
    let out = apply_element(&s, &aperture(Beam::One, half)).unwrap();
    let fraction = out.norm() / s.norm();

    let intensity = |q: f64| spectrum(q).powi(2);
    let oracle = simpson(intensity, -q0, q0, 2000) / simpson(intensity, -8.0 * q0, 8.0 * q0, 16000);
    assert!((oracle - 0.954_499_736).abs() < 1e-8);
    // sampled at q0/50 the hard edge costs at most one edge sample per side
    let edge = 2.0 * intensity(q0) * (q0 / 50.0) / simpson(intensity, -8.0 * q0, 8.0 * q0, 16000);
    assert!((fraction - oracle).abs() <= edge, "{fraction} vs {oracle}");

    let wide = apply_element(&s, &aperture(Beam::One, 100.0 * half)).unwrap();
    assert!((wide.norm() - s.norm()).abs() < 1e-6);
    // a vanishing aperture keeps only the q = 0 sample
    let shut = apply_element(&s, &aperture(Beam::One, 1e-9)).unwrap();
    assert!((shut.norm() - intensity(0.0)).abs() < 1e-15);
    assert!(shut.norm() / s.norm() < 0.02);
}

#[test]
fn two_lenses_invert_coordinates() {
    let g = grid1(128, 256e-6);
    let f = 15e-3;
    let s = single_beam_state(g, Representation::Position, |x| {
        C::new((-(x - 20e-6).powi(2) / (30e-6f64).powi(2)).exp(), 0.3 * x / 1e-4)
    });
    let out = apply_chain(&s, &[lens_transform(Beam::One, f), lens_transform(Beam::One, f)]).unwrap();
    assert!((out.norm() - s.norm()).abs() < 1e-12 * s.norm());
    assert!((out.grid(Beam::One).extent() - g.extent()).abs() < 1e-9 * g.extent());
    let a = beam1_profile(&s);
    let b = beam1_profile(&out);
    let n = g.points();
    for j in 1..n {
        assert!((b[n - j] - a[j]).norm() < 1e-10, "sample {j}");
    }
}

#[test]
fn half_millimetre_beam_focuses_to_eight_microns() {
    let w = 0.5e-3;
    let f = 15e-3;
    let g = grid1(256, 8e-3);
    let s = single_beam_state(g, Representation::Position, |x| C::new((-(x * x) / (w * w)).exp(), 0.0));
    let out = apply_element(&s, &lens_transform(Beam::One, f)).unwrap();
    let gf = *out.grid(Beam::One);
    let prof = beam1_profile(&out);
    let total: f64 = prof.iter().map(|a| a.norm_sqr()).sum();
    let second: f64 = prof.iter().enumerate().map(|(j, a)| x_of(&gf, j).powi(2) * a.norm_sqr()).sum::<f64>() / total;
    let radius = 2.0 * second.sqrt();
    let gaussian_optics = DEGENERATE_WAVELENGTH * f / (PI * w);
    assert!((radius / gaussian_optics - 1.0).abs() < 0.01, "{radius}");
    assert!((radius - 8e-6).abs() < 0.8e-6, "{radius}");
}

#[test]
fn point_focus_has_flat_angular_spectrum() {
    let g = grid1(64, 64e-6);
    let s = single_beam_state(g, Representation::Position, |x| C::new(if x == 0.0 { 1.0 } else { 0.0 }, 0.0));
    let q = s.to_representation(Beam::One, Representation::Wavevector);
    let prof = beam1_profile(&q);
    let level = prof[0].norm();
    assert!(prof.iter().all(|a| (a.norm() - level).abs() < 1e-12));
}

#[test]
fn identical_channels_reduce_to_the_pure_polarization_state() {
    let g = grid1(64, 64e-6);
    for (theta, r) in [(0.0, 1.0), (PI, 1.0), (0.7, 1.0), (2.1, 0.6), (PI, 1.8)] {
        let mut src = Source::new(8e-6, 4e-6, theta);
        src.imbalance = r;
        let s = make_spdc_state(g, g, &src, DEGENERATE_WAVELENGTH).unwrap();
        let n = (1.0 + r * r).sqrt();
        let mut psi = [C::new(0.0, 0.0); 4];
        psi[Channel::HV.index()] = C::new(1.0 / n, 0.0);
        psi[Channel::VH.index()] = C::from_polar(r / n, theta);
        let rho = s.reduce_polarization().unwrap();
        assert!(rho.max_abs_diff(&Density::pure(psi)) < 1e-10);
        assert!(s.channel_norm(Channel::HH) == 0.0 && s.channel_norm(Channel::VV) == 0.0);
        assert!((s.overlap_degree().unwrap() - 1.0).abs() < 1e-12);
    }
    let rho = singlet(64).reduce_polarization().unwrap();
    assert!((rho.entry(Channel::HV, Channel::HV).re - 0.5).abs() < 1e-12);
    assert!((rho.entry(Channel::HV, Channel::VH) - C::new(-0.5, 0.0)).norm() < 1e-12);
}

#[test]
fn coarse_grid_is_rejected() {
    let g = grid1(16, 64e-6);
    assert!(make_spdc_state(g, g, &Source::new(8e-6, 4e-6, PI), DEGENERATE_WAVELENGTH).is_err());
}

#[test]
fn bucket_coincidences_match_the_reduced_density() {
    let g = grid1(64, 64e-6);
    let s = make_spdc_state(g, g, &Source::new(8e-6, 4e-6, PI), DEGENERATE_WAVELENGTH).unwrap();
    let model = ArrayModel::square_diagonal(0.05).with_amplitude_ratio(-0.6).unwrap();
    let mut ops = model.element_ops(Beam::One, &g, DEGENERATE_WAVELENGTH).unwrap();
    ops.push(waveplate_half(Beam::Two, 0.3));
    let out = apply_chain(&s, &ops).unwrap();
    assert!(out.channel_norm(Channel::HH) > 0.0);
    let rho = out.reduce_polarization().unwrap();
    for a in 0..12 {
        for b in 0..12 {
            let (alpha, beta) = (a as f64 * 0.29, b as f64 * 0.41 - 1.0);
            assert!((coincidence_probability(&out, alpha, beta) - rho.probability(alpha, beta)).abs() < 1e-10);
        }
    }
}

#[test]
fn ideal_pair_probabilities() {
    let s = singlet(64);
    let d = |x: f64| x.to_radians();
    for a in [0.0, 17.0, 45.0, 90.0, 133.0] {
        assert!(coincidence_probability(&s, d(a), d(a)).abs() < 1e-12);
        assert!((coincidence_probability(&s, d(a), d(a + 90.0)) - 0.5).abs() < 1e-12);
    }
    assert!((coincidence_probability(&s, 0.0, FRAC_PI_2) - 0.5).abs() < 1e-12);

    let g = grid1(64, 64e-6);
    let phi = make_spdc_state(g, g, &Source::new(8e-6, 4e-6, 0.0), DEGENERATE_WAVELENGTH).unwrap();
    assert!((coincidence_probability(&phi, 0.0, FRAC_PI_2) - 0.5).abs() < 1e-12);
    assert!((coincidence_probability(&phi, FRAC_PI_4, FRAC_PI_4) - 0.5).abs() < 1e-12);
    assert!(coincidence_probability(&phi, FRAC_PI_4, -FRAC_PI_4).abs() < 1e-12);

    for beta in [0.0, 0.3, FRAC_PI_4, 1.2] {
        let f = fringe_scan(&s, &FringePlan::p2_fixed(beta)).unwrap();
        assert!((f.visibility - 1.0).abs() < 1e-10);
    }
}

#[test]
fn polarizers_act_as_projectors() {
    let s = singlet(32);
    let once = apply_element(&s, &polarizer(Beam::One, 0.4)).unwrap();
    let twice = apply_element(&once, &polarizer(Beam::One, 0.4)).unwrap();
    assert!(once.amplitudes().iter().zip(twice.amplitudes()).all(|(a, b)| (a - b).norm() < 1e-15));
    let h = apply_element(&s, &polarizer(Beam::One, 0.0)).unwrap();
    assert_eq!(h.channel_norm(Channel::VH) + h.channel_norm(Channel::VV), 0.0);
    let crossed = apply_element(&h, &polarizer(Beam::One, FRAC_PI_2)).unwrap();
    assert!(crossed.norm() < 1e-30);
}

fn werner(v: f64) -> Density {
    Density::bell(PI).mixed_with(&Density::maximally_mixed(), 1.0 - v)
}

#[test]
fn werner_state_chsh_scales_with_visibility() {
    let v = 0.958;
    let rho = werner(v);
    assert!((visibility_from_density(&rho, Beam::Two, 0.0) - v).abs() < 1e-12);
    // brute-force S from the 16 probabilities
    let angles = ChshAngles::<f64>::default();
    let e = |x: f64, y: f64| {
        let p = |a: f64, b: f64| rho.probability(a, b);
        let perp = FRAC_PI_2;
        let (pp, mm, pm, mp) = (p(x, y), p(x + perp, y + perp), p(x, y + perp), p(x + perp, y));
        (pp + mm - pm - mp) / (pp + mm + pm + mp)
    };
    let brute = e(angles.a, angles.b) - e(angles.a, angles.b2) + e(angles.a2, angles.b) + e(angles.a2, angles.b2);
    let s = chsh_s(&rho, &angles).s;
    assert!((s - brute).abs() < 1e-12);
    assert!((s.abs() - 2.0 * 2f64.sqrt() * v).abs() < 1e-9);
    assert!((s.abs() - 2.710).abs() < 5e-4);
}

#[test]
fn poisson_counts_have_the_expected_spread() {
    let budget = RateBudget::new(55.0, [1.0, 1.0]).unwrap();
    let mut samples = Vec::new();
    for seed in 0..250u64 {
        let r = simulate_counts(&[[0.5; 4]; 4], &budget, 100.0, seed).unwrap();
        samples.extend(r.counts.iter().flatten().map(|&c| c as f64));
    }
    let n = samples.len() as f64;
    let mean = samples.iter().sum::<f64>() / n;
    let std = (samples.iter().map(|c| (c - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt();
    assert!((mean - 5500.0).abs() < 5.0, "mean {mean}");
    assert!((std - 5500f64.sqrt()).abs() < 4.0, "std {std}");
}

#[test]
fn chsh_uncertainty_at_table_rates() {
    let rho = werner(0.97);
    let probs = chsh_s(&rho, &ChshAngles::default()).probabilities;
    let budget = RateBudget::new(55.0, [1.0, 1.0]).unwrap();
    let mut sigmas = Vec::new();
    let mut values = Vec::new();
    for seed in 0..64u64 {
        let r = simulate_counts(&probs, &budget, 100.0, seed).unwrap();
        assert!((0.01..=0.04).contains(&r.sigma_s), "sigma {}", r.sigma_s);
        sigmas.push(r.sigma_s);
        values.push(r.s);
    }
    let mean = values.iter().sum::<f64>() / values.len() as f64;
    let spread = (values.iter().map(|s| (s - mean).powi(2)).sum::<f64>() / (values.len() - 1) as f64).sqrt();
    let typical = sigmas.iter().sum::<f64>() / sigmas.len() as f64;
    // propagated σ_S agrees with the seed-to-seed scatter
    assert!((spread / typical - 1.0).abs() < 0.3, "{spread} vs {typical}");
}

#[test]
fn rate_budget_reproduces_table_rates() {
    let r0 = 3.2e4f64;
    let both = rate_budget(r0, [0.05, 0.03]).unwrap().coincidence;
    assert!((both - 48.0).abs() < 1e-9);
    assert!((both / 55.0 - 1.0).abs() <= 0.2);
    let one = rate_budget(r0, [0.05, 1.0]).unwrap().coincidence;
    assert!((one / 1.6e3 - 1.0).abs() <= 0.2);
    let two = rate_budget(r0, [1.0, 0.03]).unwrap().coincidence;
    assert!((two / 1.0e3 - 1.0).abs() <= 0.2);
    assert_eq!(rate_budget(r0, [1.0, 1.0]).unwrap().coincidence, r0);
}

#[test]
fn array_rejects_short_windows_and_off_resonance_light() {
    let model = ArrayModel::square_diagonal(0.05);
    let g = grid1(64, 12e-6);
    assert!(hole_array(Beam::One, &model, &g, DEGENERATE_WAVELENGTH).is_err());
    let g = grid1(64, 64e-6);
    assert!(hole_array(Beam::One, &model, &g, 700e-9).is_err());
    assert!(hole_array(Beam::One, &model, &g, DEGENERATE_WAVELENGTH).is_ok());
}
