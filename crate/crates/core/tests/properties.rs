use std::f64::consts::{FRAC_PI_2, PI, TAU};

use approx::assert_relative_eq;
use nalgebra::DMatrix;
use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use selfmetric::alexandrov::{
    apply_l, gamma, general_n_forward, l_eigenvalue, leading_order, second_order, solve_phi0,
    split_harmonics, FourierDensity, Sign,
};
use selfmetric::center::{convexity_probe, optimal_center_2d, optimal_center_2d_from, optimal_center_volume};
use selfmetric::fourier::grid;
use selfmetric::perimeter::{
    busemann_perimeter_polygon, kgon_self_perimeter, polygon_perimeter, self_perimeter_polygon,
    self_perimeter_polygon_oriented, self_perimeter_smooth,
};
use selfmetric::alexandrov::forward_measure;
use selfmetric::polytope::lebesgue_volume;
use selfmetric::selfvolume::{self_volume_recursive, simplex_self_volume};
use selfmetric::shapes;
use selfmetric::{
    BarycentricPoint, ConvexBody, FourierSeries, Orientation, Point2, Polygon2, PolytopeN,
    RadiusProfile, Variant,
};

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn cases(n: u32) -> ProptestConfig {
    ProptestConfig {
        cases: n,
        ..ProptestConfig::default()
    }
}

fn unit_dir(rng: &mut ChaCha8Rng, dim: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..dim).map(|_| rng.random_range(-1.0..1.0)).collect();
        let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if n > 0.1 && n <= 1.0 {
            return v.iter().map(|x| x / n).collect();
        }
    }
}

/// Exit distance from `p` along `v`, by clipping against each edge's half-plane.
fn ray_oracle(verts: &[Point2], p: Point2, v: Point2) -> f64 {
    let k = verts.len();
    let mut best = f64::INFINITY;
    for i in 0..k {
        let a = verts[i];
        let b = verts[(i + 1) % k];
        let n = [b[1] - a[1], a[0] - b[0]];
        let slack = n[0] * (a[0] - p[0]) + n[1] * (a[1] - p[1]);
        let rate = n[0] * v[0] + n[1] * v[1];
        if rate > 0.0 {
            best = best.min(slack / rate);
        }
    }
    best
}

fn mat2(m: &[Vec<f64>]) -> [[f64; 2]; 2] {
    [[m[0][0], m[0][1]], [m[1][0], m[1][1]]]
}

fn apply(m: &[Vec<f64>], x: &[f64]) -> Vec<f64> {
    m.iter().map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum()).collect()
}

fn random_profile(rng: &mut ChaCha8Rng) -> RadiusProfile {
    loop {
        let mut triples = vec![(0, 1.0, 0.0)];
        for k in 1..=5i64 {
            let a = rng.random_range(-0.03..0.03) / k as f64;
            let b = rng.random_range(-0.03..0.03) / k as f64;
            triples.push((k, a / 2.0, -b / 2.0));
            triples.push((-k, a / 2.0, b / 2.0));
        }
        let series = FourierSeries::from_triples(&triples).unwrap();
        if let Ok(p) = RadiusProfile::new(series) {
            if p.is_convex() {
                return p;
            }
        }
    }
}

fn four_fold_series(rng: &mut ChaCha8Rng) -> FourierSeries {
    let mut coeffs = vec![Complex64::new(0.0, 0.0); 13];
    coeffs[4] = Complex64::new(rng.random_range(0.2..0.6), rng.random_range(-0.3..0.3));
    coeffs[8] = Complex64::new(rng.random_range(-0.2..0.2), rng.random_range(-0.2..0.2));
    coeffs[12] = Complex64::new(rng.random_range(-0.1..0.1), 0.0);
    FourierSeries::new(coeffs)
}

fn unbalanced_series(rng: &mut ChaCha8Rng) -> FourierSeries {
    let mut coeffs = vec![Complex64::new(0.0, 0.0); 8];
    for k in [1, 2, 3, 5, 6, 7] {
        coeffs[k] = Complex64::new(rng.random_range(-0.2..0.2), rng.random_range(-0.2..0.2));
    }
    FourierSeries::new(coeffs)
}

fn orthogonal(rng: &mut ChaCha8Rng, n: usize) -> Vec<Vec<f64>> {
    let a = DMatrix::from_fn(n, n, |_, _| rng.random_range(-1.0..1.0));
    let q = a.qr().q();
    (0..n).map(|i| (0..n).map(|j| q[(i, j)]).collect()).collect()
}

proptest! {
    #![proptest_config(cases(100))]

    #[test]
    fn radius_matches_half_plane_oracle(seed in any::<u64>()) {
        let mut r = rng(seed);
        let poly = shapes::random_convex_polygon(&mut r, 7);
        let p = shapes::random_interior_point(&mut r, &poly);
        let v = unit_dir(&mut r, 2);
        let got = poly.radius(&p, &v).unwrap();
        let want = ray_oracle(poly.vertices(), p, [v[0], v[1]]);
        prop_assert!((got - want).abs() <= 1e-10 * want.max(1.0));
    }

    #[test]
    fn radius_is_homogeneous(seed in any::<u64>(), lambda in 0.1f64..10.0) {
        let mut r = rng(seed);
        let poly = shapes::random_convex_polygon(&mut r, 6);
        let p = shapes::random_interior_point(&mut r, &poly);
        let v = unit_dir(&mut r, 2);
        let big = poly.scaled(lambda).unwrap();
        let lp = [lambda * p[0], lambda * p[1]];
        let a = big.radius(&lp, &v).unwrap();
        let b = lambda * poly.radius(&p, &v).unwrap();
        prop_assert!((a - b).abs() <= 1e-10 * b.max(1.0));
    }

    #[test]
    fn radius_is_concave_in_the_center(seed in any::<u64>()) {
        let mut r = rng(seed);
        let poly = shapes::random_convex_polygon(&mut r, 8);
        let p1 = shapes::random_interior_point(&mut r, &poly);
        let p2 = shapes::random_interior_point(&mut r, &poly);
        let v = unit_dir(&mut r, 2);
        let mid = [(p1[0] + p2[0]) / 2.0, (p1[1] + p2[1]) / 2.0];
        let avg = (poly.radius(&p1, &v).unwrap() + poly.radius(&p2, &v).unwrap()) / 2.0;
        prop_assert!(poly.radius(&mid, &v).unwrap() >= avg - 1e-12);
    }

    #[test]
    fn support_is_vertex_maximum(seed in any::<u64>()) {
        let mut r = rng(seed);
        let poly = shapes::random_polytope(&mut r, 3, 12);
        let u = unit_dir(&mut r, 3);
        let want = poly
            .vertices()
            .iter()
            .map(|x| x.iter().zip(&u).map(|(a, b)| a * b).sum::<f64>())
            .fold(f64::NEG_INFINITY, f64::max);
        prop_assert!((poly.support(&u) - want).abs() <= 1e-12);
    }

    #[test]
    fn gauge_of_boundary_points_is_one(seed in any::<u64>(), t in 0.1f64..5.0) {
        let mut r = rng(seed);
        let poly = shapes::random_convex_polygon(&mut r, 6);
        let v = unit_dir(&mut r, 2);
        let rho = ray_oracle(poly.vertices(), [0.0, 0.0], [v[0], v[1]]);
        let x = [t * rho * v[0], t * rho * v[1]];
        prop_assert!((poly.gauge(&x).unwrap() - t).abs() <= 1e-10 * t);
    }
}

proptest! {
    #![proptest_config(cases(30))]

    #[test]
    fn polar_round_trip(seed in any::<u64>()) {
        let mut r = rng(seed);
        let poly = shapes::random_polytope(&mut r, 3, 10);
        let polar = poly.polar().unwrap();
        prop_assert!(polar.polar().unwrap().same_vertices(&poly, 1e-8));
        let origin = [0.0; 3];
        for _ in 0..10 {
            let u = unit_dir(&mut r, 3);
            let rho = poly.radius(&origin, &u).unwrap();
            let back = polar.polar_radius(&u).unwrap();
            prop_assert!((rho - back).abs() <= 1e-8 * rho);
            let h = polar.support(&u);
            prop_assert!((rho * h - 1.0).abs() <= 1e-8);
        }
    }

    #[test]
    fn central_section_of_symmetric_body_is_symmetric(seed in any::<u64>()) {
        let mut r = rng(seed);
        let poly = shapes::random_ccs_polytope(&mut r, 3, 5);
        let normal = unit_dir(&mut r, 3);
        let section = poly.central_section(&normal).unwrap();
        prop_assert!(section.polytope.is_centrally_symmetric(1e-9));
    }

    #[test]
    fn volume_agrees_with_monte_carlo(seed in any::<u64>()) {
        let mut r = rng(seed);
        let poly = shapes::random_polytope(&mut r, 3, 9);
        let mut lo = [f64::INFINITY; 3];
        let mut hi = [f64::NEG_INFINITY; 3];
        for v in poly.vertices() {
            for i in 0..3 {
                lo[i] = lo[i].min(v[i]);
                hi[i] = hi[i].max(v[i]);
            }
        }
        let boxvol: f64 = (0..3).map(|i| hi[i] - lo[i]).product();
        let samples = 20_000;
        let mut hits = 0usize;
        for _ in 0..samples {
            let x: Vec<f64> = (0..3).map(|i| r.random_range(lo[i]..hi[i])).collect();
            if poly.contains_strictly(&x) {
                hits += 1;
            }
        }
        let frac = hits as f64 / samples as f64;
        let sigma = boxvol * (frac * (1.0 - frac) / samples as f64).sqrt();
        let vol = lebesgue_volume(poly.vertices()).value;
        prop_assert!((vol - boxvol * frac).abs() <= 3.0 * sigma + 1e-9);
        prop_assert!((vol - poly.volume()).abs() <= 1e-10 * vol);
    }
}

#[test]
fn random_hull_volume_matches_tetrahedra_fan() {
    let mut r = rng(11);
    for _ in 0..20 {
        let s = shapes::random_simplex(&mut r, 3);
        let e: Vec<Vec<f64>> = s[1..].iter().map(|p| (0..3).map(|i| p[i] - s[0][i]).collect()).collect();
        let det = e[0][0] * (e[1][1] * e[2][2] - e[1][2] * e[2][1])
            - e[0][1] * (e[1][0] * e[2][2] - e[1][2] * e[2][0])
            + e[0][2] * (e[1][0] * e[2][1] - e[1][1] * e[2][0]);
        assert_relative_eq!(lebesgue_volume(&s).value, det.abs() / 6.0, max_relative = 1e-12);
    }
}

proptest! {
    #![proptest_config(cases(200))]

    #[test]
    fn symmetric_polygons_lie_in_golab_range(seed in any::<u64>(), pairs in 2usize..9) {
        let mut r = rng(seed);
        let poly = shapes::random_ccs_polygon(&mut r, pairs);
        let p = self_perimeter_polygon(&poly, [0.0, 0.0]).unwrap().value;
        prop_assert!((6.0 - 1e-9..=8.0 + 1e-9).contains(&p), "P = {}", p);
        let b = busemann_perimeter_polygon(&poly, [0.0, 0.0]).unwrap().value;
        prop_assert!((p - b).abs() <= 1e-9);
    }
}

proptest! {
    #![proptest_config(cases(100))]

    #[test]
    fn perimeters_are_affine_invariant(seed in any::<u64>()) {
        let mut r = rng(seed);
        let poly = shapes::random_convex_polygon(&mut r, 6);
        let p = shapes::random_interior_point(&mut r, &poly);
        let m = shapes::random_matrix(&mut r, 2);
        let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
        let image = poly.linear_image(mat2(&m)).unwrap();
        let q = apply(&m, &p);
        let q = [q[0], q[1]];
        let bus = busemann_perimeter_polygon(&poly, p).unwrap().value;
        prop_assert!((busemann_perimeter_polygon(&image, q).unwrap().value - bus).abs() <= 1e-8 * bus);
        let dir = self_perimeter_polygon(&image, q).unwrap().value;
        let want = if det > 0.0 {
            self_perimeter_polygon(&poly, p).unwrap().value
        } else {
            self_perimeter_polygon_oriented(&poly, p, Orientation::Clockwise).unwrap().value
        };
        prop_assert!((dir - want).abs() <= 1e-8 * want);
    }

    #[test]
    fn busemann_ignores_orientation(seed in any::<u64>()) {
        let mut r = rng(seed);
        let poly = shapes::random_convex_polygon(&mut r, 5);
        let p = shapes::random_interior_point(&mut r, &poly);
        let mirror = poly.linear_image([[-1.0, 0.0], [0.0, 1.0]]).unwrap();
        let mp = [-p[0], p[1]];
        let a = busemann_perimeter_polygon(&poly, p).unwrap().value;
        let b = busemann_perimeter_polygon(&mirror, mp).unwrap().value;
        prop_assert!((a - b).abs() <= 1e-12 * a);
        let cw = self_perimeter_polygon_oriented(&poly, p, Orientation::Clockwise).unwrap().value;
        let mirrored = self_perimeter_polygon(&mirror, mp).unwrap().value;
        prop_assert!((cw - mirrored).abs() <= 1e-12 * cw);
    }

    #[test]
    fn directed_orientation_is_irrelevant_for_symmetric_bodies(seed in any::<u64>()) {
        let mut r = rng(seed);
        let poly = shapes::random_ccs_polygon(&mut r, 4);
        let ccw = self_perimeter_polygon(&poly, [0.0, 0.0]).unwrap().value;
        let cw = self_perimeter_polygon_oriented(&poly, [0.0, 0.0], Orientation::Clockwise).unwrap().value;
        prop_assert!((ccw - cw).abs() <= 1e-12 * ccw);
    }

    #[test]
    fn triangle_perimeters_follow_barycentric_formulas(a in 0.05f64..0.9, b in 0.05f64..0.9) {
        prop_assume!(a + b < 0.95);
        let c = 1.0 - a - b;
        let tri = shapes::triangle([0.0, 0.0], [2.0, 0.3], [0.7, 1.9]).unwrap();
        let verts: Vec<Vec<f64>> = tri.vertices().iter().map(|v| v.to_vec()).collect();
        let bary = BarycentricPoint::new(vec![a, b, c]).unwrap();
        let p = bary.to_cartesian(&verts).unwrap();
        let p = [p[0], p[1]];
        let lam = [a, b, c];
        let directed: f64 = lam.iter().map(|l| 1.0 / l).sum();
        let bus: f64 = lam.iter().map(|l| 2.0 / (1.0 - l)).sum();
        let d = self_perimeter_polygon(&tri, p).unwrap().value;
        let bb = busemann_perimeter_polygon(&tri, p).unwrap().value;
        prop_assert!((d - directed).abs() <= 1e-9 * d);
        prop_assert!((bb - bus).abs() <= 1e-9 * bb);
        prop_assert!(9.0 - 1e-12 <= bb && bb <= d + 1e-12);
    }
}

#[test]
fn kgon_closed_forms_match_polygon_sums() {
    for k in 3..=16 {
        let exact = self_perimeter_polygon(&shapes::regular_polygon(k, 1.0), [0.0, 0.0]).unwrap().value;
        assert!((kgon_self_perimeter(k).unwrap() - exact).abs() <= 1e-10, "k = {k}");
    }
}

#[test]
fn kgon_converges_monotonically_within_residue_classes() {
    for class in 0..4 {
        let mut last = f64::INFINITY;
        for k in (3..=64).filter(|k| k % 4 == class) {
            let err = (kgon_self_perimeter(k).unwrap() - TAU).abs();
            assert!(err < last, "k = {k}: {err} after {last}");
            last = err;
        }
    }
    for k in (4..=64).step_by(2) {
        let kf = k as f64;
        assert!(2.0 * kf * (PI / kf).sin() < TAU && TAU < 2.0 * kf * (PI / kf).tan());
    }
}

#[test]
fn smooth_perimeter_approaches_polygon_limit() {
    // superellipse |x|^m + |y|^m = 1 tends to the square
    let mut last = 0.0;
    for m in [2.0, 4.0, 8.0] {
        let samples: Vec<f64> = grid(256)
            .iter()
            .map(|t: &f64| (t.cos().abs().powf(m) + t.sin().abs().powf(m)).powf(-1.0 / m))
            .collect();
        let profile = RadiusProfile::new(FourierSeries::from_samples(&samples, 127)).unwrap();
        let smooth = self_perimeter_smooth(&profile, 4096).unwrap().value;
        let fine: Vec<Point2> = grid(4000)
            .iter()
            .map(|t| {
                let r = (t.cos().abs().powf(m) + t.sin().abs().powf(m)).powf(-1.0 / m);
                [r * t.cos(), r * t.sin()]
            })
            .collect();
        let polygon = self_perimeter_polygon(&Polygon2::from_points(&fine).unwrap(), [0.0, 0.0]).unwrap().value;
        assert!((smooth - polygon).abs() < 2e-2, "m = {m}: {smooth} vs {polygon}");
        assert!(smooth > last && smooth < 8.0);
        last = smooth;
    }
}

proptest! {
    #![proptest_config(cases(20))]

    #[test]
    fn forward_measure_integrates_to_self_perimeter(seed in any::<u64>()) {
        let mut r = rng(seed);
        let profile = random_profile(&mut r);
        let nodes = 1024;
        let mu = forward_measure(&profile, nodes).unwrap();
        let total = TAU / nodes as f64 * mu.iter().sum::<f64>();
        let p = self_perimeter_smooth(&profile, nodes).unwrap().value;
        prop_assert!((total - p).abs() <= 1e-8 * p);
        // independent evaluation: tangent of the parametrized boundary, radius in its direction
        let h = 1e-5;
        let x = |t: f64| [profile.r(t) * t.cos(), profile.r(t) * t.sin()];
        let mut oracle = 0.0;
        for t in grid(nodes) {
            let (a, b) = (x(t - h), x(t + h));
            let d = [(b[0] - a[0]) / (2.0 * h), (b[1] - a[1]) / (2.0 * h)];
            let psi = d[1].atan2(d[0]);
            oracle += d[0].hypot(d[1]) / profile.r(psi);
        }
        oracle *= TAU / nodes as f64;
        prop_assert!((oracle - p).abs() <= 1e-8 * p);
    }
}

proptest! {
    #![proptest_config(cases(20))]

    #[test]
    fn planar_recursion_is_half_the_perimeter(seed in any::<u64>()) {
        let mut r = rng(seed);
        let ccs = shapes::random_ccs_polygon(&mut r, 4);
        let w = self_volume_recursive(&PolytopeN::from_polygon(&ccs)).unwrap().value;
        prop_assert!((2.0 * w - self_perimeter_polygon(&ccs, [0.0, 0.0]).unwrap().value).abs() <= 1e-9);
        let generic = shapes::random_convex_polygon(&mut r, 6);
        let w = self_volume_recursive(&PolytopeN::from_polygon(&generic)).unwrap().value;
        prop_assert!((2.0 * w - busemann_perimeter_polygon(&generic, [0.0, 0.0]).unwrap().value).abs() <= 1e-9);
    }

    #[test]
    fn self_volume_is_linearly_invariant(seed in any::<u64>(), dim in 2usize..4) {
        let mut r = rng(seed);
        let poly = shapes::random_ccs_polytope(&mut r, dim, dim + 2);
        let base = self_volume_recursive(&poly).unwrap().value;
        let m = shapes::random_matrix(&mut r, dim);
        let image = poly.affine_image(&m).unwrap();
        prop_assert!((self_volume_recursive(&image).unwrap().value - base).abs() <= 1e-6 * base);
        let generic = shapes::random_polytope(&mut r, dim, dim + 4);
        let base = self_volume_recursive(&generic).unwrap().value;
        let image = generic.affine_image(&m).unwrap();
        prop_assert!((self_volume_recursive(&image).unwrap().value - base).abs() <= 1e-6 * base);
    }

    #[test]
    fn self_volume_ignores_rotations(seed in any::<u64>()) {
        let mut r = rng(seed);
        let poly = shapes::random_polytope(&mut r, 3, 8);
        let q = orthogonal(&mut r, 3);
        let a = self_volume_recursive(&poly).unwrap().value;
        let b = self_volume_recursive(&poly.affine_image(&q).unwrap()).unwrap().value;
        prop_assert!((a - b).abs() <= 1e-9 * a);
    }

    #[test]
    fn product_rule(seed in any::<u64>(), half in 0.2f64..3.0) {
        let mut r = rng(seed);
        let poly = PolytopeN::from_polygon(&shapes::random_convex_polygon(&mut r, 5));
        let seg = shapes::interval(half);
        let prod = poly.cartesian_product(&seg).unwrap();
        let a = self_volume_recursive(&poly).unwrap().value;
        prop_assert!((self_volume_recursive(&prod).unwrap().value - 2.0 * a).abs() <= 1e-8 * a);
    }

    #[test]
    fn simplex_closed_form_matches_recursion(seed in any::<u64>(), n in 2usize..4) {
        let mut r = rng(seed);
        let verts = shapes::random_simplex(&mut r, n);
        let raw: Vec<f64> = (0..=n).map(|_| r.random_range(0.1..1.0)).collect();
        let bary = BarycentricPoint::normalized(raw).unwrap();
        let p = bary.to_cartesian(&verts).unwrap();
        let shifted: Vec<Vec<f64>> = verts.iter().map(|v| v.iter().zip(&p).map(|(a, b)| a - b).collect()).collect();
        let rec = self_volume_recursive(&PolytopeN::from_vertices(shifted).unwrap()).unwrap().value;
        let closed = simplex_self_volume(n, &bary).unwrap();
        prop_assert!((rec - closed).abs() <= 1e-8 * closed);
        if n == 2 {
            let direct: f64 = bary.weights().iter().map(|l| 1.0 / (1.0 - l)).sum();
            prop_assert!((closed - direct).abs() <= 1e-12 * direct);
        }
    }

    #[test]
    fn simplex_closed_form_is_permutation_symmetric(seed in any::<u64>(), n in 1usize..6) {
        let mut r = rng(seed);
        let raw: Vec<f64> = (0..=n).map(|_| r.random_range(0.05..1.0)).collect();
        let a = simplex_self_volume(n, &BarycentricPoint::normalized(raw.clone()).unwrap()).unwrap();
        let mut shuffled = raw;
        for i in (1..shuffled.len()).rev() {
            shuffled.swap(i, r.random_range(0..=i));
        }
        let b = simplex_self_volume(n, &BarycentricPoint::normalized(shuffled).unwrap()).unwrap();
        prop_assert!((a - b).abs() <= 1e-12 * a);
    }

    #[test]
    fn forward_mass_is_dimension_times_self_volume(seed in any::<u64>()) {
        let mut r = rng(seed);
        let poly = shapes::random_ccs_polytope(&mut r, 3, 5);
        let f = general_n_forward(&poly).unwrap();
        let w = self_volume_recursive(&poly).unwrap().value;
        prop_assert!((f.total_mass - 3.0 * w).abs() <= 1e-6 * w);
    }
}

#[test]
fn four_cube_affine_invariance() {
    let mut r = rng(4);
    let cube = shapes::hypercube(4);
    for _ in 0..3 {
        let m = shapes::random_matrix(&mut r, 4);
        let w = self_volume_recursive(&cube.affine_image(&m).unwrap()).unwrap().value;
        assert_relative_eq!(w, 16.0, max_relative = 1e-6);
    }
}

fn adaptive_simpson(f: &impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    #[allow(clippy::too_many_arguments)]
    fn step(f: &impl Fn(f64) -> f64, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, tol: f64, depth: u32) -> f64 {
        let m = 0.5 * (a + b);
        let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
        let (flm, frm) = (f(lm), f(rm));
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        if depth == 0 || (left + right - whole).abs() <= 15.0 * tol {
            return left + right + (left + right - whole) / 15.0;
        }
        step(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1) + step(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
    }
    let (fa, fm, fb) = (f(a), f(0.5 * (a + b)), f(b));
    step(f, a, b, fa, fm, fb, (b - a) / 6.0 * (fa + 4.0 * fm + fb), tol, 40)
}

#[test]
fn planar_forward_density_integrates_to_mass() {
    let mut r = rng(5);
    for _ in 0..5 {
        let poly = PolytopeN::from_polygon(&shapes::random_convex_polygon(&mut r, 6));
        let f = general_n_forward(&poly).unwrap();
        // adaptive Simpson between consecutive vertex angles, where the density is smooth
        let mut cuts: Vec<f64> = poly.vertices().iter().map(|v| v[1].atan2(v[0])).collect();
        cuts.sort_by(f64::total_cmp);
        cuts.push(cuts[0] + TAU);
        let density = |t: f64| f.density_at(&[t.cos(), t.sin()]).unwrap();
        let integral: f64 = cuts
            .windows(2)
            .map(|w| {
                let eps = 1e-12 * (w[1] - w[0]);
                adaptive_simpson(&density, w[0] + eps, w[1] - eps, 1e-13)
            })
            .sum();
        assert_relative_eq!(integral, f.total_mass, max_relative = 1e-9);
    }
}

#[test]
fn spatial_forward_density_integrates_to_mass() {
    let f = general_n_forward(&shapes::random_polytope(&mut rng(6), 3, 10)).unwrap();
    // Fibonacci lattice on the sphere, equal-area weights
    let n = 200_000;
    let golden = PI * (3.0 - 5f64.sqrt());
    let mut sum = 0.0;
    for i in 0..n {
        let z = 1.0 - (2.0 * i as f64 + 1.0) / n as f64;
        let s = (1.0 - z * z).sqrt();
        let a = golden * i as f64;
        sum += f.density_at(&[s * a.cos(), s * a.sin(), z]).unwrap();
    }
    let integral = sum * 4.0 * PI / n as f64;
    assert_relative_eq!(integral, f.total_mass, max_relative = 1e-2);
}

fn generic_polygon(r: &mut ChaCha8Rng) -> Polygon2 {
    loop {
        let p = shapes::random_convex_polygon(r, 5);
        if !p.is_centrally_symmetric(1e-6) {
            return p;
        }
    }
}

proptest! {
    #![proptest_config(cases(50))]

    #[test]
    fn restarts_agree(seed in any::<u64>()) {
        let mut r = rng(seed);
        let poly = generic_polygon(&mut r);
        for variant in [Variant::Directed, Variant::Busemann] {
            let first = optimal_center_2d(&poly, variant).unwrap();
            for _ in 0..5 {
                let start = shapes::random_interior_point(&mut r, &poly);
                let other = optimal_center_2d_from(&poly, variant, start).unwrap();
                let d = (other.optimum[0] - first.optimum[0]).hypot(other.optimum[1] - first.optimum[1]);
                prop_assert!(d <= 1e-6, "{:?}: {} apart", variant, d);
            }
        }
    }
}

proptest! {
    #![proptest_config(cases(20))]

    #[test]
    fn optimum_is_linearly_equivariant(seed in any::<u64>()) {
        let mut r = rng(seed);
        let poly = generic_polygon(&mut r);
        let m = shapes::random_matrix(&mut r, 2);
        let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
        let image = poly.linear_image(mat2(&m)).unwrap();
        let scale = image.diameter();
        let mut variants = vec![Variant::Busemann];
        if det > 0.0 {
            variants.push(Variant::Directed);
        }
        for variant in variants {
            let c = optimal_center_2d(&poly, variant).unwrap();
            let mapped = apply(&m, &c.optimum);
            let c2 = optimal_center_2d(&image, variant).unwrap();
            let d = (mapped[0] - c2.optimum[0]).hypot(mapped[1] - c2.optimum[1]);
            prop_assert!(d <= 1e-6 * scale.max(1.0), "{:?}: {}", variant, d);
        }
    }

    #[test]
    fn values_blow_up_near_the_boundary(seed in any::<u64>()) {
        let mut r = rng(seed);
        let poly = generic_polygon(&mut r);
        // chords through points near an edge stay long, so only the directed
        // functional blows up there
        for variant in [Variant::Directed] {
            let best = optimal_center_2d(&poly, variant).unwrap().value;
            for i in 0..poly.len() {
                let a = poly.vertices()[i];
                let b = poly.vertices()[(i + 1) % poly.len()];
                let n = poly.edge_normal(i);
                let p = [(a[0] + b[0]) / 2.0 - 1e-3 * n[0], (a[1] + b[1]) / 2.0 - 1e-3 * n[1]];
                let v = polygon_perimeter(&poly, p, variant).unwrap();
                prop_assert!(v >= 10.0 * best, "{:?} edge {}: {} vs {}", variant, i, v, best);
            }
        }
    }

    #[test]
    fn midpoint_convexity(seed in any::<u64>()) {
        let mut r = rng(seed);
        let poly = shapes::random_convex_polygon(&mut r, 6);
        for variant in [Variant::Directed, Variant::Busemann] {
            let report = convexity_probe(&poly, variant, 50, &mut r);
            prop_assert_eq!(report.violations, 0);
        }
    }

    #[test]
    fn centrally_symmetric_optimum_is_origin(seed in any::<u64>()) {
        let mut r = rng(seed);
        let poly = shapes::random_ccs_polygon(&mut r, 4);
        let c = optimal_center_2d(&poly, Variant::Directed).unwrap();
        prop_assert!(c.optimum[0].hypot(c.optimum[1]) <= 1e-7);
    }
}

#[test]
fn square_midpoint_is_strictly_smaller() {
    let sq = shapes::square();
    let v = Variant::Directed;
    let mid = polygon_perimeter(&sq, [0.0, 0.0], v).unwrap();
    let avg = (polygon_perimeter(&sq, [0.4, 0.2], v).unwrap() + polygon_perimeter(&sq, [-0.4, -0.2], v).unwrap()) / 2.0;
    assert!(mid < avg - 1e-12);
}

#[test]
fn simplex_volume_optimum_is_centroid() {
    for n in [2, 3] {
        let mut r = rng(n as u64);
        let verts = shapes::random_simplex(&mut r, n);
        let poly = PolytopeN::from_vertices(verts.clone()).unwrap();
        let shift: Vec<f64> = (0..n).map(|i| verts.iter().map(|v| v[i]).sum::<f64>() / (n + 1) as f64).collect();
        let c = optimal_center_volume(&poly.translated(&shift.iter().map(|x| -x).collect::<Vec<_>>()).unwrap()).unwrap();
        let d = c.optimum.iter().map(|x| x * x).sum::<f64>().sqrt();
        assert!(d <= 1e-5, "n = {n}: {d}");
        assert_relative_eq!(c.value, selfmetric::selfvolume::simplex_minimum(n), max_relative = 1e-9);
    }
}

proptest! {
    #![proptest_config(cases(30))]

    #[test]
    fn gamma_decreases(seed in any::<u64>()) {
        let mut r = rng(seed);
        let samples = four_fold_series(&mut r).sample(512);
        let lo = samples.iter().copied().fold(f64::INFINITY, f64::min) - 1.0;
        let hi = samples.iter().copied().fold(f64::NEG_INFINITY, f64::max) + 1.0;
        let mut last = f64::INFINITY;
        for i in 0..=200 {
            let g = lo + (hi - lo) * i as f64 / 200.0;
            let v = gamma(&samples, g);
            prop_assert!(v <= last);
            last = v;
        }
    }

    #[test]
    fn phi0_agrees_with_fine_grid_bisection(seed in any::<u64>()) {
        let mut r = rng(seed);
        let phi_p = four_fold_series(&mut r);
        let phi0 = solve_phi0(&phi_p, 4096).unwrap();
        prop_assert!(phi0.defect < 1e-10);
        // independent: midpoint rule on a much finer grid
        let n = 1 << 16;
        let vals: Vec<f64> = (0..n).map(|i| phi_p.eval((i as f64 + 0.5) * TAU / n as f64)).collect();
        let f = |c: f64| vals.iter().map(|v| { let d = v + c; d.signum() * d.abs().sqrt() }).sum::<f64>();
        let (mut lo, mut hi) = (-3.0, 3.0);
        for _ in 0..100 {
            let mid = 0.5 * (lo + hi);
            if f(mid) < 0.0 { lo = mid } else { hi = mid }
        }
        prop_assert!((phi0.value - 0.5 * (lo + hi)).abs() < 1e-4);
    }

    #[test]
    fn leading_order_ignores_unbalanced_part(seed in any::<u64>()) {
        let mut r = rng(seed);
        let p = four_fold_series(&mut r);
        let a = FourierDensity::new(p.add(&unbalanced_series(&mut r)), 0.01).unwrap();
        let b = FourierDensity::new(p.add(&unbalanced_series(&mut r)), 0.01).unwrap();
        let la = leading_order(&a, Sign::Plus, 1024).unwrap();
        let lb = leading_order(&b, Sign::Plus, 1024).unwrap();
        prop_assert_eq!(la.zeta1, lb.zeta1);
    }

    #[test]
    fn leading_order_is_quarter_periodic_and_sign_odd(seed in any::<u64>()) {
        let mut r = rng(seed);
        let d = FourierDensity::new(four_fold_series(&mut r), 0.01).unwrap();
        let plus = leading_order(&d, Sign::Plus, 1024).unwrap();
        let minus = leading_order(&d, Sign::Minus, 1024).unwrap();
        for i in 0..1024 {
            prop_assert!((plus.zeta1[i] - plus.zeta1[(i + 256) % 1024]).abs() <= 1e-10);
            prop_assert_eq!(minus.zeta1[i], -plus.zeta1[i]);
        }
    }

    #[test]
    fn shift_balance_holds_where_nonnegative(seed in any::<u64>()) {
        let mut r = rng(seed);
        let phi = four_fold_series(&mut r).add(&unbalanced_series(&mut r));
        let d = FourierDensity::new(phi.clone(), 0.01).unwrap();
        let lead = leading_order(&d, Sign::Plus, 1024).unwrap();
        let (pp, pu) = split_harmonics(&phi);
        for (i, t) in grid(1024).into_iter().enumerate() {
            if pp.eval(t) + lead.phi0 >= 0.0 {
                let lhs = phi.eval(t) + lead.phi0 - 1.5 * lead.derivative[i].powi(2);
                prop_assert!((lhs - pu.eval(t)).abs() <= 1e-8);
            }
        }
    }

    #[test]
    fn second_order_inverts_the_shift(seed in any::<u64>()) {
        let mut r = rng(seed);
        let u = unbalanced_series(&mut r);
        let d = FourierDensity::new(four_fold_series(&mut r).add(&u), 0.01).unwrap();
        let z2 = second_order(&d).unwrap();
        let back = apply_l(&z2);
        for k in 0..=u.max_degree().max(back.max_degree()) as i64 {
            prop_assert!((back.coeff(k) - u.coeff(k)).norm() <= 1e-12);
        }
        prop_assert!(z2.max_abs_where(|k| k % 4 == 0) == 0.0);
    }
}

#[test]
fn shift_operator_spectrum() {
    let i = Complex64::new(0.0, 1.0);
    for k in 0..40usize {
        let mut coeffs = vec![Complex64::new(0.0, 0.0); k + 1];
        coeffs[k] = Complex64::new(0.7, -0.3);
        let s = FourierSeries::new(coeffs);
        let mut ik = Complex64::new(1.0, 0.0);
        for _ in 0..k {
            ik *= i;
        }
        let want = s.coeff(k as i64) * (Complex64::new(1.0, 0.0) - ik);
        assert_eq!(apply_l(&s).coeff(k as i64), want, "k = {k}");
        let polar = Complex64::new(1.0, 0.0) - Complex64::from_polar(1.0, k as f64 * FRAC_PI_2);
        assert!((l_eigenvalue(k as i64) - polar).norm() <= 1e-15, "k = {k}");
        assert!((l_eigenvalue(k as i64) - (Complex64::new(1.0, 0.0) - ik)).norm() <= 1e-13);
    }
}

proptest! {
    #![proptest_config(cases(30))]

    #[test]
    fn kernel_is_the_four_fold_harmonics(seed in any::<u64>()) {
        let mut r = rng(seed);
        let four = four_fold_series(&mut r);
        let n = 512;
        let samples = four.sample(n);
        for i in 0..n {
            prop_assert!((samples[i] - samples[(i + n / 4) % n]).abs() <= 1e-12);
        }
        prop_assert!(apply_l(&four).is_zero(1e-12));
        let other = unbalanced_series(&mut r);
        let s = other.sample(n);
        let shifted: f64 = (0..n).map(|i| (s[i] - s[(i + n / 4) % n]).abs()).fold(0.0, f64::max);
        prop_assert!(shifted > 1e-6);
    }
}
