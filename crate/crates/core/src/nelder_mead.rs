//! Nelder–Mead simplex search with restarts.
//!
//! The objective may return `+∞` outside its domain; such points are simply
//! never accepted.

#[derive(Debug, Clone, Copy)]
pub struct NelderMeadOptions {
    /// Edge length of the initial simplex.
    pub step: f64,
    /// Stop when the simplex diameter falls below this.
    pub xtol: f64,
    pub max_iter: usize,
    /// Fresh simplices built around the best point after convergence.
    pub restarts: usize,
}

#[derive(Debug, Clone)]
pub struct NelderMeadResult {
    pub x: Vec<f64>,
    pub value: f64,
    pub iterations: usize,
    pub converged: bool,
    /// Diameter of the final simplex.
    pub diameter: f64,
}

pub fn minimize(
    f: impl Fn(&[f64]) -> f64,
    x0: &[f64],
    opts: NelderMeadOptions,
) -> NelderMeadResult {
    let mut best = run(&f, x0, opts.step, opts);
    let mut total = best.iterations;
    for _ in 0..opts.restarts {
        if total >= opts.max_iter {
            break;
        }
        let step = (100.0 * best.diameter).max(100.0 * opts.xtol).min(opts.step);
        let next = run(&f, &best.x, step, NelderMeadOptions {
            max_iter: opts.max_iter - total,
            ..opts
        });
        total += next.iterations;
        let improved = next.value < best.value;
        if next.value <= best.value {
            best = next;
        }
        if !improved {
            break;
        }
    }
    best.iterations = total;
    best
}

fn run(f: &impl Fn(&[f64]) -> f64, x0: &[f64], step: f64, opts: NelderMeadOptions) -> NelderMeadResult {
    let n = x0.len();
    let mut pts: Vec<Vec<f64>> = vec![x0.to_vec()];
    for i in 0..n {
        let mut p = x0.to_vec();
        p[i] += step;
        if !f(&p).is_finite() {
            p[i] = x0[i] - step;
        }
        pts.push(p);
    }
    let mut vals: Vec<f64> = pts.iter().map(|p| f(p)).collect();
    let mut iterations = 0;
    let mut converged = false;
    while iterations < opts.max_iter {
        let mut order: Vec<usize> = (0..=n).collect();
        order.sort_by(|&a, &b| vals[a].total_cmp(&vals[b]));
        pts = order.iter().map(|&i| pts[i].clone()).collect();
        vals = order.iter().map(|&i| vals[i]).collect();
        if diameter(&pts) < opts.xtol {
            converged = true;
            break;
        }
        iterations += 1;
        let centroid: Vec<f64> = (0..n)
            .map(|j| pts[..n].iter().map(|p| p[j]).sum::<f64>() / n as f64)
            .collect();
        let along = |t: f64| -> Vec<f64> {
            centroid
                .iter()
                .zip(&pts[n])
                .map(|(c, w)| c + t * (c - w))
                .collect()
        };
        let xr = along(1.0);
        let fr = f(&xr);
        if fr < vals[0] {
            let xe = along(2.0);
            let fe = f(&xe);
            if fe < fr {
                pts[n] = xe;
                vals[n] = fe;
            } else {
                pts[n] = xr;
                vals[n] = fr;
            }
            continue;
        }
        if fr < vals[n - 1] {
            pts[n] = xr;
            vals[n] = fr;
            continue;
        }
        let (xc, fc) = if fr < vals[n] {
            let x = along(0.5);
            let v = f(&x);
            (x, v)
        } else {
            let x = along(-0.5);
            let v = f(&x);
            (x, v)
        };
        if fc < vals[n].min(fr) {
            pts[n] = xc;
            vals[n] = fc;
            continue;
        }
        for i in 1..=n {
            pts[i] = pts[0]
                .iter()
                .zip(&pts[i])
                .map(|(a, b)| a + 0.5 * (b - a))
                .collect();
            vals[i] = f(&pts[i]);
        }
    }
    let (bi, _) = vals
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .unwrap();
    NelderMeadResult {
        x: pts[bi].clone(),
        value: vals[bi],
        iterations,
        converged,
        diameter: diameter(&pts),
    }
}

fn diameter(pts: &[Vec<f64>]) -> f64 {
    let mut d: f64 = 0.0;
    for (i, a) in pts.iter().enumerate() {
        for b in &pts[i + 1..] {
            let s: f64 = a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum();
            d = d.max(s.sqrt());
        }
    }
    d
}
