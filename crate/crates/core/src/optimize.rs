//! Small derivative-free optimizers used by the discord search and the
//! peak-metric extraction.

/// Result of a local search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Optimum<X> {
    pub x: X,
    pub value: f64,
    pub evals: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NelderMeadOptions {
    /// Stop once the spread of simplex values falls below this.
    pub f_tol: f64,
    /// ... and the simplex diameter falls below this.
    pub x_tol: f64,
    pub max_evals: usize,
}

impl Default for NelderMeadOptions {
    fn default() -> Self {
        NelderMeadOptions {
            f_tol: 1e-8,
            x_tol: 1e-6,
            max_evals: 2000,
        }
    }
}

/// Maximize `f` over the plane, starting from a right-angled simplex with
/// legs `step` at `x0`.
pub fn nelder_mead_max(
    f: impl Fn([f64; 2]) -> f64,
    x0: [f64; 2],
    step: [f64; 2],
    opts: NelderMeadOptions,
) -> Optimum<[f64; 2]> {
    // Work with g = −f so the textbook minimization steps apply.
    let g = |x: [f64; 2]| -f(x);
    let evals = std::cell::Cell::new(0usize);
    let eval = |x: [f64; 2]| {
        evals.set(evals.get() + 1);
        g(x)
    };
    let mut simplex = [
        x0,
        [x0[0] + step[0], x0[1]],
        [x0[0], x0[1] + step[1]],
    ];
    let mut vals = [eval(simplex[0]), eval(simplex[1]), eval(simplex[2])];

    let lerp = |a: [f64; 2], b: [f64; 2], t: f64| [a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])];

    loop {
        // Order best → worst.
        let mut idx = [0, 1, 2];
        idx.sort_by(|&a, &b| vals[a].total_cmp(&vals[b]));
        simplex = [simplex[idx[0]], simplex[idx[1]], simplex[idx[2]]];
        vals = [vals[idx[0]], vals[idx[1]], vals[idx[2]]];

        let spread = vals[2] - vals[0];
        let size = simplex[1..]
            .iter()
            .map(|p| (p[0] - simplex[0][0]).hypot(p[1] - simplex[0][1]))
            .fold(0.0, f64::max);
        if (spread <= opts.f_tol && size <= opts.x_tol) || evals.get() >= opts.max_evals {
            break;
        }

        let centroid = lerp(simplex[0], simplex[1], 0.5);
        let worst = simplex[2];
        let reflected = lerp(centroid, worst, -1.0);
        let fr = eval(reflected);
        if fr < vals[0] {
            let expanded = lerp(centroid, worst, -2.0);
            let fe = eval(expanded);
            if fe < fr {
                simplex[2] = expanded;
                vals[2] = fe;
            } else {
                simplex[2] = reflected;
                vals[2] = fr;
            }
        } else if fr < vals[1] {
            simplex[2] = reflected;
            vals[2] = fr;
        } else {
            let (contracted, fc) = if fr < vals[2] {
                let c = lerp(centroid, reflected, 0.5);
                (c, eval(c))
            } else {
                let c = lerp(centroid, worst, 0.5);
                (c, eval(c))
            };
            if fc < vals[2].min(fr) {
                simplex[2] = contracted;
                vals[2] = fc;
            } else {
                for k in 1..3 {
                    simplex[k] = lerp(simplex[0], simplex[k], 0.5);
                    vals[k] = eval(simplex[k]);
                }
            }
        }
    }

    Optimum {
        x: simplex[0],
        value: -vals[0],
        evals: evals.get(),
    }
}

/// Golden-section maximization of a unimodal `f` on `[a, b]` down to an
/// interval width of `tol`.
pub fn golden_section_max(f: impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> Optimum<f64> {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (a.min(b), a.max(b));
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    let mut evals = 2;
    while b - a > tol {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
        evals += 1;
    }
    let (x, value) = if fc >= fd { (c, fc) } else { (d, fd) };
    Optimum { x, value, evals }
}
