//! Floating-point oracles: base points of a pencil by resultant elimination
//! and Newton refinement, and singular points of a surface by homotopy
//! continuation. Neither result is a certificate; both cross-check the exact
//! routines.

use num_complex::Complex64;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use super::Pencil;
use crate::multipoly::Form;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum NumericError {
    #[error("input still depends on parameters: {0}")]
    SymbolicParameters(String),
    #[error("elimination degenerate in every chart")]
    EliminationDegenerate,
}

#[derive(Debug, Clone, Copy)]
pub struct NumericOptions {
    pub residual_tol: f64,
    pub dedup_tol: f64,
}

impl Default for NumericOptions {
    fn default() -> Self {
        NumericOptions {
            residual_tol: 1e-9,
            dedup_tol: 1e-6,
        }
    }
}

#[derive(Debug, Clone)]
pub struct NumericPoints {
    /// Points scaled so the coordinate of largest modulus is 1.
    pub points: Vec<[Complex64; 4]>,
    pub residuals: Vec<f64>,
    pub diagnostics: Vec<String>,
}

impl NumericPoints {
    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().cloned().fold(0.0, f64::max)
    }

    /// True when `x` is within `tol` of one of the points.
    pub fn contains(&self, x: &[Complex64; 4], tol: f64) -> bool {
        self.points.iter().any(|p| proj_distance(p, x) < tol)
    }
}

const SEED: u64 = 0x5eed_0f_0dd5;

/// Numeric polynomial in four homogeneous variables.
#[derive(Clone, Debug)]
struct NPoly {
    terms: Vec<([u32; 4], Complex64)>,
}

impl NPoly {
    fn from_form(f: &Form) -> Result<Self, NumericError> {
        let params = f.params();
        if !params.is_empty() {
            return Err(NumericError::SymbolicParameters(params.join(",")));
        }
        let terms = f
            .terms()
            .map(|(e, c)| ([e[0], e[1], e[2], e[3]], c.to_complex()))
            .collect();
        Ok(NPoly { terms })
    }

    fn eval(&self, x: &[Complex64; 4]) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (e, c) in &self.terms {
            let mut t = *c;
            for i in 0..4 {
                if e[i] > 0 {
                    t *= x[i].powu(e[i]);
                }
            }
            acc += t;
        }
        acc
    }

    fn partial(&self, i: usize) -> NPoly {
        let terms = self
            .terms
            .iter()
            .filter(|(e, _)| e[i] > 0)
            .map(|(e, c)| {
                let mut n = *e;
                n[i] -= 1;
                (n, c * e[i] as f64)
            })
            .collect();
        NPoly { terms }
    }

    fn scale_norm(&self) -> f64 {
        self.terms.iter().map(|(_, c)| c.norm()).fold(0.0, f64::max)
    }
}

fn normalize(x: &[Complex64; 4]) -> [Complex64; 4] {
    let m = x.iter().map(|c| c.norm()).fold(0.0, f64::max);
    // first coordinate whose modulus is within a relative 1e-8 of the max
    let k = (0..4).find(|&i| x[i].norm() >= m * (1.0 - 1e-8)).unwrap();
    let s = x[k];
    [x[0] / s, x[1] / s, x[2] / s, x[3] / s]
}

/// Distance between projective points after scaling both so that the
/// largest coordinate of `a` becomes 1.
pub fn proj_distance(a: &[Complex64; 4], b: &[Complex64; 4]) -> f64 {
    let k = (0..4)
        .max_by(|&i, &j| a[i].norm().partial_cmp(&a[j].norm()).unwrap())
        .unwrap();
    if b[k].norm() <= 1e-12 * b.iter().map(|c| c.norm()).fold(0.0, f64::max) {
        return f64::INFINITY;
    }
    (0..4)
        .map(|i| (a[i] / a[k] - b[i] / b[k]).norm())
        .fold(0.0, f64::max)
}

fn residual(polys: &[NPoly], x: &[Complex64; 4]) -> f64 {
    let m = x.iter().map(|c| c.norm()).fold(0.0, f64::max);
    let y = [x[0] / m, x[1] / m, x[2] / m, x[3] / m];
    polys
        .iter()
        .map(|p| {
            let s = p.scale_norm();
            if s == 0.0 {
                0.0
            } else {
                p.eval(&y).norm() / s
            }
        })
        .fold(0.0, f64::max)
}

/// Solve a dense complex system; `None` when numerically singular.
fn solve(mut a: Vec<Vec<Complex64>>, mut b: Vec<Complex64>) -> Option<Vec<Complex64>> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| a[i][col].norm().partial_cmp(&a[j][col].norm()).unwrap())?;
        if a[piv][col].norm() < 1e-300 {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for r in col + 1..n {
            let f = a[r][col] / a[col][col];
            for c in col..n {
                let v = a[col][c];
                a[r][c] -= f * v;
            }
            let v = b[col];
            b[r] -= f * v;
        }
    }
    let mut x = vec![Complex64::new(0.0, 0.0); n];
    for r in (0..n).rev() {
        let mut s = b[r];
        for c in r + 1..n {
            s -= a[r][c] * x[c];
        }
        x[r] = s / a[r][r];
    }
    Some(x)
}

fn det(mut a: Vec<Vec<Complex64>>) -> Complex64 {
    let n = a.len();
    let mut d = Complex64::new(1.0, 0.0);
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&i, &j| a[i][col].norm().partial_cmp(&a[j][col].norm()).unwrap())
            .unwrap();
        if a[piv][col].norm() == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        if piv != col {
            a.swap(col, piv);
            d = -d;
        }
        d *= a[col][col];
        for r in col + 1..n {
            let f = a[r][col] / a[col][col];
            for c in col..n {
                let v = a[col][c];
                a[r][c] -= f * v;
            }
        }
    }
    d
}

fn horner(c: &[Complex64], z: Complex64) -> Complex64 {
    c.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, a| acc * z + a)
}

fn trim_numeric(mut c: Vec<Complex64>, rel: f64) -> Vec<Complex64> {
    let m = c.iter().map(|x| x.norm()).fold(0.0, f64::max);
    while c.len() > 1 && c.last().unwrap().norm() <= rel * m {
        c.pop();
    }
    c
}

/// Coefficients of a polynomial of degree at most `n` from values on a circle.
fn interpolate(n: usize, radius: f64, f: impl Fn(Complex64) -> Complex64) -> Vec<Complex64> {
    let m = n + 1;
    let pts: Vec<Complex64> = (0..m)
        .map(|k| Complex64::from_polar(radius, 2.0 * std::f64::consts::PI * k as f64 / m as f64))
        .collect();
    let vals: Vec<Complex64> = pts.iter().map(|&z| f(z)).collect();
    (0..m)
        .map(|j| {
            let s: Complex64 = (0..m)
                .map(|k| vals[k] * Complex64::from_polar(1.0, -2.0 * std::f64::consts::PI * (j * k) as f64 / m as f64))
                .sum();
            s / (m as f64 * radius.powi(j as i32))
        })
        .collect()
}

/// All complex roots by the Aberth iteration.
pub fn poly_roots(coeffs: &[Complex64]) -> Vec<Complex64> {
    let c = trim_numeric(coeffs.to_vec(), 0.0);
    let n = c.len() - 1;
    if n == 0 {
        return Vec::new();
    }
    let lead = c[n];
    let c: Vec<Complex64> = c.iter().map(|x| x / lead).collect();
    let dc: Vec<Complex64> = c.iter().enumerate().skip(1).map(|(i, x)| x * i as f64).collect();
    let bound = 1.0 + c[..n].iter().map(|x| x.norm()).fold(0.0, f64::max);
    let r0 = bound.min(c[..n].iter().map(|x| x.norm()).sum::<f64>().max(1e-3)).max(1e-3);
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| Complex64::from_polar(r0, 2.0 * std::f64::consts::PI * (k as f64 + 0.4) / n as f64 + 0.3))
        .collect();
    for _ in 0..2000 {
        let mut moved = 0.0f64;
        for i in 0..n {
            let p = horner(&c, z[i]);
            let dp = horner(&dc, z[i]);
            if p.norm() == 0.0 {
                continue;
            }
            let ratio = p / dp;
            let s: Complex64 = (0..n).filter(|&j| j != i).map(|j| Complex64::new(1.0, 0.0) / (z[i] - z[j])).sum();
            let w = ratio / (Complex64::new(1.0, 0.0) - ratio * s);
            if w.is_finite() {
                z[i] -= w;
                moved = moved.max(w.norm() / (1.0 + z[i].norm()));
            }
        }
        if moved < 1e-15 {
            break;
        }
    }
    z
}

/// Quadric in a dehomogenized chart, eliminating one variable.
struct ChartQuadric {
    a: [[Complex64; 4]; 4],
}

impl ChartQuadric {
    fn eval(&self, x: &[Complex64; 4]) -> Complex64 {
        let mut s = Complex64::new(0.0, 0.0);
        for i in 0..4 {
            for j in 0..4 {
                s += self.a[i][j] * x[i] * x[j];
            }
        }
        s
    }

    fn grad(&self, x: &[Complex64; 4]) -> [Complex64; 4] {
        let mut g = [Complex64::new(0.0, 0.0); 4];
        for i in 0..4 {
            for j in 0..4 {
                g[i] += self.a[i][j] * x[j] * 2.0;
            }
        }
        g
    }

    /// Coefficients `(a, b, c)` of the quadric as a polynomial in `x[w]`.
    fn in_var(&self, x: &[Complex64; 4], w: usize) -> (Complex64, Complex64, Complex64) {
        let mut y = *x;
        y[w] = Complex64::new(0.0, 0.0);
        let c = self.eval(&y);
        let mut b = Complex64::new(0.0, 0.0);
        for j in 0..4 {
            if j != w {
                b += self.a[w][j] * y[j] * 2.0;
            }
        }
        (self.a[w][w], b, c)
    }
}

fn quadric_matrix(f: &NPoly) -> [[Complex64; 4]; 4] {
    let mut a = [[Complex64::new(0.0, 0.0); 4]; 4];
    for (e, c) in &f.terms {
        let idx: Vec<usize> = (0..4).filter(|&i| e[i] > 0).collect();
        if idx.len() == 1 {
            a[idx[0]][idx[0]] += c;
        } else {
            a[idx[0]][idx[1]] += c * 0.5;
            a[idx[1]][idx[0]] += c * 0.5;
        }
    }
    a
}

fn quad_res(p: (Complex64, Complex64, Complex64), q: (Complex64, Complex64, Complex64)) -> Complex64 {
    let (a1, b1, c1) = p;
    let (a2, b2, c2) = q;
    let x = a1 * c2 - a2 * c1;
    x * x - (a1 * b2 - a2 * b1) * (b1 * c2 - b2 * c1)
}

fn sylvester(f: &[Complex64], g: &[Complex64]) -> Complex64 {
    let m = f.len() - 1;
    let n = g.len() - 1;
    let size = m + n;
    if size == 0 {
        return Complex64::new(1.0, 0.0);
    }
    let mut s = vec![vec![Complex64::new(0.0, 0.0); size]; size];
    for r in 0..n {
        for (k, c) in f.iter().rev().enumerate() {
            s[r][r + k] = *c;
        }
    }
    for r in 0..m {
        for (k, c) in g.iter().rev().enumerate() {
            s[n + r][r + k] = *c;
        }
    }
    det(s)
}

fn newton_chart(g: &[ChartQuadric], x: &mut [Complex64; 4], chart: usize) -> bool {
    let free: Vec<usize> = (0..4).filter(|&i| i != chart).collect();
    for _ in 0..60 {
        let f: Vec<Complex64> = g.iter().map(|q| q.eval(x)).collect();
        let jac: Vec<Vec<Complex64>> = g
            .iter()
            .map(|q| {
                let gr = q.grad(x);
                free.iter().map(|&i| gr[i]).collect()
            })
            .collect();
        let Some(dx) = solve(jac, f.iter().map(|v| -v).collect()) else {
            return false;
        };
        let mut step = 0.0f64;
        for (k, &i) in free.iter().enumerate() {
            x[i] += dx[k];
            step = step.max(dx[k].norm());
        }
        if !x.iter().all(|c| c.is_finite()) {
            return false;
        }
        if step < 1e-15 * (1.0 + x.iter().map(|c| c.norm()).fold(0.0, f64::max)) {
            break;
        }
    }
    true
}

fn push_unique(out: &mut NumericPoints, x: [Complex64; 4], r: f64, tol: f64) {
    let n = normalize(&x);
    if let Some(k) = out.points.iter().position(|p| proj_distance(p, &n) < tol) {
        if r < out.residuals[k] {
            out.points[k] = n;
            out.residuals[k] = r;
        }
    } else {
        out.points.push(n);
        out.residuals.push(r);
    }
}

fn sort_points(out: &mut NumericPoints) {
    let key = |p: &[Complex64; 4]| -> Vec<i64> {
        p.iter()
            .flat_map(|c| [(c.re * 1e6).round() as i64, (c.im * 1e6).round() as i64])
            .collect()
    };
    let mut idx: Vec<usize> = (0..out.points.len()).collect();
    idx.sort_by_key(|&i| key(&out.points[i]));
    out.points = idx.iter().map(|&i| out.points[i]).collect();
    out.residuals = idx.iter().map(|&i| out.residuals[i]).collect();
}

/// Base points of a fully specialized pencil.
///
/// In each chart `x_k = 1` (order `x3, x2, x1, x0`) one variable is
/// eliminated from fixed generic combinations of the quadrics by quadratic
/// resultants, a second by a Sylvester resultant; the resulting univariate
/// roots are lifted back and refined by Newton on the three quadrics.
pub fn numeric_base_points(p: &Pencil, opts: &NumericOptions) -> Result<NumericPoints, NumericError> {
    let polys: Vec<NPoly> = p.q.iter().map(NPoly::from_form).collect::<Result<_, _>>()?;
    let mats: Vec<[[Complex64; 4]; 4]> = polys.iter().map(quadric_matrix).collect();
    let mut rng = StdRng::seed_from_u64(SEED);
    let mut mix = [[Complex64::new(0.0, 0.0); 3]; 3];
    for row in mix.iter_mut() {
        for v in row.iter_mut() {
            *v = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        }
    }
    let g: Vec<ChartQuadric> = (0..3)
        .map(|i| {
            let mut a = [[Complex64::new(0.0, 0.0); 4]; 4];
            for (k, m) in mats.iter().enumerate() {
                let s = m.iter().flatten().map(|c| c.norm()).fold(0.0, f64::max);
                if s == 0.0 {
                    continue;
                }
                for r in 0..4 {
                    for c in 0..4 {
                        a[r][c] += mix[i][k] * m[r][c] / s;
                    }
                }
            }
            ChartQuadric { a }
        })
        .collect();
    let mut out = NumericPoints {
        points: Vec::new(),
        residuals: Vec::new(),
        diagnostics: Vec::new(),
    };
    let mut any_chart = false;
    let probe = Complex64::new(0.3719, -0.2811);
    for chart in [3usize, 2, 1, 0] {
        let free: Vec<usize> = (0..4).filter(|&i| i != chart).collect();
        let (u, v, w) = (free[0], free[1], free[2]);
        let point = |uu: Complex64, vv: Complex64| {
            let mut x = [Complex64::new(0.0, 0.0); 4];
            x[chart] = Complex64::new(1.0, 0.0);
            x[u] = uu;
            x[v] = vv;
            x
        };
        let ra = |uu: Complex64, vv: Complex64| {
            let x = point(uu, vv);
            quad_res(g[0].in_var(&x, w), g[1].in_var(&x, w))
        };
        let rb = |uu: Complex64, vv: Complex64| {
            let x = point(uu, vv);
            quad_res(g[0].in_var(&x, w), g[2].in_var(&x, w))
        };
        let da = trim_numeric(interpolate(4, 1.0, |vv| ra(probe, vv)), 1e-10).len() - 1;
        let db = trim_numeric(interpolate(4, 1.0, |vv| rb(probe, vv)), 1e-10).len() - 1;
        let in_v = |uu: Complex64, f: &dyn Fn(Complex64, Complex64) -> Complex64, d: usize| {
            let mut c = interpolate(4, 1.0, |vv| f(uu, vv));
            c.truncate(d + 1);
            c
        };
        let r = interpolate(16, 1.0, |uu| sylvester(&in_v(uu, &ra, da), &in_v(uu, &rb, db)));
        let scale = r.iter().map(|c| c.norm()).fold(0.0, f64::max);
        if scale < 1e-12 || da == 0 || db == 0 {
            out.diagnostics.push(format!("chart x{}: elimination degenerate", chart));
            continue;
        }
        any_chart = true;
        let r = trim_numeric(r, 1e-11);
        let mut found = 0;
        for u0 in poly_roots(&r) {
            for v0 in poly_roots(&in_v(u0, &ra, da)) {
                let x = point(u0, v0);
                let (a, b, c) = g[0].in_var(&x, w);
                let ws = if a.norm() > 1e-12 {
                    let d = (b * b - a * c * 4.0).sqrt();
                    vec![(-b + d) / (a * 2.0), (-b - d) / (a * 2.0)]
                } else if b.norm() > 1e-12 {
                    vec![-c / b]
                } else {
                    Vec::new()
                };
                for w0 in ws {
                    let mut x = x;
                    x[w] = w0;
                    if !newton_chart(&g, &mut x, chart) {
                        continue;
                    }
                    let res = residual(&polys, &x);
                    if res < opts.residual_tol {
                        found += 1;
                        push_unique(&mut out, x, res, opts.dedup_tol);
                    }
                }
            }
        }
        out.diagnostics.push(format!("chart x{}: {} refined candidates", chart, found));
    }
    if !any_chart {
        return Err(NumericError::EliminationDegenerate);
    }
    sort_points(&mut out);
    Ok(out)
}

/// Singular points of a fully specialized surface, by total-degree homotopy
/// on three generic combinations of the partial derivatives in a generic
/// affine chart, filtered by the vanishing of all four partials.
pub fn numeric_singular_points(f: &Form, opts: &NumericOptions) -> Result<NumericPoints, NumericError> {
    let poly = NPoly::from_form(f)?;
    let d = f.degree() as i32 - 1;
    let grads: Vec<NPoly> = (0..4).map(|i| poly.partial(i)).collect();
    let hess: Vec<Vec<NPoly>> = grads.iter().map(|g| (0..4).map(|j| g.partial(j)).collect()).collect();
    let mut rng = StdRng::seed_from_u64(SEED ^ 0xa11);
    let mut cplx = || Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
    let chart: Vec<Vec<Complex64>> = (0..4).map(|_| (0..4).map(|_| cplx()).collect()).collect();
    let mix: Vec<Vec<Complex64>> = (0..3).map(|_| (0..4).map(|_| cplx()).collect()).collect();
    let gamma = cplx();
    let lift = |y: &[Complex64]| -> [Complex64; 4] {
        let mut x = [Complex64::new(0.0, 0.0); 4];
        for r in 0..4 {
            x[r] = chart[r][0] * y[0] + chart[r][1] * y[1] + chart[r][2] * y[2] + chart[r][3];
        }
        x
    };
    let target = |y: &[Complex64]| -> (Vec<Complex64>, Vec<Vec<Complex64>>) {
        let x = lift(y);
        let gv: Vec<Complex64> = grads.iter().map(|g| g.eval(&x)).collect();
        let h: Vec<Vec<Complex64>> = hess.iter().map(|row| row.iter().map(|p| p.eval(&x)).collect()).collect();
        let vals = (0..3).map(|j| (0..4).map(|i| mix[j][i] * gv[i]).sum()).collect();
        let jac = (0..3)
            .map(|j| {
                (0..3)
                    .map(|k| {
                        let mut s = Complex64::new(0.0, 0.0);
                        for i in 0..4 {
                            for l in 0..4 {
                                s += mix[j][i] * h[i][l] * chart[l][k];
                            }
                        }
                        s
                    })
                    .collect()
            })
            .collect();
        (vals, jac)
    };
    let start = |y: &[Complex64]| -> (Vec<Complex64>, Vec<Vec<Complex64>>) {
        let vals = y.iter().map(|z| z.powi(d) - 1.0).collect();
        let jac = (0..3)
            .map(|j| (0..3).map(|k| if j == k { y[j].powi(d - 1) * d as f64 } else { Complex64::new(0.0, 0.0) }).collect())
            .collect();
        (vals, jac)
    };
    let homotopy = |y: &[Complex64], s: f64| -> (Vec<Complex64>, Vec<Vec<Complex64>>, Vec<Complex64>) {
        let (fv, fj) = target(y);
        let (gv, gj) = start(y);
        let vals = (0..3).map(|j| gamma * gv[j] * (1.0 - s) + fv[j] * s).collect();
        let jac = (0..3)
            .map(|j| (0..3).map(|k| gamma * gj[j][k] * (1.0 - s) + fj[j][k] * s).collect())
            .collect();
        let ds = (0..3).map(|j| fv[j] - gamma * gv[j]).collect();
        (vals, jac, ds)
    };
    let correct = |y: &mut Vec<Complex64>, s: f64, iters: usize, tol: f64| -> bool {
        for _ in 0..iters {
            let (v, j, _) = homotopy(y, s);
            let Some(dy) = solve(j, v.iter().map(|c| -c).collect()) else {
                return false;
            };
            let n: f64 = dy.iter().map(|c| c.norm()).fold(0.0, f64::max);
            for k in 0..3 {
                y[k] += dy[k];
            }
            if n < tol * (1.0 + y.iter().map(|c| c.norm()).fold(0.0, f64::max)) {
                return true;
            }
        }
        false
    };
    let roots: Vec<Complex64> = (0..d).map(|k| Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * k as f64 / d as f64)).collect();
    let mut starts = Vec::new();
    for a in &roots {
        for b in &roots {
            for c in &roots {
                starts.push(vec![*a, *b, *c]);
            }
        }
    }
    let mut out = NumericPoints {
        points: Vec::new(),
        residuals: Vec::new(),
        diagnostics: Vec::new(),
    };
    let mut failed = 0;
    for mut y in starts {
        let mut s = 0.0f64;
        let mut h = 0.01f64;
        let mut ok = true;
        while s < 1.0 {
            let step = h.min(1.0 - s);
            let (_, j, ds) = homotopy(&y, s);
            let Some(tan) = solve(j, ds.iter().map(|c| -c).collect()) else {
                ok = false;
                break;
            };
            let mut trial: Vec<Complex64> = (0..3).map(|k| y[k] + tan[k] * step).collect();
            if correct(&mut trial, s + step, 4, 1e-10) {
                y = trial;
                s += step;
                h = (h * 1.6).min(0.05);
            } else {
                h *= 0.5;
                if h < 1e-10 {
                    ok = false;
                    break;
                }
            }
            if y.iter().any(|c| c.norm() > 1e9 || !c.is_finite()) {
                ok = false;
                break;
            }
        }
        if !ok {
            failed += 1;
            continue;
        }
        correct(&mut y, 1.0, 30, 1e-15);
        let x = lift(&y);
        let res = residual(&grads, &x);
        if res < opts.residual_tol {
            push_unique(&mut out, x, res, opts.dedup_tol);
        }
    }
    out.diagnostics.push(format!("{} paths, {} failed", roots.len().pow(3), failed));
    sort_points(&mut out);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactfield::TowerElem;
    use crate::multipoly::xvars;

    fn x(i: usize) -> Form {
        Form::var(xvars(), i)
    }

    fn sq(i: usize, k: i64) -> Form {
        x(i).pow(2).scale(&TowerElem::from_int(k))
    }

    #[test]
    fn aberth_roots() {
        let c = [-6.0, 11.0, -6.0, 1.0].map(|v| Complex64::new(v, 0.0));
        let mut r: Vec<f64> = poly_roots(&c).iter().map(|z| z.re).collect();
        r.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for (a, b) in r.iter().zip([1.0, 2.0, 3.0]) {
            assert!((a - b).abs() < 1e-10);
        }
    }

    #[test]
    fn zero_system_base_points() {
        let p = Pencil::new(
            sq(1, 1).add(&sq(2, 1)).add(&sq(3, 1)),
            sq(2, -2).add(&sq(3, -4)),
            sq(0, 1).add(&sq(2, 1)).add(&sq(3, 4)),
        );
        let r = numeric_base_points(&p, &NumericOptions::default()).unwrap();
        assert_eq!(r.points.len(), 8, "{:?}", r.diagnostics);
        assert!(r.max_residual() < 1e-9);
        let s = Complex64::new(0.0, 2f64.sqrt());
        for a in [1.0, -1.0] {
            for b in [1.0, -1.0] {
                for d in [1.0, -1.0] {
                    let e = [s * a, Complex64::new(b, 0.0), s * d, Complex64::new(1.0, 0.0)];
                    assert!(r.contains(&e, 1e-9));
                }
            }
        }
    }

    #[test]
    fn fewer_points_for_degenerate_input() {
        // x0^2 = x1^2 = x0^2 + x1^2 = 0 is a line, not isolated points
        let p = Pencil::new(sq(0, 1), sq(1, 1), sq(0, 1).add(&sq(1, 1)));
        match numeric_base_points(&p, &NumericOptions::default()) {
            Ok(r) => assert!(r.points.len() < 8),
            Err(e) => assert_eq!(e, NumericError::EliminationDegenerate),
        }
    }

    #[test]
    fn singular_points_of_a_twelve_nodal_quartic() {
        // discriminant of the zero-parameter system at t = 2: 12 nodes
        let m = |i: usize, j: usize, k: i64| x(i).pow(2).mul(&x(j).pow(2)).scale(&TowerElem::from_int(k));
        let q = m(0, 1, 1).add(&m(1, 2, 1)).add(&m(1, 3, 4)).add(&m(0, 2, 1)).add(&m(0, 3, 1)).add(&m(2, 3, 1));
        let r = numeric_singular_points(&q, &NumericOptions::default()).unwrap();
        assert_eq!(r.points.len(), 12, "{:?}", r.diagnostics);
    }
}
