//! Real roots of real polynomials on a closed interval.
//!
//! Roots are the eigenvalues of the (balanced) companion matrix, computed by
//! a shifted double-step QR iteration on the upper Hessenberg form, then
//! polished on the real axis. Near-real complex pairs are re-examined for
//! hidden real root pairs and for numerically double roots.

use crate::poly::Polynomial;

/// Imaginary-part window for accepting an eigenvalue as real, relative to `1 + |re|`.
pub const EPS_IM: f64 = 1e-8;
/// Merge distance for polished roots.
pub const EPS_SEP: f64 = 1e-10;
/// Residual threshold relative to `max |c_i|`.
pub const EPS_RES: f64 = 1e-8;
/// Leading coefficients smaller than this (relative) are dropped.
pub const EPS_LEAD: f64 = 1e-14;
/// Default slack for roots just outside the query interval.
pub const EPS_ROOT: f64 = 1e-12;

const NEWTON_STEPS: usize = 3;
const MAX_QR_ITERATIONS: usize = 60;
/// Complex pairs closer than this (relative) to the real axis get a second look.
const NEAR_REAL: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
pub enum RootError {
    #[error("polynomial is identically zero")]
    IdenticallyZero,
    #[error("polynomial has non-finite coefficients")]
    NonFinite,
    #[error("QR iteration did not converge for degree {0}")]
    NoConvergence(usize),
}

/// Sorted, deduplicated roots inside a query interval.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct RootSet {
    pub roots: Vec<f64>,
    pub multiplicity: Vec<u32>,
}

impl RootSet {
    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, u32)> + '_ {
        self.roots.iter().copied().zip(self.multiplicity.iter().copied())
    }
}

/// All real roots of `poly` in `[a, b]`.
///
/// Roots found within `eps_root` outside the interval are clamped onto it.
pub fn real_roots_in_interval(poly: &Polynomial, a: f64, b: f64, eps_root: f64) -> Result<RootSet, RootError> {
    assert!(a <= b, "empty root interval [{a}, {b}]");
    if !poly.is_finite() {
        return Err(RootError::NonFinite);
    }
    if poly.is_zero() {
        return Err(RootError::IdenticallyZero);
    }
    let p = poly.deflated(EPS_LEAD);
    if p.degree() == 0 {
        return Ok(RootSet::default());
    }

    let mut candidates: Vec<(f64, u32)> = Vec::new();

    // Exact zero roots factor out of the low-order end.
    let zeros = p.coeffs().iter().take_while(|&&c| c == 0.0).count();
    if zeros > 0 {
        candidates.push((0.0, zeros as u32));
    }
    let reduced = Polynomial::new(p.coeffs()[zeros..].to_vec());

    match reduced.degree() {
        0 => {}
        1 => {
            let c = reduced.coeffs();
            candidates.push((-c[0] / c[1], 1));
        }
        _ => {
            let eig = companion_eigenvalues(&reduced)?;
            let h_lo = a - eps_root;
            let h_hi = b + eps_root;
            for &(re, im) in &eig {
                if im.abs() <= EPS_IM * (1.0 + re.abs()) {
                    candidates.push((re, 1));
                } else if im > 0.0 && im <= NEAR_REAL * (1.0 + re.abs()) {
                    let reach = 2.0 * im;
                    if re + reach < h_lo || re - reach > h_hi {
                        continue;
                    }
                    candidates.extend(resolve_near_real_pair(&p, re, im));
                }
            }
        }
    }

    let mut polished: Vec<(f64, u32)> = candidates
        .into_iter()
        .map(|(r, m)| (polish(&p, r), m))
        .filter(|&(r, _)| r >= a - eps_root && r <= b + eps_root)
        .map(|(r, m)| (r.clamp(a, b), m))
        .collect();
    polished.sort_by(|x, y| x.0.total_cmp(&y.0));

    let merged = merge_clusters(&p, polished);

    let scale = p.norm_inf();
    let mut out = RootSet::default();
    for (r, m) in merged {
        if p.eval_compensated(r).abs() <= EPS_RES * scale {
            out.roots.push(r);
            out.multiplicity.push(m);
        }
    }
    Ok(out)
}

/// Root of a function known to change sign on `[lo, hi]`.
///
/// `f` returns value and derivative; `sign_lo` is the sign of `f` at `lo`
/// (the caller may know it more reliably than a fresh evaluation). Newton
/// steps are taken when they stay inside the shrinking bracket, bisection
/// otherwise.
pub fn solve_bracketed<F>(f: F, lo: f64, hi: f64, sign_lo: f64) -> f64
where
    F: Fn(f64) -> (f64, f64),
{
    solve_bracketed_from(f, lo, hi, sign_lo, 0.5 * (lo + hi))
}

/// [`solve_bracketed`] with the first iterate `start` inside `[lo, hi]`.
pub fn solve_bracketed_from<F>(f: F, mut lo: f64, mut hi: f64, sign_lo: f64, start: f64) -> f64
where
    F: Fn(f64) -> (f64, f64),
{
    let mut x = if start > lo && start < hi {
        start
    } else {
        0.5 * (lo + hi)
    };
    for _ in 0..100 {
        let (fx, dfx) = f(x);
        if fx == 0.0 {
            return x;
        }
        if (fx > 0.0) == (sign_lo > 0.0) {
            lo = x;
        } else {
            hi = x;
        }
        if hi - lo <= 4.0 * f64::EPSILON * (lo.abs().max(hi.abs()).max(1.0)) {
            break;
        }
        let newton = x - fx / dfx;
        // A step of a few ulps is rounding noise: converged.
        if dfx != 0.0 && (newton - x).abs() <= 8.0 * f64::EPSILON * x.abs().max(1.0) {
            return newton.clamp(lo, hi);
        }
        x = if dfx != 0.0 && newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
    }
    0.5 * (lo + hi)
}

/// Newton polishing on the real axis with compensated residuals. A step is
/// kept only if it does not increase the residual.
fn polish(p: &Polynomial, mut r: f64) -> f64 {
    let dp = p.derivative();
    let mut fr = p.eval_compensated(r).abs();
    for _ in 0..NEWTON_STEPS {
        if fr == 0.0 {
            break;
        }
        let d = dp.eval(r);
        if d == 0.0 || !d.is_finite() {
            break;
        }
        let next = r - p.eval_compensated(r) / d;
        let fnext = p.eval_compensated(next).abs();
        if !(fnext <= fr) {
            break;
        }
        r = next;
        fr = fnext;
    }
    r
}

/// A complex pair `re +- i im` close to the real axis may stand for two
/// nearby real roots (sign pattern `+ - +` around `re`) or a double root
/// (the critical point of `p` near `re` has a numerically zero value).
fn resolve_near_real_pair(p: &Polynomial, re: f64, im: f64) -> Vec<(f64, u32)> {
    let h = 2.0 * im;
    let f_mid = p.eval_compensated(re);
    let f_lo = p.eval_compensated(re - h);
    let f_hi = p.eval_compensated(re + h);
    let sgn = |v: f64| v > 0.0;
    if f_mid != 0.0 && f_lo != 0.0 && f_hi != 0.0 && sgn(f_lo) == sgn(f_hi) && sgn(f_mid) != sgn(f_lo) {
        let f = |s: f64| (p.eval_compensated(s), p.derivative().eval(s));
        let sign_lo = if f_lo > 0.0 { 1.0 } else { -1.0 };
        let r1 = solve_bracketed(f, re - h, re, sign_lo);
        let r2 = solve_bracketed(f, re, re + h, -sign_lo);
        return vec![(r1, 1), (r2, 1)];
    }
    match critical_point_near(p, re, re - h, re + h) {
        Some(c) if numerically_zero(p, c) => vec![(c, 2)],
        _ => Vec::new(),
    }
}

/// Zero of `p'` in `[lo, hi]` reached by Newton from `start`, if any.
fn critical_point_near(p: &Polynomial, start: f64, lo: f64, hi: f64) -> Option<f64> {
    let dp = p.derivative();
    let ddp = dp.derivative();
    let (d_lo, d_hi) = (dp.eval_compensated(lo), dp.eval_compensated(hi));
    if d_lo == 0.0 {
        return Some(lo);
    }
    if d_hi == 0.0 {
        return Some(hi);
    }
    if (d_lo > 0.0) != (d_hi > 0.0) {
        let sign_lo = if d_lo > 0.0 { 1.0 } else { -1.0 };
        return Some(solve_bracketed(
            |s| (dp.eval_compensated(s), ddp.eval(s)),
            lo,
            hi,
            sign_lo,
        ));
    }
    // No sign change of p' over the window: try plain Newton from the start.
    let mut c = start;
    for _ in 0..8 {
        let d2 = ddp.eval(c);
        if d2 == 0.0 {
            return None;
        }
        c -= dp.eval_compensated(c) / d2;
    }
    (c >= lo && c <= hi).then_some(c)
}

fn numerically_zero(p: &Polynomial, s: f64) -> bool {
    p.eval_compensated(s).abs() <= 4.0 * p.eval_error_bound(s)
}

/// Merges sorted candidates closer than `EPS_SEP`, and adjacent candidates
/// between which `p` stays numerically zero (a multiple root split apart by
/// eigenvalue perturbation).
fn merge_clusters(p: &Polynomial, sorted: Vec<(f64, u32)>) -> Vec<(f64, u32)> {
    let mut out: Vec<(f64, u32, f64)> = Vec::with_capacity(sorted.len());
    for (r, m) in sorted {
        if let Some(last) = out.last_mut() {
            let (lr, lm, first) = *last;
            if r - lr <= EPS_SEP {
                *last = (lr, lm + m, first);
                continue;
            }
            let cluster_radius = 1e-6 * (1.0 + r.abs());
            if r - first <= cluster_radius {
                if let Some(c) = critical_point_near(p, 0.5 * (first + r), first, r) {
                    if numerically_zero(p, c) {
                        *last = (c, lm + m, first);
                        continue;
                    }
                }
            }
        }
        out.push((r, m, r));
    }
    out.into_iter().map(|(r, m, _)| (r, m)).collect()
}

/// Eigenvalues `(re, im)` of the companion matrix of `p` (degree >= 1).
fn companion_eigenvalues(p: &Polynomial) -> Result<Vec<(f64, f64)>, RootError> {
    let c = p.coeffs();
    let n = p.degree();
    let lead = c[n];
    // 1-based (n+1)x(n+1) storage keeps the QR sweep close to its textbook form.
    let mut a = vec![vec![0.0; n + 1]; n + 1];
    for j in 1..=n {
        a[1][j] = -c[n - j] / lead;
    }
    for i in 2..=n {
        a[i][i - 1] = 1.0;
    }
    balance(&mut a, n);
    hessenberg_qr(&mut a, n)
}

fn balance(a: &mut [Vec<f64>], n: usize) {
    const RADIX: f64 = 2.0;
    let sqrdx = RADIX * RADIX;
    let mut done = false;
    while !done {
        done = true;
        for i in 1..=n {
            let mut r = 0.0;
            let mut c = 0.0;
            for j in 1..=n {
                if j != i {
                    c += a[j][i].abs();
                    r += a[i][j].abs();
                }
            }
            if c != 0.0 && r != 0.0 {
                let mut g = r / RADIX;
                let mut f = 1.0;
                let s = c + r;
                while c < g {
                    f *= RADIX;
                    c *= sqrdx;
                }
                g = r * RADIX;
                while c > g {
                    f /= RADIX;
                    c /= sqrdx;
                }
                if (c + r) / f < 0.95 * s {
                    done = false;
                    let g = 1.0 / f;
                    for j in 1..=n {
                        a[i][j] *= g;
                    }
                    for j in 1..=n {
                        a[j][i] *= f;
                    }
                }
            }
        }
    }
}

/// Francis double-shift QR on an upper Hessenberg matrix (1-based storage).
fn hessenberg_qr(a: &mut [Vec<f64>], n: usize) -> Result<Vec<(f64, f64)>, RootError> {
    let mut wr = vec![0.0; n + 1];
    let mut wi = vec![0.0; n + 1];
    let mut anorm = 0.0;
    for i in 1..=n {
        for j in i.saturating_sub(1).max(1)..=n {
            anorm += a[i][j].abs();
        }
    }
    let mut nn = n;
    let mut t = 0.0;
    while nn >= 1 {
        let mut its = 0;
        loop {
            // Look for a single small subdiagonal element.
            let mut l = nn;
            while l >= 2 {
                let mut s = a[l - 1][l - 1].abs() + a[l][l].abs();
                if s == 0.0 {
                    s = anorm;
                }
                if a[l][l - 1].abs() + s == s {
                    a[l][l - 1] = 0.0;
                    break;
                }
                l -= 1;
            }
            let mut x = a[nn][nn];
            if l == nn {
                wr[nn] = x + t;
                wi[nn] = 0.0;
                nn -= 1;
                break;
            }
            let mut y = a[nn - 1][nn - 1];
            let mut w = a[nn][nn - 1] * a[nn - 1][nn];
            if l == nn - 1 {
                let p = 0.5 * (y - x);
                let q = p * p + w;
                let mut z = q.abs().sqrt();
                x += t;
                if q >= 0.0 {
                    z = p + z.copysign(p);
                    wr[nn - 1] = x + z;
                    wr[nn] = x + z;
                    if z != 0.0 {
                        wr[nn] = x - w / z;
                    }
                    wi[nn - 1] = 0.0;
                    wi[nn] = 0.0;
                } else {
                    wr[nn - 1] = x + p;
                    wr[nn] = x + p;
                    wi[nn - 1] = -z;
                    wi[nn] = z;
                }
                nn = nn.saturating_sub(2);
                break;
            }
            if its == MAX_QR_ITERATIONS {
                return Err(RootError::NoConvergence(n));
            }
            if its == 10 || its == 20 {
                // Exceptional shift.
                t += x;
                for i in 1..=nn {
                    a[i][i] -= x;
                }
                let s = a[nn][nn - 1].abs() + a[nn - 1][nn - 2].abs();
                x = 0.75 * s;
                y = x;
                w = -0.4375 * s * s;
            }
            its += 1;
            let mut m = nn - 2;
            let (mut p, mut q, mut r);
            loop {
                let z = a[m][m];
                let rr = x - z;
                let ss = y - z;
                p = (rr * ss - w) / a[m + 1][m] + a[m][m + 1];
                q = a[m + 1][m + 1] - z - rr - ss;
                r = a[m + 2][m + 1];
                let s = p.abs() + q.abs() + r.abs();
                p /= s;
                q /= s;
                r /= s;
                if m == l {
                    break;
                }
                let u = a[m][m - 1].abs() * (q.abs() + r.abs());
                let v = p.abs() * (a[m - 1][m - 1].abs() + z.abs() + a[m + 1][m + 1].abs());
                if u + v == v {
                    break;
                }
                m -= 1;
            }
            for i in (m + 2)..=nn {
                a[i][i - 2] = 0.0;
                if i != m + 2 {
                    a[i][i - 3] = 0.0;
                }
            }
            let mut k = m;
            while k < nn {
                if k != m {
                    p = a[k][k - 1];
                    q = a[k + 1][k - 1];
                    r = 0.0;
                    if k != nn - 1 {
                        r = a[k + 2][k - 1];
                    }
                    x = p.abs() + q.abs() + r.abs();
                    if x != 0.0 {
                        p /= x;
                        q /= x;
                        r /= x;
                    }
                }
                let s = (p * p + q * q + r * r).sqrt().copysign(p);
                if s != 0.0 {
                    if k == m {
                        if l != m {
                            a[k][k - 1] = -a[k][k - 1];
                        }
                    } else {
                        a[k][k - 1] = -s * x;
                    }
                    p += s;
                    x = p / s;
                    y = q / s;
                    let z = r / s;
                    q /= p;
                    r /= p;
                    for j in k..=nn {
                        let mut pp = a[k][j] + q * a[k + 1][j];
                        if k != nn - 1 {
                            pp += r * a[k + 2][j];
                            a[k + 2][j] -= pp * z;
                        }
                        a[k + 1][j] -= pp * y;
                        a[k][j] -= pp * x;
                    }
                    let mmin = if nn < k + 3 { nn } else { k + 3 };
                    for i in l..=mmin {
                        let mut pp = x * a[i][k] + y * a[i][k + 1];
                        if k != nn - 1 {
                            pp += z * a[i][k + 2];
                            a[i][k + 2] -= pp * r;
                        }
                        a[i][k + 1] -= pp * q;
                        a[i][k] -= pp;
                    }
                }
                k += 1;
            }
            if l >= nn - 1 {
                break;
            }
        }
    }
    Ok((1..=n).map(|i| (wr[i], wi[i])).collect())
}
