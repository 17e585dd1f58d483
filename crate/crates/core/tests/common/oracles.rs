//! Slow, independent reference implementations used to check the library.
#![allow(dead_code, clippy::needless_range_loop)]

/// SplitMix64: a tiny deterministic generator for test inputs.
pub struct Mix(pub u64);

impl Mix {
    pub fn next(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform in [0, 1).
    pub fn unit(&mut self) -> f64 {
        (self.next() >> 11) as f64 / (1u64 << 53) as f64
    }

    /// Standard normal via Box-Muller.
    pub fn normal(&mut self) -> f64 {
        let u = 1.0 - self.unit();
        let v = self.unit();
        (-2.0 * u.ln()).sqrt() * (std::f64::consts::TAU * v).cos()
    }

    pub fn below(&mut self, n: usize) -> usize {
        (self.unit() * n as f64) as usize
    }
}

// ---- dense matrices (row-major d x d) ----

pub fn matmul(a: &[f64], b: &[f64], d: usize) -> Vec<f64> {
    let mut c = vec![0.0; d * d];
    for i in 0..d {
        for k in 0..d {
            let aik = a[i * d + k];
            for j in 0..d {
                c[i * d + j] += aik * b[k * d + j];
            }
        }
    }
    c
}

pub fn identity(d: usize) -> Vec<f64> {
    let mut m = vec![0.0; d * d];
    for i in 0..d {
        m[i * d + i] = 1.0;
    }
    m
}

/// Gauss-Jordan inverse with partial pivoting.
pub fn inverse(a: &[f64], d: usize) -> Vec<f64> {
    let mut m = a.to_vec();
    let mut inv = identity(d);
    for col in 0..d {
        let piv = (col..d).max_by(|&x, &y| m[x * d + col].abs().total_cmp(&m[y * d + col].abs())).unwrap();
        if piv != col {
            for j in 0..d {
                m.swap(piv * d + j, col * d + j);
                inv.swap(piv * d + j, col * d + j);
            }
        }
        let p = m[col * d + col];
        assert!(p != 0.0, "singular matrix");
        for j in 0..d {
            m[col * d + j] /= p;
            inv[col * d + j] /= p;
        }
        for r in 0..d {
            if r != col {
                let f = m[r * d + col];
                if f != 0.0 {
                    for j in 0..d {
                        m[r * d + j] -= f * m[col * d + j];
                        inv[r * d + j] -= f * inv[col * d + j];
                    }
                }
            }
        }
    }
    inv
}

/// Principal square root by the Denman-Beavers iteration.
pub fn denman_beavers_sqrt(a: &[f64], d: usize) -> Vec<f64> {
    let mut y = a.to_vec();
    let mut z = identity(d);
    for _ in 0..100 {
        let yi = inverse(&y, d);
        let zi = inverse(&z, d);
        let ny: Vec<f64> = y.iter().zip(&zi).map(|(p, q)| 0.5 * (p + q)).collect();
        let nz: Vec<f64> = z.iter().zip(&yi).map(|(p, q)| 0.5 * (p + q)).collect();
        let delta = ny.iter().zip(&y).map(|(p, q)| (p - q).abs()).fold(0.0, f64::max);
        let scale = ny.iter().map(|v| v.abs()).fold(0.0, f64::max);
        y = ny;
        z = nz;
        if delta <= 1e-15 * scale {
            break;
        }
    }
    y
}

/// Fréchet distance via the non-symmetric product square root.
pub fn frechet_oracle(mu_a: &[f64], cov_a: &[f64], mu_b: &[f64], cov_b: &[f64], d: usize) -> f64 {
    let mean: f64 = mu_a.iter().zip(mu_b).map(|(a, b)| (a - b) * (a - b)).sum();
    let root = denman_beavers_sqrt(&matmul(cov_a, cov_b, d), d);
    let tr = |m: &[f64]| (0..d).map(|i| m[i * d + i]).sum::<f64>();
    mean + tr(cov_a) + tr(cov_b) - 2.0 * tr(&root)
}

/// Random SPD matrix `G G^T / d + eps I`.
pub fn random_spd(rng: &mut Mix, d: usize, eps: f64) -> Vec<f64> {
    let g: Vec<f64> = (0..d * d).map(|_| rng.normal()).collect();
    let mut c = vec![0.0; d * d];
    for i in 0..d {
        for j in 0..d {
            c[i * d + j] = (0..d).map(|k| g[i * d + k] * g[j * d + k]).sum::<f64>() / d as f64;
        }
        c[i * d + i] += eps;
    }
    c
}

// ---- PRDC by enumeration ----

fn sqdist(a: &[f32], b: &[f32]) -> f64 {
    let mut s = 0.0f64;
    for i in 0..a.len() {
        let t = a[i] as f64 - b[i] as f64;
        s += t * t;
    }
    s
}

fn kth_radii(rows: &[&[f32]], k: usize) -> Vec<f64> {
    (0..rows.len())
        .map(|i| {
            let mut d: Vec<f64> = (0..rows.len()).filter(|&j| j != i).map(|j| sqdist(rows[i], rows[j])).collect();
            d.sort_by(f64::total_cmp);
            d[k - 1]
        })
        .collect()
}

/// Brute-force (precision, recall, density, coverage) over full distance
/// matrices; features are rows of `dim` values.
pub fn prdc_oracle(src: &[f32], tgt: &[f32], dim: usize, k_pr: usize, k_dc: usize) -> [f64; 4] {
    let s: Vec<&[f32]> = src.chunks(dim).collect();
    let t: Vec<&[f32]> = tgt.chunks(dim).collect();
    let (n, m) = (s.len(), t.len());
    let s_pr = kth_radii(&s, k_pr);
    let s_dc = kth_radii(&s, k_dc);
    let t_pr = kth_radii(&t, k_pr);
    let dist: Vec<Vec<f64>> = t.iter().map(|tj| s.iter().map(|si| sqdist(tj, si)).collect()).collect();

    let precise = (0..m).filter(|&j| (0..n).any(|i| dist[j][i] <= s_pr[i])).count();
    let recalled = (0..n).filter(|&i| (0..m).any(|j| dist[j][i] <= t_pr[j])).count();
    let mut hits = 0usize;
    for j in 0..m {
        for i in 0..n {
            if dist[j][i] <= s_dc[i] {
                hits += 1;
            }
        }
    }
    let covered = (0..n).filter(|&i| (0..m).any(|j| dist[j][i] <= s_dc[i])).count();
    [
        precise as f64 / m as f64,
        recalled as f64 / n as f64,
        hits as f64 / (k_dc as f64 * m as f64),
        covered as f64 / n as f64,
    ]
}

// ---- double-double moments ----

#[derive(Clone, Copy, Debug, Default)]
pub struct Dd(pub f64, pub f64);

fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

impl Dd {
    pub fn add(self, o: Dd) -> Dd {
        let (s, e) = two_sum(self.0, o.0);
        let e = e + self.1 + o.1;
        let (hi, lo) = two_sum(s, e);
        Dd(hi, lo)
    }

    pub fn mul(self, o: Dd) -> Dd {
        let p = self.0 * o.0;
        let e = self.0.mul_add(o.0, -p) + self.0 * o.1 + self.1 * o.0;
        let (hi, lo) = two_sum(p, e);
        Dd(hi, lo)
    }

    pub fn neg(self) -> Dd {
        Dd(-self.0, -self.1)
    }

    /// Division by a small integer-valued f64.
    pub fn div(self, q: f64) -> Dd {
        let hi = self.0 / q;
        let r = self.add(Dd(hi, 0.0).mul(Dd(q, 0.0)).neg());
        let lo = r.0 / q;
        let (h, l) = two_sum(hi, lo);
        Dd(h, l)
    }
}

/// Mean and unbiased covariance in double-double arithmetic.
pub fn moments_dd(values: &[f32], n: usize, d: usize) -> (Vec<f64>, Vec<f64>) {
    let mut mean = vec![Dd::default(); d];
    for r in 0..n {
        for c in 0..d {
            mean[c] = mean[c].add(Dd(values[r * d + c] as f64, 0.0));
        }
    }
    let mean: Vec<Dd> = mean.into_iter().map(|m| m.div(n as f64)).collect();
    let mut cov = vec![Dd::default(); d * d];
    for r in 0..n {
        let x: Vec<Dd> = (0..d).map(|c| Dd(values[r * d + c] as f64, 0.0).add(mean[c].neg())).collect();
        for i in 0..d {
            for j in 0..d {
                cov[i * d + j] = cov[i * d + j].add(x[i].mul(x[j]));
            }
        }
    }
    (
        mean.iter().map(|m| m.0 + m.1).collect(),
        cov.into_iter()
            .map(|c| {
                let q = c.div((n - 1) as f64);
                q.0 + q.1
            })
            .collect(),
    )
}
