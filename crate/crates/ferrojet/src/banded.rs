//! Banded Gaussian elimination with partial pivoting.

#[derive(Debug, Clone)]
pub(crate) struct BandMatrix {
    n: usize,
    kl: usize,
    ku: usize,
    width: usize,
    data: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Singular {
    pub column: usize,
}

impl BandMatrix {
    /// `kl` sub-diagonals and `ku` super-diagonals; rows keep `kl` extra
    /// slots on the right for pivoting fill-in.
    pub fn zeros(n: usize, kl: usize, ku: usize) -> Self {
        let width = 2 * kl + ku + 1;
        BandMatrix { n, kl, ku, width, data: vec![0.0; n * width] }
    }

    fn slot(&self, i: usize, j: usize) -> usize {
        let start = i as isize - self.kl as isize;
        let off = j as isize - start;
        debug_assert!(off >= 0 && (off as usize) < self.width, "({i}, {j}) outside band");
        i * self.width + off as usize
    }

    pub fn add(&mut self, i: usize, j: usize, v: f64) {
        assert!(
            j + self.kl >= i && j <= i + self.ku,
            "entry ({i}, {j}) outside declared bandwidth"
        );
        let k = self.slot(i, j);
        self.data[k] += v;
    }

    fn get(&self, i: usize, j: usize) -> f64 {
        self.data[self.slot(i, j)]
    }

    fn set(&mut self, i: usize, j: usize, v: f64) {
        let k = self.slot(i, j);
        self.data[k] = v;
    }

    /// Solves A x = rhs, consuming the factorisation workspace.
    pub fn solve(mut self, mut rhs: Vec<f64>) -> Result<Vec<f64>, Singular> {
        let n = self.n;
        let reach = self.kl + self.ku;
        for k in 0..n {
            let last = (k + self.kl).min(n - 1);
            let (mut p, mut best) = (k, self.get(k, k).abs());
            for i in k + 1..=last {
                let v = self.get(i, k).abs();
                if v > best {
                    p = i;
                    best = v;
                }
            }
            if best == 0.0 || !best.is_finite() {
                return Err(Singular { column: k });
            }
            let jmax = (k + reach).min(n - 1);
            if p != k {
                for j in k..=jmax {
                    let (a, b) = (self.get(k, j), self.get(p, j));
                    self.set(k, j, b);
                    self.set(p, j, a);
                }
                rhs.swap(k, p);
            }
            let pivot = self.get(k, k);
            for i in k + 1..=last {
                let f = self.get(i, k) / pivot;
                if f == 0.0 {
                    continue;
                }
                self.set(i, k, 0.0);
                for j in k + 1..=jmax {
                    let v = self.get(i, j) - f * self.get(k, j);
                    self.set(i, j, v);
                }
                rhs[i] -= f * rhs[k];
            }
        }
        for i in (0..n).rev() {
            let jmax = (i + reach).min(n - 1);
            let mut acc = rhs[i];
            for j in i + 1..=jmax {
                acc -= self.get(i, j) * rhs[j];
            }
            rhs[i] = acc / self.get(i, i);
        }
        Ok(rhs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solves_tridiagonal_system() {
        // −x_{i−1} + 2x_i − x_{i+1} = 1 with x_{−1} = x_n = 0.
        let n = 50;
        let mut a = BandMatrix::zeros(n, 1, 1);
        for i in 0..n {
            a.add(i, i, 2.0);
            if i > 0 {
                a.add(i, i - 1, -1.0);
            }
            if i + 1 < n {
                a.add(i, i + 1, -1.0);
            }
        }
        let x = a.solve(vec![1.0; n]).unwrap();
        for (i, xi) in x.iter().enumerate() {
            let t = (i + 1) as f64;
            let want = 0.5 * t * ((n + 1) as f64 - t);
            assert!((xi - want).abs() < 1e-10);
        }
    }

    #[test]
    fn needs_pivoting() {
        // Zero leading diagonal entry.
        let mut a = BandMatrix::zeros(3, 2, 1);
        a.add(0, 1, 1.0);
        a.add(1, 0, 1.0);
        a.add(1, 2, 1.0);
        a.add(2, 0, 2.0);
        a.add(2, 1, 1.0);
        a.add(2, 2, 3.0);
        let x = a.solve(vec![2.0, 4.0, 13.0]).unwrap();
        let want = [1.0, 2.0, 3.0];
        for (a, b) in x.iter().zip(want) {
            assert!((a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn reports_singular() {
        let a = BandMatrix::zeros(4, 1, 1);
        assert!(a.solve(vec![1.0; 4]).is_err());
    }
}
