//! Integer column reduction: solving M x = v over Z, ranks and kernels.

/// Column echelon form of a matrix given by its columns, with the unimodular transform.
pub struct Echelon {
    pub h: Vec<Vec<i128>>,
    pub u: Vec<Vec<i128>>,
    pub pivots: Vec<usize>,
    rows: usize,
}

impl Echelon {
    pub fn new(cols: &[Vec<i128>], rows: usize) -> Echelon {
        let n = cols.len();
        let mut h: Vec<Vec<i128>> = cols.to_vec();
        let mut u: Vec<Vec<i128>> = (0..n)
            .map(|j| (0..n).map(|i| i128::from(i == j)).collect())
            .collect();
        let mut pivots = Vec::new();
        let mut k = 0;
        for r in 0..rows {
            if k == n {
                break;
            }
            loop {
                let mut best: Option<usize> = None;
                for j in k..n {
                    if h[j][r] != 0 && best.is_none_or(|b| h[j][r].abs() < h[b][r].abs()) {
                        best = Some(j);
                    }
                }
                let Some(b) = best else { break };
                let mut done = true;
                for j in k..n {
                    if j != b && h[j][r] != 0 {
                        let f = h[j][r].div_euclid(h[b][r]);
                        sub_col(&mut h, j, b, f);
                        sub_col(&mut u, j, b, f);
                        if h[j][r] != 0 {
                            done = false;
                        }
                    }
                }
                if done {
                    h.swap(k, b);
                    u.swap(k, b);
                    if h[k][r] < 0 {
                        for x in h[k].iter_mut() {
                            *x = -*x;
                        }
                        for x in u[k].iter_mut() {
                            *x = -*x;
                        }
                    }
                    pivots.push(r);
                    k += 1;
                    break;
                }
            }
        }
        Echelon { h, u, pivots, rows }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// One integer solution of M x = v, if any.
    pub fn solve(&self, v: &[i128]) -> Option<Vec<i128>> {
        let mut res = v.to_vec();
        let mut y = vec![0i128; self.h.len()];
        for (j, &r) in self.pivots.iter().enumerate() {
            if (0..r).any(|i| res[i] != 0) {
                return None;
            }
            let piv = self.h[j][r];
            if res[r] % piv != 0 {
                return None;
            }
            y[j] = res[r] / piv;
            for i in 0..self.rows {
                res[i] -= y[j] * self.h[j][i];
            }
        }
        if res.iter().any(|&x| x != 0) {
            return None;
        }
        let n = self.u.len();
        Some((0..n).map(|i| (0..n).map(|j| self.u[j][i] * y[j]).sum()).collect())
    }

    /// Basis of the integer kernel {x : M x = 0}.
    pub fn kernel(&self) -> Vec<Vec<i128>> {
        (self.rank()..self.u.len()).map(|j| self.u[j].clone()).collect()
    }
}

fn sub_col(m: &mut [Vec<i128>], j: usize, b: usize, f: i128) {
    let (src, dst) = if b < j {
        let (l, r) = m.split_at_mut(j);
        (&l[b], &mut r[0])
    } else {
        let (l, r) = m.split_at_mut(b);
        (&r[0], &mut l[j])
    };
    for (d, s) in dst.iter_mut().zip(src.iter()) {
        *d -= f * s;
    }
}

pub fn integer_rank(cols: &[Vec<i128>]) -> usize {
    let rows = cols.first().map_or(0, |c| c.len());
    Echelon::new(cols, rows).rank()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solves_small_system() {
        let cols = vec![vec![2, 0], vec![1, 1]];
        let e = Echelon::new(&cols, 2);
        assert_eq!(e.rank(), 2);
        let x = e.solve(&[0, 2]).unwrap();
        assert_eq!(x, vec![-1, 2]);
        assert!(e.solve(&[1, 0]).is_none());
    }

    #[test]
    fn kernel_of_dependent_columns() {
        let cols = vec![vec![2, 0], vec![0, 2], vec![1, 1]];
        let e = Echelon::new(&cols, 2);
        assert_eq!(e.rank(), 2);
        let k = e.kernel();
        assert_eq!(k.len(), 1);
        let v = &k[0];
        for r in 0..2 {
            assert_eq!((0..3).map(|j| cols[j][r] * v[j]).sum::<i128>(), 0);
        }
    }
}
