use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type IntMatrix = Vec<Vec<i64>>;

/// `U A V = D` with `U`, `V` unimodular and `d_1 | d_2 | ...` on the diagonal.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Snf {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
}

impl Snf {
    pub fn diagonal(&self) -> Vec<i64> {
        let k = self.d.len().min(self.d.first().map_or(0, |r| r.len()));
        (0..k).map(|i| self.d[i][i]).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomologyH1 {
    pub betti: usize,
    /// Invariant factors greater than 1.
    pub torsion: Vec<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MappingTorusClass {
    pub n: i64,
    pub monodromy: [[i64; 2]; 2],
    pub h1: HomologyH1,
}

fn identity(n: usize) -> IntMatrix {
    (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect()
}

fn axpy_row(m: &mut IntMatrix, dst: usize, src: usize, q: i64) -> Result<()> {
    for j in 0..m[dst].len() {
        let v = m[src][j]
            .checked_mul(q)
            .and_then(|x| m[dst][j].checked_add(x))
            .ok_or(Error::Overflow("smith normal form"))?;
        m[dst][j] = v;
    }
    Ok(())
}

fn axpy_col(m: &mut IntMatrix, dst: usize, src: usize, q: i64) -> Result<()> {
    for row in m.iter_mut() {
        row[dst] = row[src]
            .checked_mul(q)
            .and_then(|x| row[dst].checked_add(x))
            .ok_or(Error::Overflow("smith normal form"))?;
    }
    Ok(())
}

fn swap_cols(m: &mut IntMatrix, a: usize, b: usize) {
    for row in m.iter_mut() {
        row.swap(a, b);
    }
}

fn negate_row(m: &mut IntMatrix, i: usize) {
    for x in m[i].iter_mut() {
        *x = -*x;
    }
}

pub fn smith_normal_form(a: &IntMatrix) -> Result<Snf> {
    let rows = a.len();
    let cols = a.first().map_or(0, |r| r.len());
    if a.iter().any(|r| r.len() != cols) {
        return Err(Error::Invalid("ragged integer matrix".into()));
    }
    let mut d = a.clone();
    let mut u = identity(rows);
    let mut v = identity(cols);
    for t in 0..rows.min(cols) {
        loop {
            // smallest nonzero entry of the trailing block becomes the pivot
            let pivot = (t..rows)
                .flat_map(|i| (t..cols).map(move |j| (i, j)))
                .filter(|&(i, j)| d[i][j] != 0)
                .min_by_key(|&(i, j)| d[i][j].unsigned_abs());
            let Some((pi, pj)) = pivot else {
                return Ok(Snf { u, d, v });
            };
            d.swap(t, pi);
            u.swap(t, pi);
            swap_cols(&mut d, t, pj);
            swap_cols(&mut v, t, pj);
            let p = d[t][t];
            let mut clean = true;
            for i in t + 1..rows {
                let q = d[i][t].div_euclid(p);
                if q != 0 {
                    axpy_row(&mut d, i, t, -q)?;
                    axpy_row(&mut u, i, t, -q)?;
                }
                clean &= d[i][t] == 0;
            }
            for j in t + 1..cols {
                let q = d[t][j].div_euclid(p);
                if q != 0 {
                    axpy_col(&mut d, j, t, -q)?;
                    axpy_col(&mut v, j, t, -q)?;
                }
                clean &= d[t][j] == 0;
            }
            if !clean {
                continue;
            }
            let bad = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| d[i][j] % p != 0));
            match bad {
                Some(i) => {
                    axpy_row(&mut d, t, i, 1)?;
                    axpy_row(&mut u, t, i, 1)?;
                }
                None => break,
            }
        }
        if d[t][t] < 0 {
            negate_row(&mut d, t);
            negate_row(&mut u, t);
        }
    }
    Ok(Snf { u, d, v })
}

/// `H_1` of the mapping torus of `M` on `T^2`: `Z + coker(M - I)`.
pub fn h1_of_monodromy(m: [[i64; 2]; 2]) -> Result<HomologyH1> {
    let a: IntMatrix = vec![vec![m[0][0] - 1, m[0][1]], vec![m[1][0], m[1][1] - 1]];
    let snf = smith_normal_form(&a)?;
    let diag = snf.diagonal();
    let free = diag.iter().filter(|&&x| x == 0).count();
    Ok(HomologyH1 {
        betti: 1 + free,
        torsion: diag.into_iter().filter(|&x| x > 1).collect(),
    })
}

/// Monodromy `(p, q) -> (p q^n, q)`, i.e. `[[1, n], [0, 1]]`.
pub fn h1_mapping_torus(n: i64) -> Result<MappingTorusClass> {
    if n < 1 {
        return Err(Error::Invalid(format!("n must be at least 1, got {n}")));
    }
    let monodromy = [[1, n], [0, 1]];
    Ok(MappingTorusClass {
        n,
        monodromy,
        h1: h1_of_monodromy(monodromy)?,
    })
}
