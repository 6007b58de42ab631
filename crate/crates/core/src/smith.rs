//! Smith normal form of small integer matrices, with checked arithmetic.

use crate::error::{Error, Result};

fn add_mul(x: i64, y: i64, q: i64) -> Result<i64> {
    // x - q * y
    q.checked_mul(y).and_then(|p| x.checked_sub(p)).ok_or(Error::Overflow)
}

/// Diagonal of the Smith normal form of `m` (rows of equal length): the
/// `min(rows, cols)` invariant factors, non-negative, each dividing the next.
pub fn smith_diagonal(m: &[Vec<i64>]) -> Result<Vec<i64>> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    if m.iter().any(|r| r.len() != cols) {
        return Err(Error::Precondition("ragged matrix".into()));
    }
    let mut a: Vec<Vec<i64>> = m.to_vec();
    let k = rows.min(cols);
    for t in 0..k {
        loop {
            // smallest nonzero entry of the trailing block becomes the pivot
            let pivot = (t..rows)
                .flat_map(|i| (t..cols).map(move |j| (i, j)))
                .filter(|&(i, j)| a[i][j] != 0)
                .min_by_key(|&(i, j)| a[i][j].unsigned_abs());
            let Some((pi, pj)) = pivot else {
                // the rest of the matrix is zero
                return Ok(finish(&a, k));
            };
            a.swap(t, pi);
            for row in a.iter_mut() {
                row.swap(t, pj);
            }
            let p = a[t][t];
            let mut clean = true;
            for i in t + 1..rows {
                let q = a[i][t] / p;
                for j in t..cols {
                    a[i][j] = add_mul(a[i][j], a[t][j], q)?;
                }
                clean &= a[i][t] == 0;
            }
            for j in t + 1..cols {
                let q = a[t][j] / p;
                for i in t..rows {
                    a[i][j] = add_mul(a[i][j], a[i][t], q)?;
                }
                clean &= a[t][j] == 0;
            }
            if !clean {
                continue;
            }
            // pivot must divide the whole trailing block; otherwise fold the
            // offending row into row t and go again
            let bad = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| a[i][j] % p != 0));
            match bad {
                Some(i) => {
                    for j in t..cols {
                        a[t][j] = a[t][j].checked_add(a[i][j]).ok_or(Error::Overflow)?;
                    }
                }
                None => break,
            }
        }
    }
    Ok(finish(&a, k))
}

fn finish(a: &[Vec<i64>], k: usize) -> Vec<i64> {
    (0..k).map(|i| a[i][i].abs()).collect()
}
