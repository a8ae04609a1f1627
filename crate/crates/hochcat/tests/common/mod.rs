//! Shared test oracles, written independently of the library's main code
//! paths: a dense fraction-free rank routine and the classical (unshifted,
//! unreduced) Hochschild complex of an ordinary algebra.

#![allow(dead_code)]

use hochcat::dgcat::{CatRef, Elt};
use hochcat::linalg::{Field, Scalar};

/// Dense fraction-free (Bareiss) elimination rank over F_p.
pub fn bareiss_rank_fp(p: u64, rows: usize, cols: usize, entries: &[(usize, usize, u64)]) -> usize {
    let mut m = vec![vec![0i128; cols]; rows];
    for &(r, c, v) in entries {
        m[r][c] = (v % p) as i128;
    }
    let p = p as i128;
    let mut rank = 0;
    let mut prev = 1i128;
    for _ in 0..cols.min(rows) {
        // leftmost column with a nonzero entry in the remaining rows
        let mut pivot = None;
        'outer: for c in 0..cols {
            for r in rank..rows {
                if m[r][c].rem_euclid(p) != 0 {
                    pivot = Some((r, c));
                    break 'outer;
                }
            }
        }
        let Some((pr, pc)) = pivot else { break };
        m.swap(rank, pr);
        for r in rank + 1..rows {
            for c in 0..cols {
                if c == pc {
                    continue;
                }
                // Bareiss update: (a_rc * a_pp - a_rp * a_pc) / prev
                let num = m[r][c] * m[rank][pc] - m[r][pc] * m[rank][c];
                let quotient = mod_div(num.rem_euclid(p), prev.rem_euclid(p), p);
                m[r][c] = quotient;
            }
            m[r][pc] = 0;
        }
        prev = m[rank][pc].rem_euclid(p);
        rank += 1;
    }
    rank
}

fn mod_div(a: i128, b: i128, p: i128) -> i128 {
    // b^{p-2} mod p
    assert!(b.rem_euclid(p) != 0, "fraction-free step divided by zero");
    let mut acc = 1i128;
    let mut base = b.rem_euclid(p);
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    a.rem_euclid(p) * acc % p
}

/// Dense Bareiss rank over the integers (for rational matrices cleared of
/// denominators before calling).
pub fn bareiss_rank_int(rows: usize, cols: usize, entries: &[(usize, usize, i128)]) -> usize {
    let mut m = vec![vec![0i128; cols]; rows];
    for &(r, c, v) in entries {
        m[r][c] = v;
    }
    let mut rank = 0usize;
    let mut prev = 1i128;
    loop {
        let mut pivot = None;
        'outer: for c in 0..cols {
            for r in rank..rows {
                if m[r][c] != 0 {
                    pivot = Some((r, c));
                    break 'outer;
                }
            }
        }
        let Some((pr, pc)) = pivot else { break };
        m.swap(rank, pr);
        for r in rank + 1..rows {
            for c in 0..cols {
                if c == pc {
                    continue;
                }
                m[r][c] = (m[r][c] * m[rank][pc] - m[r][pc] * m[rank][c]) / prev;
            }
            m[r][pc] = 0;
        }
        prev = m[rank][pc];
        rank += 1;
        if rank == rows {
            break;
        }
    }
    rank
}

/// The classical Hochschild complex of a one-object, degree-0 algebra
/// given as a dg category: C^n = Hom(A^{tensor n}, A) with the textbook
/// differential, no shifts, dense matrices, rank by its own elimination.
pub struct ClassicalHochschild {
    pub dim_a: usize,
    field: Field,
    cat: CatRef,
}

impl ClassicalHochschild {
    pub fn new(cat: &CatRef) -> Self {
        assert_eq!(cat.n_objects(), 1);
        let dim_a = cat.hom(0, 0).space.dim(0);
        assert_eq!(cat.hom(0, 0).total_dim(), dim_a, "algebra must sit in degree 0");
        ClassicalHochschild {
            dim_a,
            field: cat.field,
            cat: cat.clone(),
        }
    }

    pub fn dim_c(&self, n: usize) -> usize {
        self.dim_a.pow(n as u32) * self.dim_a
    }

    fn mult(&self, i: usize, j: usize) -> Vec<Scalar> {
        let h = self.cat.hom(0, 0);
        let a = Elt::basis(&h.space, 0, i);
        let b = Elt::basis(&h.space, 0, j);
        self.cat.compose(0, 0, 0, &a, &b).coords
    }

    /// Index of the basis cochain sending the tuple `t` to basis `o`.
    fn cochain_index(&self, t: &[usize], o: usize) -> usize {
        let mut idx = 0;
        for &i in t {
            idx = idx * self.dim_a + i;
        }
        idx * self.dim_a + o
    }

    fn tuples(&self, n: usize) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new()];
        for _ in 0..n {
            let mut next = Vec::new();
            for t in &out {
                for i in 0..self.dim_a {
                    let mut s = t.clone();
                    s.push(i);
                    next.push(s);
                }
            }
            out = next;
        }
        out
    }

    /// The dense matrix of the classical differential C^n -> C^{n+1}.
    pub fn delta(&self, n: usize) -> Vec<Vec<Scalar>> {
        let rows = self.dim_c(n + 1);
        let cols = self.dim_c(n);
        let zero = self.field.zero();
        let mut m = vec![vec![zero.clone(); cols]; rows];
        // (delta f)(a_1..a_{n+1}) = a_1 f(a_2..)
        //   + sum_i (-1)^i f(a_1,..,a_i a_{i+1},..)
        //   + (-1)^{n+1} f(a_1..a_n) a_{n+1}
        for t in self.tuples(n + 1) {
            for o in 0..self.dim_a {
                // column contributions for each source basis cochain
                // term 1: a_1 * f(rest)
                for fo in 0..self.dim_a {
                    let prod = self.mult(t[0], fo);
                    let coeff = prod[o].clone();
                    if !coeff.is_zero() {
                        let col = self.cochain_index(&t[1..], fo);
                        let row = self.cochain_index(&t, o);
                        m[row][col] = &m[row][col] + &coeff;
                    }
                }
                // middle terms
                for i in 0..n {
                    let prod = self.mult(t[i], t[i + 1]);
                    for (k, c) in prod.iter().enumerate() {
                        if c.is_zero() {
                            continue;
                        }
                        let mut s = Vec::new();
                        s.extend_from_slice(&t[..i]);
                        s.push(k);
                        s.extend_from_slice(&t[i + 2..]);
                        let col = self.cochain_index(&s, o);
                        let row = self.cochain_index(&t, o);
                        let sgn = if (i + 1) % 2 == 0 {
                            self.field.one()
                        } else {
                            -&self.field.one()
                        };
                        m[row][col] = &m[row][col] + &(c * &sgn);
                    }
                }
                // last term
                for fo in 0..self.dim_a {
                    let prod = self.mult(fo, t[n]);
                    let coeff = prod[o].clone();
                    if !coeff.is_zero() {
                        let col = self.cochain_index(&t[..n], fo);
                        let row = self.cochain_index(&t, o);
                        let sgn = if (n + 1) % 2 == 0 {
                            self.field.one()
                        } else {
                            -&self.field.one()
                        };
                        m[row][col] = &m[row][col] + &(&coeff * &sgn);
                    }
                }
            }
        }
        m
    }

    /// Rank by plain dense Gauss-Jordan over the field (written here, not
    /// shared with the library's sparse elimination).
    pub fn rank(m: &[Vec<Scalar>]) -> usize {
        if m.is_empty() {
            return 0;
        }
        let mut m: Vec<Vec<Scalar>> = m.to_vec();
        let rows = m.len();
        let cols = m[0].len();
        let mut rank = 0;
        for c in 0..cols {
            let mut pr = None;
            for r in rank..rows {
                if !m[r][c].is_zero() {
                    pr = Some(r);
                    break;
                }
            }
            let Some(pr) = pr else { continue };
            m.swap(rank, pr);
            let inv = m[rank][c].inv();
            for cc in 0..cols {
                m[rank][cc] = &m[rank][cc] * &inv;
            }
            for r in 0..rows {
                if r != rank && !m[r][c].is_zero() {
                    let f = m[r][c].clone();
                    for cc in 0..cols {
                        let d = &f * &m[rank][cc];
                        m[r][cc] = &m[r][cc] - &d;
                    }
                }
            }
            rank += 1;
            if rank == rows {
                break;
            }
        }
        rank
    }

    /// Hochschild cohomology dimensions in degrees 0..=max via the
    /// classical complex.
    pub fn hh_dims(&self, max: usize) -> Vec<usize> {
        let mut deltas = Vec::new();
        for n in 0..=max {
            deltas.push(self.delta(n));
        }
        let mut out = Vec::new();
        for n in 0..=max {
            let dn_rank = Self::rank(&deltas[n]);
            let ker = self.dim_c(n) - dn_rank;
            let prev_rank = if n == 0 {
                0
            } else {
                Self::rank(&deltas[n - 1])
            };
            out.push(ker - prev_rank);
        }
        out
    }
}
