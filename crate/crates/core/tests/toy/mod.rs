//! A four-dimensional filtered complex with a two-dimensional contraction
//! and a weight-raising perturbation, plus a matrix oracle for the
//! perturbed data.
#![allow(dead_code)]

use std::fmt;

use graded_pbw::graded::rational;
use graded_pbw::perturbation::{linear_map, Contraction, Filtered, LinearMap};
use graded_pbw::Rational;
use num_traits::Zero;

/// Basis `a, b, c, e` of `N` with weights `0, 1, 1, 2` and degrees
/// `0, 0, 1, 1`; basis `a, e` of `M` with weights `0, 2`.
pub const BIG_WEIGHTS: [u32; 4] = [0, 1, 1, 2];
pub const SMALL_WEIGHTS: [u32; 2] = [0, 2];

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Vector {
    pub coords: Vec<Rational>,
    pub weights: &'static [u32],
}

impl Vector {
    pub fn big(c: [i64; 4]) -> Self {
        Self { coords: c.iter().map(|&v| rational(v)).collect(), weights: &BIG_WEIGHTS }
    }

    pub fn small(c: [i64; 2]) -> Self {
        Self { coords: c.iter().map(|&v| rational(v)).collect(), weights: &SMALL_WEIGHTS }
    }

    pub fn from_coords(coords: Vec<Rational>, weights: &'static [u32]) -> Self {
        Self { coords, weights }
    }
}

impl fmt::Display for Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(|c| c.to_string()).collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

impl Filtered for Vector {
    fn zero_like(&self) -> Self {
        Self { coords: vec![Rational::zero(); self.coords.len()], weights: self.weights }
    }

    fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    fn add(&self, o: &Self) -> Self {
        Self { coords: self.coords.iter().zip(&o.coords).map(|(a, b)| a + b).collect(), weights: self.weights }
    }

    fn sub(&self, o: &Self) -> Self {
        Self { coords: self.coords.iter().zip(&o.coords).map(|(a, b)| a - b).collect(), weights: self.weights }
    }

    fn min_weight(&self) -> Option<u32> {
        self.coords
            .iter()
            .zip(self.weights)
            .filter(|(c, _)| !c.is_zero())
            .map(|(_, w)| *w)
            .min()
    }
}

/// A dense matrix acting on column vectors.
pub type Matrix = Vec<Vec<Rational>>;

pub fn matrix(rows: &[&[i64]]) -> Matrix {
    rows.iter().map(|r| r.iter().map(|&v| rational(v)).collect()).collect()
}

pub fn apply(m: &Matrix, v: &[Rational]) -> Vec<Rational> {
    m.iter().map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum()).collect()
}

pub fn mul(a: &Matrix, b: &Matrix) -> Matrix {
    let inner = b.len();
    let cols = b[0].len();
    a.iter()
        .map(|row| (0..cols).map(|j| (0..inner).map(|k| &row[k] * &b[k][j]).sum()).collect())
        .collect()
}

pub fn add(a: &Matrix, b: &Matrix) -> Matrix {
    a.iter().zip(b).map(|(r, s)| r.iter().zip(s).map(|(x, y)| x + y).collect()).collect()
}

pub fn identity(n: usize) -> Matrix {
    (0..n).map(|i| (0..n).map(|j| rational((i == j) as i64)).collect()).collect()
}

/// Gauss-Jordan inverse.
pub fn inverse(m: &Matrix) -> Matrix {
    let n = m.len();
    let mut a: Matrix = m.iter().zip(identity(n)).map(|(r, e)| r.iter().cloned().chain(e).collect()).collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero()).expect("invertible");
        a.swap(col, pivot);
        let p = a[col][col].clone();
        for x in a[col].iter_mut() {
            *x = &*x / &p;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                let row = a[col].clone();
                for (x, y) in a[r].iter_mut().zip(row) {
                    *x = &*x - &(&f * &y);
                }
            }
        }
    }
    a.into_iter().map(|r| r[n..].to_vec()).collect()
}

pub fn as_map(m: Matrix, weights: &'static [u32]) -> LinearMap<Vector, Vector> {
    linear_map(move |v: &Vector| Ok(Vector::from_coords(apply(&m, &v.coords), weights)))
}

/// `δ b = c`.
pub fn delta() -> Matrix {
    matrix(&[&[0, 0, 0, 0], &[0, 0, 0, 0], &[0, 1, 0, 0], &[0, 0, 0, 0]])
}

/// `σ(a) = a`, `σ(e) = e`.
pub fn sigma() -> Matrix {
    matrix(&[&[1, 0, 0, 0], &[0, 0, 0, 1]])
}

pub fn tau() -> Matrix {
    matrix(&[&[1, 0], &[0, 0], &[0, 0], &[0, 1]])
}

/// `h(c) = -b`.
pub fn homotopy() -> Matrix {
    matrix(&[&[0, 0, 0, 0], &[0, 0, -1, 0], &[0, 0, 0, 0], &[0, 0, 0, 0]])
}

/// `∂ a = c`, `∂ b = e`: raises the weight and `(δ + ∂)² = 0`.
pub fn perturbation() -> Matrix {
    matrix(&[&[0, 0, 0, 0], &[0, 0, 0, 0], &[1, 0, 0, 0], &[0, 1, 0, 0]])
}

pub fn contraction(h: Matrix) -> Contraction<Vector, Vector> {
    Contraction {
        big_d: as_map(delta(), &BIG_WEIGHTS),
        small_d: as_map(vec![vec![Rational::zero(); 2]; 2], &SMALL_WEIGHTS),
        sigma: as_map(sigma(), &SMALL_WEIGHTS),
        tau: as_map(tau(), &BIG_WEIGHTS),
        h: as_map(h, &BIG_WEIGHTS),
    }
}

pub fn big_basis() -> Vec<Vector> {
    (0..4).map(|i| {
        let mut c = [0; 4];
        c[i] = 1;
        Vector::big(c)
    }).collect()
}

pub fn small_basis() -> Vec<Vector> {
    vec![Vector::small([1, 0]), Vector::small([0, 1])]
}

/// Closed forms of the perturbed maps with `X = (1 - ∂h)⁻¹ ∂`:
/// `σ̆ = σ + σXh`, `τ̆ = τ + hXτ`, `h̆ = h + hXh`, `ϑ = σXτ`.
pub struct Oracle {
    pub sigma: Matrix,
    pub tau: Matrix,
    pub h: Matrix,
    pub theta: Matrix,
}

pub fn oracle() -> Oracle {
    let (s, t, h, p) = (sigma(), tau(), homotopy(), perturbation());
    let minus_ph: Matrix = mul(&p, &h).iter().map(|r| r.iter().map(|x| -x).collect()).collect();
    let x = mul(&inverse(&add(&identity(4), &minus_ph)), &p);
    Oracle {
        sigma: add(&s, &mul(&mul(&s, &x), &h)),
        tau: add(&t, &mul(&mul(&h, &x), &t)),
        h: add(&h, &mul(&mul(&h, &x), &h)),
        theta: mul(&mul(&s, &x), &t),
    }
}
