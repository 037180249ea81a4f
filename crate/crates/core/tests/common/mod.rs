#![allow(dead_code)]

use pfaff_core::expr_core::{int, parse_expression, rat, Poly, Rational, VarTable};
use pfaff_core::pfaff_geometry::{FirstJetPoint, HypersurfaceProblem, StructureMatrix};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn ints(v: &[i64]) -> Vec<Rational> {
    v.iter().map(|&x| int(x)).collect()
}

pub fn table(dim: usize) -> VarTable {
    VarTable::indexed("f", dim)
}

pub fn poly(text: &str, vars: &VarTable) -> Poly {
    parse_expression(text, vars).unwrap()
}

pub fn small_rational(r: &mut ChaCha8Rng) -> Rational {
    rat(r.random_range(-5..=5), r.random_range(1..=3))
}

pub fn random_point(r: &mut ChaCha8Rng, dim: usize) -> Vec<Rational> {
    (0..dim).map(|_| small_rational(r)).collect()
}

/// Random polynomial of total degree ≤ `deg` with a nonzero linear part, shifted so that it
/// vanishes at `point`.
pub fn random_rho(r: &mut ChaCha8Rng, vars: &VarTable, deg: u32, point: &[Rational]) -> Poly {
    let dim = vars.len();
    let mut terms = Vec::new();
    for k in 0..dim {
        let mut e = vec![0; dim];
        e[k] = 1;
        terms.push((e, int(r.random_range(-3..=3))));
    }
    for _ in 0..2 * dim {
        let mut e = vec![0u32; dim];
        let mut left = r.random_range(2..=deg);
        while left > 0 {
            e[r.random_range(0..dim)] += 1;
            left -= 1;
        }
        terms.push((e, int(r.random_range(-3..=3))));
    }
    let p = Poly::from_terms(vars, terms);
    let c = p.evaluate(point).unwrap();
    p.sub(&Poly::constant(vars, c))
}

pub fn random_int_matrix(r: &mut ChaCha8Rng, dim: usize) -> Vec<Vec<Rational>> {
    (0..dim).map(|_| (0..dim).map(|_| int(r.random_range(-4..=4))).collect()).collect()
}

pub fn complex_problem(rho: &str, dim: usize) -> HypersurfaceProblem {
    let t = table(dim);
    HypersurfaceProblem::new(poly(rho, &t), StructureMatrix::complex_standard(&t), (0, 1)).unwrap()
}

/// γ_j by Cramer's rule on the 2×2 system ρ₁x + ρ₂y = −ρ_j, μ₁x + μ₂y = −μ_j.
pub fn gamma_oracle(grad: &[Rational], a: &[Vec<Rational>]) -> Option<(Vec<Rational>, Vec<Rational>)> {
    let dim = grad.len();
    let mu: Vec<Rational> = (0..dim)
        .map(|i| (0..dim).map(|j| &grad[j] * &a[j][i]).sum())
        .collect();
    let det = &grad[0] * &mu[1] - &grad[1] * &mu[0];
    if det == int(0) {
        return None;
    }
    let mut g1 = Vec::new();
    let mut g2 = Vec::new();
    for j in 2..dim {
        let (b1, b2) = (-grad[j].clone(), -mu[j].clone());
        g1.push((&b1 * &mu[1] - &grad[1] * &b2) / &det);
        g2.push((&grad[0] * &b2 - &b1 * &mu[0]) / &det);
    }
    Some((g1, g2))
}

pub fn grad_at(rho: &Poly, point: &[Rational]) -> Vec<Rational> {
    (0..point.len()).map(|k| rho.differentiate(k).evaluate(point).unwrap()).collect()
}

/// First-order dual numbers: value + ε·derivative.
#[derive(Clone, Debug)]
struct Dual(Rational, Rational);

impl Dual {
    fn add(&self, o: &Dual) -> Dual {
        Dual(&self.0 + &o.0, &self.1 + &o.1)
    }
    fn sub(&self, o: &Dual) -> Dual {
        Dual(&self.0 - &o.0, &self.1 - &o.1)
    }
    fn mul(&self, o: &Dual) -> Dual {
        Dual(&self.0 * &o.0, &self.0 * &o.1 + &self.1 * &o.0)
    }
    fn div(&self, o: &Dual) -> Dual {
        Dual(&self.0 / &o.0, (&self.1 * &o.0 - &self.0 * &o.1) / (&o.0 * &o.0))
    }
}

/// Directional derivatives along `dir` of Γᵏ_j and β_{k,j}, by Cramer's rule on dual numbers.
pub fn dual_gamma_beta(pr: &HypersurfaceProblem, f: &[Rational], dir: &[Rational]) -> (Vec<Vec<Rational>>, Vec<Vec<Rational>>) {
    let dim = f.len();
    let rho = pr.internal_rho();
    let grad: Vec<Dual> = (0..dim)
        .map(|i| {
            let gi = rho.differentiate(i);
            let slope = (0..dim).map(|l| gi.differentiate(l).evaluate(f).unwrap() * &dir[l]).sum();
            Dual(gi.evaluate(f).unwrap(), slope)
        })
        .collect();
    let s = pr.internal_structure();
    let a: Vec<Vec<Dual>> = (0..dim)
        .map(|j| {
            (0..dim)
                .map(|i| {
                    let e = s.entry(j, i);
                    let slope = (0..dim).map(|l| e.derivative_at(l, f).unwrap() * &dir[l]).sum();
                    Dual(e.evaluate(f).unwrap(), slope)
                })
                .collect()
        })
        .collect();
    let zero = Dual(int(0), int(0));
    let mu: Vec<Dual> = (0..dim)
        .map(|i| (0..dim).fold(zero.clone(), |acc, j| acc.add(&grad[j].mul(&a[j][i]))))
        .collect();
    let det = grad[0].mul(&mu[1]).sub(&grad[1].mul(&mu[0]));
    let mut gam = vec![Vec::new(), Vec::new()];
    for j in 2..dim {
        let (b1, b2) = (zero.sub(&grad[j]), zero.sub(&mu[j]));
        gam[0].push(b1.mul(&mu[1]).sub(&grad[1].mul(&b2)).div(&det));
        gam[1].push(grad[0].mul(&b2).sub(&b1.mul(&mu[0])).div(&det));
    }
    let big_gamma: Vec<Vec<Rational>> = (0..dim)
        .map(|k| (0..dim - 2).map(|j| if k < 2 { gam[k][j].1.clone() } else { int(0) }).collect())
        .collect();
    let beta: Vec<Vec<Rational>> = (0..dim)
        .map(|k| {
            (0..dim - 2)
                .map(|j| a[k][0].mul(&gam[0][j]).add(&a[k][1].mul(&gam[1][j])).add(&a[k][j + 2]).1)
                .collect()
        })
        .collect();
    (big_gamma, beta)
}

/// cᵏ from the 2-form expansion of dθᵏ along (p₁, p₂ = 𝒜p₁).
pub fn torsion_oracle(pr: &HypersurfaceProblem, f_user: &[Rational], p: &[Rational]) -> Vec<Rational> {
    let f = pr.to_internal(f_user);
    let (p1, p2) = pr.full_jet(&FirstJetPoint::off_surface(pr, f_user.to_vec(), p.to_vec()).unwrap()).unwrap();
    let (dg_b, _) = dual_gamma_beta(pr, &f, &p2);
    let (_, db_a) = dual_gamma_beta(pr, &f, &p1);
    (0..f.len())
        .map(|k| (0..p.len()).map(|j| &p[j] * (&dg_b[k][j] - &db_a[k][j])).sum())
        .collect()
}
