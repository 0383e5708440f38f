#![allow(dead_code)]

//! Shared corpus and random generators for the integration tests.

use efn_core::diffsys::DiffSystem;
use efn_core::matrix::{Matrix, PolyMatrix, RatFunMatrix};
use efn_core::poly::Poly;
use efn_core::rat::Rat;
use efn_core::ratfun::RatFun;
use efn_core::relations::RelationBasis;
use efn_core::series::TruncSeries;
use efn_core::EFunction;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn rf(num: &[i64], den: &[i64]) -> RatFun {
    RatFun::new(Poly::from_ints(num), Poly::from_ints(den))
}

/// A corpus member: system, an E-function solution vector, and the known
/// relation basis among the components.
pub struct CorpusSystem {
    pub name: &'static str,
    pub system: DiffSystem,
    pub functions: Vec<EFunction>,
    pub relations: RelationBasis,
}

pub fn corpus() -> Vec<CorpusSystem> {
    let mut out = Vec::new();

    out.push(CorpusSystem {
        name: "diag(1,2)",
        system: DiffSystem::diagonal(&[Rat::from_int(1), Rat::from_int(2)]),
        functions: vec![EFunction::exp(Rat::one()), EFunction::exp(Rat::from_int(2))],
        relations: RelationBasis::empty(2),
    });

    out.push(CorpusSystem {
        name: "(z e^z, e^z)",
        system: DiffSystem::from_rows(vec![
            vec![RatFun::one(), RatFun::one()],
            vec![RatFun::zero(), RatFun::one()],
        ]),
        functions: vec![
            EFunction::exp_poly(Poly::from_ints(&[0, 1]), Rat::one()),
            EFunction::exp(Rat::one()),
        ],
        relations: RelationBasis::new(
            2,
            vec![vec![Poly::one(), Poly::from_ints(&[0, -1])]],
        ),
    });

    out.push(CorpusSystem {
        name: "rotation",
        system: DiffSystem::from_rows(vec![
            vec![RatFun::zero(), RatFun::one()],
            vec![-&RatFun::one(), RatFun::zero()],
        ]),
        functions: vec![
            EFunction::cos(Rat::one()),
            EFunction::lin_comb(&[(Rat::from_int(-1), EFunction::sin(Rat::one()))]),
        ],
        relations: RelationBasis::empty(2),
    });

    out.push(CorpusSystem {
        name: "(e^z, e^2z, e^z + e^2z)",
        system: DiffSystem::from_rows(vec![
            vec![RatFun::one(), RatFun::zero(), RatFun::zero()],
            vec![RatFun::zero(), RatFun::constant(Rat::from_int(2)), RatFun::zero()],
            vec![RatFun::one(), RatFun::constant(Rat::from_int(2)), RatFun::zero()],
        ]),
        functions: vec![
            EFunction::exp(Rat::one()),
            EFunction::exp(Rat::from_int(2)),
            EFunction::lin_comb(&[
                (Rat::one(), EFunction::exp(Rat::one())),
                (Rat::one(), EFunction::exp(Rat::from_int(2))),
            ]),
        ],
        relations: RelationBasis::new(
            3,
            vec![vec![Poly::one(), Poly::one(), Poly::from_ints(&[-1])]],
        ),
    });

    out.push(CorpusSystem {
        name: "((z-3)e^z, e^z, e^2z)",
        system: DiffSystem::from_rows(vec![
            vec![&RatFun::one() + &rf(&[1], &[-3, 1]), RatFun::zero(), RatFun::zero()],
            vec![RatFun::zero(), RatFun::one(), RatFun::zero()],
            vec![RatFun::zero(), RatFun::zero(), RatFun::constant(Rat::from_int(2))],
        ]),
        functions: vec![
            EFunction::exp_poly(Poly::from_ints(&[-3, 1]), Rat::one()),
            EFunction::exp(Rat::one()),
            EFunction::exp(Rat::from_int(2)),
        ],
        relations: RelationBasis::new(
            3,
            vec![vec![Poly::one(), Poly::from_ints(&[3, -1]), Poly::zero()]],
        ),
    });

    out.push(CorpusSystem {
        name: "z-pole clean",
        system: DiffSystem::from_rows(vec![
            vec![RatFun::one(), RatFun::zero()],
            vec![rf(&[1], &[0, 1]), rf(&[-1], &[0, 1])],
        ]),
        functions: vec![
            EFunction::exp(Rat::one()),
            // (e^z - 1)/z
            EFunction::lin_comb(&[
                (Rat::one(), EFunction::exp(Rat::one())),
                (Rat::from_int(-1), EFunction::exp(Rat::zero())),
            ])
            .divide_by_linear(&Rat::zero(), 10)
            .unwrap()
            .with_name("(exp(1)-1)/z"),
        ],
        relations: RelationBasis::empty(2),
    });

    out
}

pub fn small_rat(rng: &mut ChaCha8Rng) -> Rat {
    let num = rng.random_range(-4i64..=4);
    let den = rng.random_range(1i64..=3);
    Rat::from_frac(num, den)
}

pub fn small_poly(rng: &mut ChaCha8Rng, max_deg: usize) -> Poly {
    let deg = rng.random_range(0..=max_deg);
    Poly::new((0..=deg).map(|_| small_rat(rng)).collect())
}

/// Unimodular polynomial matrix: a product of elementary row additions and
/// swaps applied to the identity. det = +-1.
pub fn random_unimodular(rng: &mut ChaCha8Rng, n: usize, ops: usize) -> PolyMatrix {
    let mut m: PolyMatrix = Matrix::identity(n);
    for _ in 0..ops {
        let i = rng.random_range(0..n);
        let mut j = rng.random_range(0..n);
        if n > 1 {
            while j == i {
                j = rng.random_range(0..n);
            }
        }
        if n > 1 && rng.random_bool(0.25) {
            m.swap_rows(i, j);
            continue;
        }
        if n == 1 {
            continue;
        }
        let p = small_poly(rng, 1);
        for c in 0..n {
            let add = &p * &m[(j, c)];
            m[(i, c)] = &m[(i, c)] + &add;
        }
    }
    m
}

/// Polynomial matrix whose determinant is (a nonzero constant times) the
/// product of the given linear factors.
pub fn gauge_with_roots(rng: &mut ChaCha8Rng, n: usize, roots: &[Rat]) -> PolyMatrix {
    let u1 = random_unimodular(rng, n, 4);
    let u2 = random_unimodular(rng, n, 4);
    let mut d: PolyMatrix = Matrix::identity(n);
    for (idx, root) in roots.iter().enumerate() {
        let slot = idx % n;
        let lin = Poly::linear_root(root);
        d[(slot, slot)] = &d[(slot, slot)] * &lin;
    }
    u1.mul_mat(&d).mul_mat(&u2)
}

pub fn to_ratfun_matrix(m: &PolyMatrix) -> RatFunMatrix {
    m.map(|p| RatFun::from_poly(p.clone()))
}

/// Series vector of one fundamental-matrix column.
pub fn fundamental_column(
    f: &Matrix<TruncSeries>,
    j: usize,
) -> Vec<TruncSeries> {
    (0..f.rows()).map(|i| f[(i, j)].clone()).collect()
}
