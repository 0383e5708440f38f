//! Machine-readable reports. Struct field order fixes the JSON key order,
//! so identical inputs always serialize to identical bytes; exact rationals
//! travel as "p/q" strings.

use serde::Serialize;

use efn_core::desing::DesingResult;
use efn_core::diffop::FrobeniusData;
use efn_core::diffsys::{DiffSystem, SingularLocus};
use efn_core::matrix::{PolyMatrix, RatMatrix};
use efn_core::poly::Poly;

#[derive(Serialize, Debug)]
pub struct Report {
    pub command: String,
    pub order: usize,
    pub status: String,
    pub result: Body,
}

#[derive(Serialize, Debug)]
#[serde(untagged)]
pub enum Body {
    Check(CheckBody),
    Series(SeriesBody),
    Growth(GrowthBody),
    Sympow(SympowBody),
    Relations(RelationsBody),
    Minop(MinopBody),
    Apparent(ApparentBody),
    Desing(DesingBody),
    Run(RunBody),
}

#[derive(Serialize, Debug)]
pub struct SingularPointRec {
    pub point: String,
    pub multiplicity: usize,
}

#[derive(Serialize, Debug)]
pub struct CheckBody {
    pub dimension: usize,
    pub denominator: String,
    pub singular_points: Vec<SingularPointRec>,
    pub residual_factors: Vec<String>,
    pub functions: Vec<FunctionCheck>,
}

#[derive(Serialize, Debug)]
pub struct FunctionCheck {
    pub name: String,
    pub solves: bool,
}

#[derive(Serialize, Debug)]
pub struct SeriesBody {
    pub functions: Vec<FunctionSeries>,
}

#[derive(Serialize, Debug)]
pub struct FunctionSeries {
    pub name: String,
    pub coefficients: Vec<String>,
    pub taylor: Vec<String>,
}

#[derive(Serialize, Debug)]
pub struct GrowthBody {
    pub functions: Vec<FunctionGrowth>,
}

#[derive(Serialize, Debug)]
pub struct FunctionGrowth {
    pub name: String,
    pub b: f64,
    pub c: f64,
    pub b1: f64,
    pub c1: f64,
    pub hmax: f64,
    pub super_exponential: bool,
}

#[derive(Serialize, Debug)]
pub struct SympowBody {
    pub n: usize,
    pub monomials: Vec<Vec<usize>>,
    pub matrix: Vec<Vec<String>>,
    pub denominator: String,
}

#[derive(Serialize, Debug)]
pub struct RelationsBody {
    pub degree_bound: usize,
    pub rank_deficit: usize,
    pub rows: Vec<Vec<String>>,
    pub normalized_rows: Vec<Vec<String>>,
    pub saturated: bool,
}

#[derive(Serialize, Debug)]
pub struct MinopBody {
    pub coefficients: Vec<String>,
    pub relation_rank_deficit: usize,
    pub operator_order: usize,
    pub deltas: Vec<String>,
    pub annihilates_to_order: usize,
}

#[derive(Serialize, Debug)]
pub struct ApparentBody {
    pub xi: String,
    pub operator_order: usize,
    pub operator_coefficients: Vec<String>,
    pub exponents: Vec<String>,
    pub log_involved: bool,
    pub holomorphic_basis_count: usize,
    pub min_valuation: Option<usize>,
    pub apparent: bool,
    pub all_vanish: bool,
}

#[derive(Serialize, Debug)]
pub struct DesingBody {
    pub steps: Vec<StepRec>,
    pub b: Vec<Vec<String>>,
    pub final_matrix: Vec<Vec<String>>,
    pub final_denominator: String,
    pub e_functions: Vec<String>,
}

#[derive(Serialize, Debug)]
pub struct StepRec {
    pub alpha: String,
    pub pole_order: usize,
    pub mix: Vec<Vec<String>>,
    pub d_index: usize,
}

#[derive(Serialize, Debug)]
pub struct RunBody {
    pub tasks: Vec<Report>,
}

pub fn poly_matrix_strings(m: &PolyMatrix) -> Vec<Vec<String>> {
    (0..m.rows())
        .map(|i| (0..m.cols()).map(|j| m[(i, j)].fmt_with_var('z')).collect())
        .collect()
}

pub fn rat_matrix_strings(m: &RatMatrix) -> Vec<Vec<String>> {
    (0..m.rows())
        .map(|i| (0..m.cols()).map(|j| m[(i, j)].to_string()).collect())
        .collect()
}

pub fn system_matrix_strings(s: &DiffSystem) -> Vec<Vec<String>> {
    let m = s.matrix();
    (0..m.rows())
        .map(|i| (0..m.cols()).map(|j| m[(i, j)].fmt_with_var('z')).collect())
        .collect()
}

pub fn locus_points(locus: &SingularLocus) -> Vec<SingularPointRec> {
    locus
        .rational_points
        .iter()
        .map(|(p, m)| SingularPointRec {
            point: p.to_string(),
            multiplicity: *m,
        })
        .collect()
}

pub fn denominator_power_string(t: &Poly) -> String {
    match t.degree() {
        Some(d) if t.coeff(d).is_one() && (0..d).all(|i| t.coeff(i).is_zero()) => {
            format!("z^{d}")
        }
        _ => t.fmt_with_var('z'),
    }
}

pub fn frobenius_fields(data: &FrobeniusData) -> (Vec<String>, bool, usize, Option<usize>) {
    (
        data.exponents.iter().map(|e| e.to_string()).collect(),
        data.log_involved,
        data.holomorphic_basis_count,
        data.min_valuation,
    )
}

impl Report {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serialization");
        s.push('\n');
        s
    }

    /// One-paragraph human summary, written to stderr by the binary.
    pub fn summary(&self) -> String {
        let mut out = format!("{}: {}", self.command, self.status);
        match &self.result {
            Body::Check(b) => {
                let solved = b.functions.iter().filter(|f| f.solves).count();
                out.push_str(&format!(
                    "; {}/{} functions solve the system; denominator {}",
                    solved,
                    b.functions.len(),
                    b.denominator
                ));
            }
            Body::Series(b) => {
                out.push_str(&format!("; {} coefficient streams", b.functions.len()));
            }
            Body::Growth(b) => {
                for f in &b.functions {
                    out.push_str(&format!("; {}: C = {:.4}", f.name, f.c));
                }
            }
            Body::Sympow(b) => {
                out.push_str(&format!(
                    "; symmetric power N = {} has dimension {}",
                    b.n,
                    b.monomials.len()
                ));
            }
            Body::Relations(b) => {
                out.push_str(&format!(
                    "; rank deficit {} at degree bound {}",
                    b.rank_deficit, b.degree_bound
                ));
            }
            Body::Minop(b) => {
                out.push_str(&format!(
                    "; operator order {} verified to series order {}",
                    b.operator_order, b.annihilates_to_order
                ));
            }
            Body::Apparent(b) => {
                out.push_str(&format!(
                    "; apparent = {}, all_vanish = {}",
                    b.apparent, b.all_vanish
                ));
            }
            Body::Desing(b) => {
                out.push_str(&format!(
                    "; {} steps, final denominator {}",
                    b.steps.len(),
                    b.final_denominator
                ));
            }
            Body::Run(b) => {
                out.push_str(&format!("; {} tasks", b.tasks.len()));
            }
        }
        out
    }
}
