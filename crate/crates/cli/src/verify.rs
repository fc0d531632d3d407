//! Independent re-checks of certificates before they are emitted. These use
//! only plain evaluation and elimination, never the sweep machinery that
//! produced the certificate.

use rankmetric::gf::FieldElem;
use rankmetric::moore::{moore_matrix, MoorePolySet};
use rankmetric::variety::MvPoly;
use rankmetric::{Error, RankMetricCode};

use crate::CliError;

fn fail(what: &str) -> CliError {
    CliError::Core(Error::Internal(format!("certificate failed re-verification: {what}")))
}

/// A codeword Σ b_i f_i that is nonzero with kernel dimension at least k.
/// Returns the kernel dimension.
pub fn mrd_witness(code: &RankMetricCode, b: &[FieldElem]) -> Result<usize, CliError> {
    if b.iter().all(|x| x.is_zero()) {
        return Err(fail("zero coefficient vector"));
    }
    let w = code.codeword(b)?;
    if w.is_zero() {
        return Err(fail("zero codeword"));
    }
    let n = code.n();
    let rank = rankmetric::gf::linalg::rank(code.space().base(), &w.as_matrix());
    let kernel = n - rank;
    if kernel < code.k() {
        return Err(fail("codeword kernel is too small"));
    }
    Ok(kernel)
}

/// det(M_{f,A}) = 0 while α_1..α_k are F_q-independent.
pub fn moore_witness(set: &MoorePolySet, alphas: &[FieldElem]) -> Result<(), CliError> {
    let s = set.space();
    let m = moore_matrix(set, alphas)?;
    if !rankmetric::gf::linalg::det(s.field(), &m).is_zero() {
        return Err(fail("Moore matrix is nonsingular"));
    }
    if s.fq_rank(alphas) != set.k() {
        return Err(fail("points are F_q-dependent"));
    }
    Ok(())
}

/// W(P) = 0 with F_q-independent coordinates, which also makes P a Moore
/// witness.
pub fn variety_witness(set: &MoorePolySet, w: &MvPoly, p: &[FieldElem]) -> Result<(), CliError> {
    if !w.evaluate(p)?.is_zero() {
        return Err(fail("point is not on W"));
    }
    moore_witness(set, p)
}
