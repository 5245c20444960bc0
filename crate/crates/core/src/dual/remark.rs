// The C-monomials of multidegree (1,1,1) and why they fail to span mod 2.

use num_bigint::BigInt;

use super::cexpr::{expand_monomial, expand_monomial_z};
use super::{express_in_c, monomials_of_multidegree, CExpression, DualElement, MonomialKey};
use crate::error::{Result, WittError};
use crate::index::MultiIndex;
use crate::ring::{determinant_over_q, rank, Ring};

/// One C-monomial and its expansion in the dual basis.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RemarkRow {
    pub monomial: MonomialKey,
    pub expansion: DualElement,
}

impl RemarkRow {
    /// `C_{(0,1,1)}C_{e_1} = c_{(1,1,0)(0,0,1)} + ...`, terms in key order.
    pub fn line(&self) -> String {
        let ring = self.expansion.ring();
        let mut rhs = String::new();
        for (i, (k, c)) in self.expansion.terms().iter().enumerate() {
            let neg = ring.is_negative(c);
            let abs = if neg { ring.neg(c) } else { c.clone() };
            let coeff = if ring.is_one(&abs) { String::new() } else { ring.render(&abs) };
            let sep = match (i, neg) {
                (0, false) => "",
                (0, true) => "-",
                (_, false) => " + ",
                (_, true) => " - ",
            };
            rhs.push_str(&format!("{sep}{coeff}c_{{{}}}", k.label()));
        }
        if rhs.is_empty() {
            rhs.push('0');
        }
        format!("{} = {}", CExpression::monomial_label(&self.monomial), rhs)
    }
}

/// Everything needed to see that the `C_I` generate the degree-(1,1,1) piece
/// over `Q` but not over `Z/2`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RemarkReport {
    pub ring: Ring,
    pub multidegree: MultiIndex,
    /// Dual-basis keys, the columns of `matrix`.
    pub columns: Vec<MonomialKey>,
    /// Longest C-monomial first, matching the usual presentation.
    pub rows: Vec<RemarkRow>,
    /// Integer transition matrix, rows against columns.
    pub matrix: Vec<Vec<BigInt>>,
    pub determinant: BigInt,
    pub rank: usize,
    pub dimension: usize,
    /// Whether `c_{(1,1,1)}` lies in the subalgebra generated by the `C_I`.
    pub member: bool,
}

impl RemarkReport {
    pub fn lines(&self) -> Vec<String> {
        self.rows.iter().map(RemarkRow::line).collect()
    }
}

pub fn remark_report(ring: &Ring) -> Result<RemarkReport> {
    ring.require_field()?;
    let n = 3;
    let d = MultiIndex::from([1, 1, 1]);
    let columns = monomials_of_multidegree(&d);
    let mut monomials = columns.clone();
    monomials.reverse();
    let rows: Vec<RemarkRow> = monomials
        .iter()
        .map(|m| RemarkRow { monomial: m.clone(), expansion: expand_monomial(ring, n, m) })
        .collect();
    let z = Ring::integers();
    let matrix: Vec<Vec<BigInt>> = monomials
        .iter()
        .map(|m| {
            let x = expand_monomial_z(n, m);
            columns.iter().map(|k| z.as_integer(&x.pairing(k)).expect("integral")).collect()
        })
        .collect();
    let determinant = determinant_over_q(&matrix);
    let ring_matrix: Vec<Vec<_>> = rows.iter().map(|r| columns.iter().map(|k| r.expansion.pairing(k)).collect()).collect();
    let rank = rank(ring, &ring_matrix)?;
    let member = match express_in_c(ring, n, &MonomialKey::new(vec![d.clone()])?) {
        Ok(_) => true,
        Err(WittError::NotInSubalgebra { .. }) => false,
        Err(e) => return Err(e),
    };
    Ok(RemarkReport { ring: ring.clone(), multidegree: d, dimension: columns.len(), columns, rows, matrix, determinant, rank, member })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_report() {
        let r = remark_report(&Ring::rationals()).unwrap();
        assert_eq!(r.determinant.magnitude(), &2u32.into());
        assert_eq!((r.rank, r.dimension, r.member), (5, 5, true));
    }

    #[test]
    fn characteristic_two_report() {
        let r = remark_report(&Ring::modular(2).unwrap()).unwrap();
        assert_eq!((r.rank, r.dimension, r.member), (4, 5, false));
        let lines = r.lines();
        assert_eq!(
            lines[0],
            "C_{e_1}C_{e_2}C_{e_3} = c_{(1,1,1)} + c_{(1,1,0)(0,0,1)} + c_{(1,0,1)(0,1,0)} + c_{(0,1,1)(1,0,0)} + c_{e_1e_2e_3}"
        );
        assert_eq!(lines[4], "C_{(1,1,1)} = c_{e_1e_2e_3}");
    }
}
