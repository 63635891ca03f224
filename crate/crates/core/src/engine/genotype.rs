use std::fmt;

use crate::error::{Error, Result};
use crate::gp::ExprTree;
use crate::scalar::Scalar;

/// Representation family of a genotype.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GenotypeKind {
    Binary,
    Permutation,
    Real,
    Tree,
}

impl GenotypeKind {
    pub fn name(self) -> &'static str {
        match self {
            GenotypeKind::Binary => "binary",
            GenotypeKind::Permutation => "permutation",
            GenotypeKind::Real => "real",
            GenotypeKind::Tree => "tree",
        }
    }
}

/// The unit of variation.
///
/// Permutations are stored zero-based (a bijection on `0..n`) and printed
/// one-based.
#[derive(Debug, Clone, PartialEq)]
pub enum Genotype<S> {
    Binary(Vec<bool>),
    Permutation(Vec<usize>),
    Real(Vec<S>),
    Tree(ExprTree<S>),
}

impl<S: Scalar> Genotype<S> {
    pub fn kind(&self) -> GenotypeKind {
        match self {
            Genotype::Binary(_) => GenotypeKind::Binary,
            Genotype::Permutation(_) => GenotypeKind::Permutation,
            Genotype::Real(_) => GenotypeKind::Real,
            Genotype::Tree(_) => GenotypeKind::Tree,
        }
    }

    /// Gene count; node count for trees.
    pub fn len(&self) -> usize {
        match self {
            Genotype::Binary(b) => b.len(),
            Genotype::Permutation(p) => p.len(),
            Genotype::Real(x) => x.len(),
            Genotype::Tree(t) => t.size(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn mismatch(&self, expected: GenotypeKind) -> Error {
        Error::IncompatibleGenotype { expected: expected.name(), found: self.kind().name() }
    }

    pub fn as_binary(&self) -> Result<&[bool]> {
        match self {
            Genotype::Binary(b) => Ok(b),
            _ => Err(self.mismatch(GenotypeKind::Binary)),
        }
    }

    pub fn as_permutation(&self) -> Result<&[usize]> {
        match self {
            Genotype::Permutation(p) => Ok(p),
            _ => Err(self.mismatch(GenotypeKind::Permutation)),
        }
    }

    pub fn as_real(&self) -> Result<&[S]> {
        match self {
            Genotype::Real(x) => Ok(x),
            _ => Err(self.mismatch(GenotypeKind::Real)),
        }
    }

    pub fn as_tree(&self) -> Result<&ExprTree<S>> {
        match self {
            Genotype::Tree(t) => Ok(t),
            _ => Err(self.mismatch(GenotypeKind::Tree)),
        }
    }
}

/// Binary genotypes print as `0101`, permutations as one-based `3 1 2`, real
/// vectors comma separated, trees in prefix notation.
impl<S: Scalar> fmt::Display for Genotype<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Genotype::Binary(bits) => {
                for &b in bits {
                    f.write_str(if b { "1" } else { "0" })?;
                }
                Ok(())
            }
            Genotype::Permutation(p) => {
                for (i, v) in p.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" ")?;
                    }
                    write!(f, "{}", v + 1)?;
                }
                Ok(())
            }
            Genotype::Real(x) => {
                for (i, v) in x.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{v}")?;
                }
                Ok(())
            }
            Genotype::Tree(t) => write!(f, "{t}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn display_forms() {
        let b: Genotype<f64> = Genotype::Binary(vec![true, false, true]);
        assert_eq!(b.to_string(), "101");
        let p: Genotype<f64> = Genotype::Permutation(vec![2, 0, 1]);
        assert_eq!(p.to_string(), "3 1 2");
        let r: Genotype<f64> = Genotype::Real(vec![1.5, -2.0]);
        assert_eq!(r.to_string(), "1.5,-2");
    }

    #[test]
    fn accessor_kind_mismatch() {
        let b: Genotype<f64> = Genotype::Binary(vec![true]);
        assert!(b.as_binary().is_ok());
        assert_eq!(
            b.as_permutation().unwrap_err(),
            Error::IncompatibleGenotype { expected: "permutation", found: "binary" }
        );
    }
}
