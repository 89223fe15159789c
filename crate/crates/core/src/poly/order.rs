use std::cmp::Ordering;

use super::Monomial;
use crate::error::{Error, Result};

/// Order used inside one block of a block order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BlockOrder {
    Lex,
    Grevlex,
}

/// Monomial order on exponent vectors. Variable 0 is the largest.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum MonomialOrder {
    Lex,
    #[default]
    Grevlex,
    /// Variables `0..split` form the eliminated front block, which dominates
    /// the back block `split..`.
    Block {
        split: usize,
        front: BlockOrder,
        back: BlockOrder,
    },
}

fn lex(a: &[u32], b: &[u32]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        match x.cmp(y) {
            Ordering::Equal => continue,
            other => return other,
        }
    }
    Ordering::Equal
}

fn grevlex(a: &[u32], b: &[u32]) -> Ordering {
    let da: u64 = a.iter().map(|&e| e as u64).sum();
    let db: u64 = b.iter().map(|&e| e as u64).sum();
    match da.cmp(&db) {
        Ordering::Equal => {}
        other => return other,
    }
    for (x, y) in a.iter().zip(b).rev() {
        match x.cmp(y) {
            Ordering::Equal => continue,
            // smaller exponent in the last differing variable wins
            other => return other.reverse(),
        }
    }
    Ordering::Equal
}

impl BlockOrder {
    fn cmp_slices(self, a: &[u32], b: &[u32]) -> Ordering {
        match self {
            BlockOrder::Lex => lex(a, b),
            BlockOrder::Grevlex => grevlex(a, b),
        }
    }
}

impl MonomialOrder {
    /// Elimination order for the first `split` variables with grevlex inside both blocks.
    pub fn elimination(split: usize) -> Self {
        MonomialOrder::Block {
            split,
            front: BlockOrder::Grevlex,
            back: BlockOrder::Grevlex,
        }
    }

    /// Compares two monomials. Lengths are assumed equal.
    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        let (a, b) = (a.exponents(), b.exponents());
        match *self {
            MonomialOrder::Lex => lex(a, b),
            MonomialOrder::Grevlex => grevlex(a, b),
            MonomialOrder::Block { split, front, back } => {
                let split = split.min(a.len());
                match front.cmp_slices(&a[..split], &b[..split]) {
                    Ordering::Equal => back.cmp_slices(&a[split..], &b[split..]),
                    other => other,
                }
            }
        }
    }

    /// Checked comparison used at API boundaries.
    pub fn compare(&self, a: &Monomial, b: &Monomial) -> Result<Ordering> {
        if a.len() != b.len() {
            return Err(Error::usage(format!(
                "monomial length mismatch: {} vs {}",
                a.len(),
                b.len()
            )));
        }
        self.validate(a.len())?;
        Ok(self.cmp(a, b))
    }

    /// Checks that a block order's partition fits `nvars` variables.
    pub fn validate(&self, nvars: usize) -> Result<()> {
        match *self {
            MonomialOrder::Block { split, .. } if split > nvars => Err(Error::usage(format!(
                "block split {split} exceeds the {nvars} ring variables"
            ))),
            _ => Ok(()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn m(e: &[u32]) -> Monomial {
        Monomial::new(e.to_vec())
    }

    #[test]
    fn documented_comparisons() {
        assert_eq!(
            MonomialOrder::Lex.compare(&m(&[2, 1]), &m(&[1, 3])).unwrap(),
            Ordering::Greater
        );
        assert_eq!(
            MonomialOrder::Grevlex.compare(&m(&[2, 1]), &m(&[1, 2])).unwrap(),
            Ordering::Greater
        );
        let block = MonomialOrder::elimination(1);
        assert_eq!(block.compare(&m(&[1, 0]), &m(&[0, 5])).unwrap(), Ordering::Greater);
        // grevlex differs from graded lex here
        assert_eq!(
            MonomialOrder::Grevlex.cmp(&m(&[1, 0, 2]), &m(&[0, 2, 1])),
            Ordering::Less
        );
    }

    #[test]
    fn length_mismatch_is_rejected() {
        assert!(MonomialOrder::Lex.compare(&m(&[1]), &m(&[1, 0])).is_err());
        assert!(MonomialOrder::elimination(3).compare(&m(&[1, 0]), &m(&[0, 1])).is_err());
    }

    fn orders() -> impl Strategy<Value = MonomialOrder> {
        prop_oneof![
            Just(MonomialOrder::Lex),
            Just(MonomialOrder::Grevlex),
            Just(MonomialOrder::elimination(1)),
            Just(MonomialOrder::Block {
                split: 2,
                front: BlockOrder::Lex,
                back: BlockOrder::Grevlex
            }),
            Just(MonomialOrder::Block {
                split: 1,
                front: BlockOrder::Grevlex,
                back: BlockOrder::Lex
            }),
        ]
    }

    fn mono() -> impl Strategy<Value = Monomial> {
        proptest::collection::vec(0u32..5, 3).prop_map(Monomial::new)
    }

    proptest! {
        #[test]
        fn total_order_laws(o in orders(), a in mono(), b in mono(), c in mono()) {
            prop_assert_eq!(o.cmp(&a, &b), o.cmp(&b, &a).reverse());
            prop_assert_eq!(o.cmp(&a, &b) == Ordering::Equal, a == b);
            if o.cmp(&a, &b) != Ordering::Greater && o.cmp(&b, &c) != Ordering::Greater {
                prop_assert_ne!(o.cmp(&a, &c), Ordering::Greater);
            }
            prop_assert_ne!(o.cmp(&Monomial::one(3), &a), Ordering::Greater);
            if o.cmp(&a, &b) == Ordering::Less {
                prop_assert_eq!(o.cmp(&a.mul(&c), &b.mul(&c)), Ordering::Less);
            }
        }
    }
}
