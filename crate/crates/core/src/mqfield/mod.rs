//! Exact arithmetic in real multiquadratic fields `Q(√d₁,…,√d_r)`.

mod element;
mod literal;
pub(crate) mod tower;

pub use element::FieldElement;
pub use literal::{cos_pi_over, parse_element, parse_element_in};
pub use tower::FieldTower;

/// A real embedding, given by the image sign of each `√d_j`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Embedding {
    pub signs: Vec<i8>,
}

impl Embedding {
    pub fn identity(rank: usize) -> Self {
        Self {
            signs: vec![1; rank],
        }
    }

    pub fn is_identity(&self) -> bool {
        self.signs.iter().all(|&s| s > 0)
    }

    /// Bitmask of the radicands whose root changes sign.
    pub fn flip_mask(&self) -> usize {
        self.signs
            .iter()
            .enumerate()
            .filter(|(_, &s)| s < 0)
            .fold(0, |m, (j, _)| m | 1 << j)
    }

    /// Sign of `σ(α_I)`.
    pub fn sign_of_mask(&self, mask: usize) -> i8 {
        if (mask & self.flip_mask()).count_ones() % 2 == 1 {
            -1
        } else {
            1
        }
    }

    pub fn compose(&self, other: &Embedding) -> Embedding {
        Embedding {
            signs: self.signs.iter().zip(&other.signs).map(|(a, b)| a * b).collect(),
        }
    }
}

/// The smallest subtower of the common ambient tower containing all `elements`.
pub fn minimal_field_of<'a>(elements: impl IntoIterator<Item = &'a FieldElement>) -> FieldTower {
    FieldTower::from_group_generators(elements.into_iter().flat_map(|x| x.support()))
}
