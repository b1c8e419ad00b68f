use structures::irreducible::lies_in_irreducible;
use structures::maps::{compose, is_embedding};
use structures::Structure;
use thiserror::Error;

use crate::{free_amalgam, AmalgamationProblem};

/// Binary recipe; every internal node glues its two child results over an
/// overlap structure embedded into each.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TreeRecipe {
    Leaf,
    Join { left: Box<TreeRecipe>, right: Box<TreeRecipe>, overlap: Structure, f1: Vec<usize>, f2: Vec<usize> },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeAmalgamSpec {
    pub leaf: Structure,
    pub recipe: TreeRecipe,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeAmalgam {
    pub structure: Structure,
    /// One embedding of the leaf per leaf of the recipe, left to right.
    pub copies: Vec<Vec<usize>>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TreeError {
    /// Internal nodes are numbered in preorder from 0.
    #[error("overlap at node {0} does not lie in an irreducible substructure")]
    OverlapNotInIrreducible(usize),
    #[error("overlap map at node {0} is not an embedding")]
    NotEmbedding(usize),
}

impl TreeRecipe {
    pub fn join(left: TreeRecipe, right: TreeRecipe, overlap: Structure, f1: Vec<usize>, f2: Vec<usize>) -> Self {
        TreeRecipe::Join { left: Box::new(left), right: Box::new(right), overlap, f1, f2 }
    }

    pub fn leaves(&self) -> usize {
        match self {
            TreeRecipe::Leaf => 1,
            TreeRecipe::Join { left, right, .. } => left.leaves() + right.leaves(),
        }
    }
}

pub fn tree_amalgam(spec: &TreeAmalgamSpec) -> Result<TreeAmalgam, TreeError> {
    let mut counter = 0;
    eval(&spec.leaf, &spec.recipe, &mut counter)
}

fn eval(leaf: &Structure, r: &TreeRecipe, counter: &mut usize) -> Result<TreeAmalgam, TreeError> {
    match r {
        TreeRecipe::Leaf => Ok(TreeAmalgam { structure: leaf.clone(), copies: vec![(0..leaf.size()).collect()] }),
        TreeRecipe::Join { left, right, overlap, f1, f2 } => {
            let node = *counter;
            *counter += 1;
            let l = eval(leaf, left, counter)?;
            let rr = eval(leaf, right, counter)?;
            for (f, side) in [(f1, &l), (f2, &rr)] {
                if !is_embedding(f, overlap, &side.structure) {
                    return Err(TreeError::NotEmbedding(node));
                }
                if !lies_in_irreducible(&side.structure, f) {
                    return Err(TreeError::OverlapNotInIrreducible(node));
                }
            }
            let p = AmalgamationProblem {
                base: overlap.clone(),
                left: l.structure,
                right: rr.structure,
                alpha1: f1.clone(),
                alpha2: f2.clone(),
            };
            let am = free_amalgam(&p);
            let mut copies: Vec<Vec<usize>> = l.copies.iter().map(|c| compose(&am.beta1, c)).collect();
            copies.extend(rr.copies.iter().map(|c| compose(&am.beta2, c)));
            Ok(TreeAmalgam { structure: am.structure, copies })
        }
    }
}
