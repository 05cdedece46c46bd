//! Model checking and optimization for monadic second-order logic on graphs
//! of bounded rankwidth.
//!
//! A graph is given by a `t`-labeled parse tree ([`parsetree`]). For a
//! sentence of quantifier rank `q`, the reduced characteristic tree of depth
//! `q` is computed bottom-up over the parse tree ([`chartree`]) and the
//! model-checking game is played on it ([`games`]). The number of distinct
//! trees depends only on `q` and `t`, so the whole check is linear in the size
//! of the parse tree. [`linemso`] extends this to optimizing a linear weight
//! over free set variables.
//!
//! The crate is `no_std` and needs only `alloc`.

#![no_std]

extern crate alloc;

pub mod bits;
pub mod catalog;
pub mod chartree;
pub mod games;
pub mod linemso;
pub mod logic;
pub mod parsetree;
pub mod rankdec;
pub mod structures;

pub use bits::{LabelVec, VertexSet};
pub use chartree::{CharTreeError, CharTreeStore, RcId};
pub use games::{evaluate, model_check, Assignment, GameError};
pub use linemso::{solve_linemso, Direction, LinEmsoError, LinEmsoProblem, LinEmsoSolution};
pub use logic::{parse_formula, Formula, VariableList};
pub use parsetree::{family_tree, Family, ParseNode, ParseTree, ParseTreeBuilder};
pub use structures::{Composition, OrderedStructure, Relabeling, Structure};
