//! Partitions, conjugacy classes and characters of the symmetric groups.

mod character;
mod classfn;
mod partition;

pub use character::{character_table, character_value, dimension, murnaghan_nakayama, CharacterTable};
pub use classfn::{
    decompose, inner_product, virtual_multiplicities, ClassFunction, IrrDecomposition, SubrepCheck,
    SubrepWitness,
};
pub use partition::{class_size, factorial, partitions, Partition};
