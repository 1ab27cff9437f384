//! Computational toolkit for mod-p representation theory of GL2 over an
//! unramified p-adic field: extension graphs of Serre weights, Jordan–Hölder
//! combinatorics, tame types and modular weights, explicit deformation-ring
//! equations, p-adic resultant certificates and lattice valuation profiles.

pub mod defring;
pub mod exactalg;
pub mod lattices;
pub mod padicval;
pub mod repstruct;
pub mod typesweights;
pub mod weights;
