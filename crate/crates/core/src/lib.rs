//! Exact computational toolkit for invariant linear sections of the
//! Grassmannians Gr(2,7) and Gr(3,6), their cyclic quotients and the
//! associated Pfaffian duality.

pub mod cohomology;
pub mod exactfield;
pub mod geometry;
pub mod grassmann;
pub mod models;
pub mod multilinear;
pub mod polyring;
pub mod symmetry;
