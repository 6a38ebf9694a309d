//! Exact rational linear algebra and convex geometry.

pub mod hull;
pub mod lp;
pub mod point;
pub mod quadratic;
pub mod rational;

pub use hull::{cross, hull2d, polygon_contains};
pub use lp::{convex_weights, is_extreme_point, lp_feasible, Feasibility};
pub use point::Point;
pub use quadratic::QuadraticNumber;
pub use rational::{format_rational, from_biguint, int, parse_rational, rat, to_f64, Rational};
