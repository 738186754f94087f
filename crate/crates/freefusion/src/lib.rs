//! Exact arithmetic in fusion semirings of free quantum groups.
//!
//! The crate implements, at desk scale and with arbitrary-precision
//! coefficients:
//!
//! * fusion data `(R, *, ∘)` and words over them ([`datum`], [`word`]);
//! * the free fusion semiring product, duality, the semiring order, and a
//!   dimension consistency oracle ([`semiring`]);
//! * a uniform ring interface with free-datum, finite-group, fusion-table,
//!   and free-product backends, plus a consistency check between the two
//!   constructions of a free product ([`ring`]);
//! * universal grading (chain) groups: exact normal forms in free products
//!   of cyclic groups where the presentation is recognized, and a bounded
//!   union-find oracle everywhere ([`grading`]);
//! * cocenter slices via degrees and via both majorization
//!   characterizations, with cross-checks ([`cocenter`]);
//! * based and ad-invariant closures and a bounded simplicity checker
//!   ([`normality`]);
//! * a small expression language and the `freefusion` CLI ([`expr`],
//!   [`catalog`]).
//!
//! All values are immutable after construction and all operations are pure,
//! so everything here is safe to share across threads; the saturation loops
//! in [`normality`] optionally use internal parallelism.

pub mod catalog;
pub mod cocenter;
pub mod datum;
pub mod expr;
pub mod grading;
pub mod normality;
pub mod ring;
pub mod semiring;
pub mod word;

pub mod guide;

mod unionfind;

pub use datum::{FusionDatum, Letter};
pub use ring::{RingElement, RingHandle, Simple};
pub use semiring::SemiringElement;
pub use word::Word;
