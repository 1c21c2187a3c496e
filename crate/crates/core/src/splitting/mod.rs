//! Splitting-principle oracle.
//!
//! A bundle is modelled by its multiset of formal Chern roots; every
//! characteristic class of an admissible-functor image is then computed by
//! brute force from the transformed roots. This is the independent check
//! against which Adams expansions and decomposition certificates are
//! verified.

mod bundle;
mod classes;
mod pairing;

pub use bundle::{evaluate_functor, FormalBundle, LinearForm, RootEvaluator};
pub use classes::{
    abstract_ch_parts, ahat_series, ch_from_chern, chern_from_ch, elementary_from_power_sums,
    functor_character, power_sums_from_elementary, wedge_character,
};
pub use pairing::{PairingData, PairingDocument, PAIRING_VERSION};
