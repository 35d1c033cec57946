// SPDX-License-Identifier: Apache-2.0

//! The maximal order of an imaginary quadratic field and its form class group.
//!
//! Ideal classes are modelled by primitive binary quadratic forms of the
//! fundamental discriminant; ring elements by their half-integer coordinates.

mod classgroup;
mod forms;
mod ring;

pub use classgroup::{
    class_group, class_number, count_reduced_forms, fundamental_discriminant,
    ideal_class_order_above, reduced_forms, ClassGroupCache, ClassGroupSummary,
    MAX_ENUMERATED_DISC,
};
pub use forms::{
    compose, form_order, prime_form_above, prime_form_with_root, QuadForm, RootChoice,
};
pub use ring::{is_pth_power_in_ring, is_square_in_ring, unit_group, RingElement};
