//! Field data files shipped with the crate. Each is parsed once per
//! process and shared, so the caches hanging off a field are shared too.

use std::sync::{Arc, OnceLock};

use crate::field::Field;

pub const Q_SQRT2: &str = include_str!("../../../fields/Q-sqrt2.json");
pub const Q_SQRT_MINUS3: &str = include_str!("../../../fields/Q-sqrt-3.json");
pub const CUBIC_X3_4X_1: &str = include_str!("../../../fields/cubic-x3+4x-1.json");

/// Q(√2), θ = √2.
pub fn q_sqrt2() -> Arc<Field> {
    static F: OnceLock<Arc<Field>> = OnceLock::new();
    F.get_or_init(|| Field::from_json(Q_SQRT2).expect("bundled field parses")).clone()
}

/// Q(√−3) with θ a root of x² − x + 1, so Z[θ] is the maximal order and
/// √−3 = 2θ − 1.
pub fn q_sqrt_minus3() -> Arc<Field> {
    static F: OnceLock<Arc<Field>> = OnceLock::new();
    F.get_or_init(|| Field::from_json(Q_SQRT_MINUS3).expect("bundled field parses")).clone()
}

/// Q(α) with α³ + 4α − 1 = 0.
pub fn cubic() -> Arc<Field> {
    static F: OnceLock<Arc<Field>> = OnceLock::new();
    F.get_or_init(|| Field::from_json(CUBIC_X3_4X_1).expect("bundled field parses")).clone()
}

/// Bundled field by file stem or label.
pub fn by_name(name: &str) -> Option<Arc<Field>> {
    match name {
        "Q-sqrt2" | "2.2.8.1" => Some(q_sqrt2()),
        "Q-sqrt-3" | "2.0.3.1" => Some(q_sqrt_minus3()),
        "cubic-x3+4x-1" | "3.1.283.1" => Some(cubic()),
        _ => None,
    }
}

pub fn all() -> Vec<Arc<Field>> {
    vec![q_sqrt2(), q_sqrt_minus3(), cubic()]
}
