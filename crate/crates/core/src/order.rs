//! Orders R ⊆ O̅ with their conductor ideals.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::Signed;

use crate::error::{Error, Result};
use crate::field::{Field, FieldElement};
use crate::ideal::OIdeal;
use crate::lattice::ZLattice;

/// A validated order: contains 1, closed under multiplication, of finite
/// index in O̅. The conductor (R : O̅) is computed on construction.
#[derive(Clone)]
pub struct OrderRing {
    field: Arc<Field>,
    lattice: ZLattice,
    conductor: OIdeal,
}

impl PartialEq for OrderRing {
    fn eq(&self, other: &Self) -> bool {
        self.lattice == other.lattice
    }
}
impl Eq for OrderRing {}

impl fmt::Debug for OrderRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "OrderRing({})", self.lattice.dump().trim_end().replace('\n', "; "))
    }
}

impl OrderRing {
    pub fn new(field: &Arc<Field>, lattice: ZLattice) -> Result<Self> {
        if lattice.dim() != field.degree() {
            return Err(Error::input("lattice dimension does not match the field"));
        }
        if !lattice.contains(&field.one()) {
            return Err(Error::NoIdentity);
        }
        let basis = lattice.basis();
        for x in &basis {
            for y in &basis {
                if !lattice.contains(&field.mul(x, y)) {
                    return Err(Error::NotARing(format!("{x} · {y} is not in the lattice")));
                }
            }
        }
        if !lattice.is_subset_of(field.maximal_lattice()) {
            return Err(Error::NotARing("lattice is not contained in the maximal order".into()));
        }
        let cond_lat = lattice.colon(field.maximal_lattice(), field);
        if !cond_lat.is_subset_of(&lattice) {
            return Err(Error::invariant("conductor is not contained in the order"));
        }
        let conductor = OIdeal::new(field, cond_lat)
            .map_err(|e| Error::invariant(format!("conductor is not an O̅-ideal: {e}")))?;
        Ok(OrderRing { field: field.clone(), lattice, conductor })
    }

    pub fn from_generators(field: &Arc<Field>, gens: &[FieldElement]) -> Result<Self> {
        let lat = ZLattice::from_generators(gens).map_err(|e| match e {
            Error::NotFullRank => Error::NotFiniteIndex,
            other => other,
        })?;
        Self::new(field, lat)
    }

    pub fn maximal(field: &Arc<Field>) -> Self {
        Self::new(field, field.maximal_lattice().clone()).expect("O̅ is an order")
    }

    /// Z + J for an O̅-ideal J.
    pub fn z_plus_ideal(field: &Arc<Field>, j: &OIdeal) -> Result<Self> {
        let mut gens = vec![field.one()];
        gens.extend(j.lattice().basis());
        Self::from_generators(field, &gens)
    }

    /// Z + m·O̅.
    pub fn z_plus(field: &Arc<Field>, m: i64) -> Result<Self> {
        if m == 0 {
            return Err(Error::input("Z + 0·O̅ is not of finite index"));
        }
        let j = OIdeal::principal(field, &field.int(m.abs()))?;
        Self::z_plus_ideal(field, &j)
    }

    /// Z[f·θ].
    pub fn scaled_monogenic(field: &Arc<Field>, f: i64) -> Result<Self> {
        if f == 0 {
            return Err(Error::input("Z[0] is not of finite index"));
        }
        let t = field.theta().scale_int(&BigInt::from(f));
        let gens: Vec<FieldElement> = (0..field.degree() as u64).map(|k| field.pow(&t, k)).collect();
        Self::from_generators(field, &gens)
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    pub fn lattice(&self) -> &ZLattice {
        &self.lattice
    }

    pub fn basis(&self) -> Vec<FieldElement> {
        self.lattice.basis()
    }

    pub fn conductor(&self) -> &OIdeal {
        &self.conductor
    }

    /// [O̅ : R].
    pub fn index_in_maximal(&self) -> BigInt {
        self.field.maximal_lattice().index(&self.lattice).expect("order lies in O̅")
    }

    pub fn is_maximal(&self) -> bool {
        &self.lattice == self.field.maximal_lattice()
    }

    pub fn contains(&self, x: &FieldElement) -> bool {
        self.lattice.contains(x)
    }

    /// x ∈ U(R): x ∈ R with |N(x)| = 1 (then x⁻¹ is integral over R and lies
    /// in R ∩ U(O̅) = U(R)).
    pub fn is_unit(&self, x: &FieldElement) -> bool {
        self.contains(x) && self.field.norm(x).abs() == num_rational::BigRational::from_integer(1.into())
    }

    /// x·R as a lattice.
    pub fn principal_lattice(&self, x: &FieldElement) -> ZLattice {
        self.lattice.scale(&self.field, x)
    }
}

pub fn make_order(field: &Arc<Field>, lattice: ZLattice) -> Result<OrderRing> {
    OrderRing::new(field, lattice)
}

/// R + J. When R is ideal-preserving its conductor must be I + J; a
/// mismatch is reported as an invariant violation.
pub fn intermediate_order(r: &OrderRing, j: &OIdeal) -> Result<OrderRing> {
    let t = OrderRing::new(r.field(), r.lattice().sum(j.lattice()))?;
    if let Ok(v) = crate::props::is_ideal_preserving(r) {
        if v.holds {
            let expected = r.conductor().sum(j);
            if t.conductor() != &expected {
                return Err(Error::invariant("conductor of R + J differs from I + J for an ideal-preserving R"));
            }
        }
    }
    Ok(t)
}
