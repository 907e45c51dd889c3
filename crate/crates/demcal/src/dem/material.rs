use serde::{Deserialize, Serialize};

use super::DemError;

/// Index into a [`ContactTable`]'s material list.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MaterialId(pub usize);

/// Intrinsic properties of a bulk material.
///
/// Young's modulus is derived from the shear modulus as `E = 2G(1 + nu)`;
/// only `G` and `nu` are stored.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Material {
    pub name: String,
    /// kg/m^3
    pub density: f64,
    pub poisson_ratio: f64,
    /// Pa
    pub shear_modulus: f64,
}

impl Material {
    pub fn new(name: &str, density: f64, poisson_ratio: f64, shear_modulus: f64) -> Result<Self, DemError> {
        let m = Self {
            name: name.to_string(),
            density,
            poisson_ratio,
            shear_modulus,
        };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<(), DemError> {
        if !(self.density > 0.0 && self.density.is_finite()) {
            return Err(DemError::InvalidInput(format!(
                "material {}: density must be positive, got {}",
                self.name, self.density
            )));
        }
        if !(self.poisson_ratio > 0.0 && self.poisson_ratio < 0.5) {
            return Err(DemError::InvalidInput(format!(
                "material {}: Poisson ratio must lie in (0, 0.5), got {}",
                self.name, self.poisson_ratio
            )));
        }
        if !(self.shear_modulus > 0.0 && self.shear_modulus.is_finite()) {
            return Err(DemError::InvalidInput(format!(
                "material {}: shear modulus must be positive, got {}",
                self.name, self.shear_modulus
            )));
        }
        Ok(())
    }

    /// `E = 2G(1 + nu)`.
    pub fn young_modulus(&self) -> f64 {
        2.0 * self.shear_modulus * (1.0 + self.poisson_ratio)
    }
}

/// Contact coefficients for one unordered material pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ContactParams {
    pub restitution: f64,
    pub static_friction: f64,
    pub rolling_friction: f64,
}

impl ContactParams {
    pub fn new(restitution: f64, static_friction: f64, rolling_friction: f64) -> Result<Self, DemError> {
        let p = Self {
            restitution,
            static_friction,
            rolling_friction,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<(), DemError> {
        if !(self.restitution > 0.0 && self.restitution <= 1.0) {
            return Err(DemError::InvalidInput(format!(
                "restitution must lie in (0, 1], got {}",
                self.restitution
            )));
        }
        if !(self.static_friction >= 0.0 && self.static_friction.is_finite()) {
            return Err(DemError::InvalidInput(format!(
                "static friction must be >= 0, got {}",
                self.static_friction
            )));
        }
        if !(self.rolling_friction >= 0.0 && self.rolling_friction.is_finite()) {
            return Err(DemError::InvalidInput(format!(
                "rolling friction must be >= 0, got {}",
                self.rolling_friction
            )));
        }
        Ok(())
    }

    /// Frictionless elastic contact, useful as a neutral default.
    pub fn frictionless(restitution: f64) -> Self {
        Self {
            restitution,
            static_friction: 0.0,
            rolling_friction: 0.0,
        }
    }
}

/// Materials plus per-unordered-pair contact coefficients.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct ContactTable {
    materials: Vec<Material>,
    /// Dense symmetric lookup, indexed by `pair_index`.
    pairs: Vec<Option<ContactParams>>,
}

impl ContactTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_material(&mut self, m: Material) -> Result<MaterialId, DemError> {
        m.validate()?;
        self.materials.push(m);
        let n = self.materials.len();
        self.pairs.resize(n * (n + 1) / 2, None);
        Ok(MaterialId(n - 1))
    }

    pub fn material(&self, id: MaterialId) -> &Material {
        &self.materials[id.0]
    }

    pub fn materials(&self) -> &[Material] {
        &self.materials
    }

    fn pair_index(&self, a: MaterialId, b: MaterialId) -> usize {
        let (lo, hi) = if a.0 <= b.0 { (a.0, b.0) } else { (b.0, a.0) };
        hi * (hi + 1) / 2 + lo
    }

    pub fn set_pair(&mut self, a: MaterialId, b: MaterialId, p: ContactParams) -> Result<(), DemError> {
        p.validate()?;
        let idx = self.pair_index(a, b);
        self.pairs[idx] = Some(p);
        Ok(())
    }

    pub fn pair(&self, a: MaterialId, b: MaterialId) -> ContactParams {
        self.pairs[self.pair_index(a, b)]
            .unwrap_or_else(|| panic!("no contact parameters registered for materials {} / {}", a.0, b.0))
    }

    pub fn try_pair(&self, a: MaterialId, b: MaterialId) -> Option<ContactParams> {
        self.pairs[self.pair_index(a, b)]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn young_modulus_from_shear() {
        let salt = Material::new("salt", 1210.0, 0.25, 1.9e9).unwrap();
        assert_eq!(salt.young_modulus(), 4.75e9);
    }

    #[test]
    fn material_invariants_rejected() {
        assert!(Material::new("x", -1.0, 0.25, 1e9).is_err());
        assert!(Material::new("x", 1000.0, 0.5, 1e9).is_err());
        assert!(Material::new("x", 1000.0, 0.0, 1e9).is_err());
        assert!(Material::new("x", 1000.0, 0.25, 0.0).is_err());
    }

    #[test]
    fn contact_params_bounds() {
        assert!(ContactParams::new(0.0, 0.1, 0.1).is_err());
        assert!(ContactParams::new(1.1, 0.1, 0.1).is_err());
        assert!(ContactParams::new(0.5, -0.1, 0.1).is_err());
        assert!(ContactParams::new(1.0, 0.0, 0.0).is_ok());
    }

    #[test]
    fn pair_lookup_is_symmetric() {
        let mut t = ContactTable::new();
        let a = t.add_material(Material::new("salt", 1210.0, 0.25, 1.9e9).unwrap()).unwrap();
        let b = t.add_material(Material::new("steel", 7800.0, 0.30, 8.0e10).unwrap()).unwrap();
        let p = ContactParams::new(0.421, 0.71, 0.368).unwrap();
        t.set_pair(a, b, p).unwrap();
        assert_eq!(t.pair(a, b), t.pair(b, a));
        assert!(t.try_pair(a, a).is_none());
    }
}
