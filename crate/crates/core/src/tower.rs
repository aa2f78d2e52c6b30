//! Parameters of a function field in the Garcia-Stichtenoth second tower and
//! the closed-form quantities that depend only on them.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest conductor for which a membership table is materialised.
pub const MAX_TABLE_CONDUCTOR: i128 = 1 << 26;

/// The pair `(ell, nu)` with `q = ell^2`, identifying the `nu`-th function
/// field of the tower over `F_q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TowerParams {
    ell: u64,
    nu: u32,
}

impl TowerParams {
    pub fn new(ell: u64, nu: u32) -> Result<Self> {
        if ell < 2 {
            return Err(Error::InvalidParams(format!("ell must be >= 2, got {ell}")));
        }
        if nu < 1 {
            return Err(Error::InvalidParams("nu must be >= 1".into()));
        }
        let params = TowerParams { ell, nu };
        // q itself must be representable.
        params.ell_pow(2)?;
        Ok(params)
    }

    pub fn ell(&self) -> u64 {
        self.ell
    }

    pub fn nu(&self) -> u32 {
        self.nu
    }

    pub fn q(&self) -> i128 {
        (self.ell as i128) * (self.ell as i128)
    }

    pub fn is_even_level(&self) -> bool {
        self.nu.is_multiple_of(2)
    }

    /// `ell^e`, i.e. `q^{e/2}`, with an explicit overflow check.
    pub fn ell_pow(&self, e: u32) -> Result<i128> {
        (self.ell as i128).checked_pow(e).ok_or_else(|| {
            Error::ParameterTooLarge(format!("{}^{} does not fit in 127 bits", self.ell, e))
        })
    }

    /// Whether `ell` is a prime power, i.e. whether `q = ell^2` is an even
    /// power of a prime and the tower actually exists over `F_q`.
    pub fn is_prime_power(&self) -> bool {
        let mut n = self.ell;
        let mut p = 2;
        while p * p <= n {
            if n.is_multiple_of(p) {
                while n.is_multiple_of(p) {
                    n /= p;
                }
                return n == 1;
            }
            p += 1;
        }
        true
    }

    /// Human-readable caveats that should accompany any output for these
    /// parameters.
    pub fn warnings(&self) -> Vec<String> {
        if self.is_prime_power() {
            Vec::new()
        } else {
            vec![format!(
                "ell = {} is not a prime power; q = {} is not a field size and the semigroup is purely combinatorial",
                self.ell,
                self.q()
            )]
        }
    }
}

/// Conductor `c_nu = ell^nu - ell^{floor((nu+1)/2)}` of `H(Q_nu)`.
pub fn conductor(params: TowerParams) -> Result<i128> {
    let top = params.ell_pow(params.nu)?;
    let sub = params.ell_pow(params.nu.div_ceil(2))?;
    Ok(top - sub)
}

/// Gap-count law `(ell^{ceil(nu/2)} - 1)(ell^{floor(nu/2)} - 1)`, which agrees
/// with the number of gaps of the recursively built semigroup.
pub fn genus_gap_law(params: TowerParams) -> Result<i128> {
    let a = params.ell_pow(params.nu.div_ceil(2))? - 1;
    let b = params.ell_pow(params.nu / 2)? - 1;
    a.checked_mul(b)
        .ok_or_else(|| Error::ParameterTooLarge("genus does not fit in 127 bits".into()))
}

/// The genus formula as printed for the tower:
/// `(q^{floor((nu+1)/2)/2} - 1)(q^{ceil((nu+1)/2)/2} - 1)`.
///
/// It coincides with the gap count one level higher, not at level `nu`.
pub fn genus_formula_printed(params: TowerParams) -> Result<i128> {
    let a = params.ell_pow(params.nu.div_ceil(2))? - 1;
    let b = params.ell_pow((params.nu + 1).div_ceil(2))? - 1;
    a.checked_mul(b)
        .ok_or_else(|| Error::ParameterTooLarge("genus does not fit in 127 bits".into()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(ell: u64, nu: u32) -> TowerParams {
        TowerParams::new(ell, nu).unwrap()
    }

    #[test]
    fn conductor_examples() {
        assert_eq!(conductor(p(3, 6)).unwrap(), 702);
        assert_eq!(conductor(p(2, 1)).unwrap(), 0);
        assert_eq!(conductor(p(2, 4)).unwrap(), 12);
    }

    #[test]
    fn rejects_bad_params() {
        assert!(TowerParams::new(1, 3).is_err());
        assert!(TowerParams::new(2, 0).is_err());
    }

    #[test]
    fn overflow_is_reported() {
        let big = p(3, 200);
        assert!(matches!(conductor(big), Err(Error::ParameterTooLarge(_))));
        // q = ell^2 itself overflows.
        assert!(matches!(
            TowerParams::new(u64::MAX, 1),
            Err(Error::ParameterTooLarge(_))
        ));
    }

    #[test]
    fn printed_genus_is_shifted_by_one_level() {
        assert_eq!(genus_gap_law(p(3, 6)).unwrap(), 676);
        assert_eq!(genus_formula_printed(p(3, 6)).unwrap(), 2080);
        for ell in 2..=4 {
            for nu in 1..=7 {
                assert_eq!(
                    genus_formula_printed(p(ell, nu)).unwrap(),
                    genus_gap_law(p(ell, nu + 1)).unwrap()
                );
            }
        }
    }

    #[test]
    fn prime_power_detection() {
        assert!(p(2, 1).is_prime_power());
        assert!(p(4, 1).is_prime_power());
        assert!(p(9, 1).is_prime_power());
        assert!(!p(6, 1).is_prime_power());
        assert!(p(6, 1).warnings().len() == 1);
    }
}
