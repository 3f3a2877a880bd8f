//! Closed-form rust chemistry: composition versus current density, volumetric
//! expansion, reaction rate constants, Faraday kinematics and the flux
//! reduction coefficient of the dense rust layer.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Faraday constant [C/mol].
pub const FARADAY: f64 = 96_485.332_12;

/// Physical constants of the corrosion chemistry.
///
/// Defaults are the reference parameter set: rate constants and oxygen
/// concentration from the literature values baked into the model, molar
/// masses of FeOOH / (1/2)Fe2O3 per mole of iron, and rust densities derived
/// from the molar volume ratios so that precipitate volume bookkeeping is
/// exactly consistent with the expansion coefficients.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ChemistryConstants {
    /// Fe2+ -> Fe3+ oxidation rate constant [mol^-1 m^3 s^-1].
    pub k_ii_iii: f64,
    /// Fe3+ -> hydroxy-oxide precipitation rate constant [1/s].
    pub k_iii_h: f64,
    /// Dissolved oxygen concentration, held constant [mol/m^3].
    pub c_ox: f64,
    /// Molar mass of iron [kg/mol].
    pub m_fe: f64,
    /// Density of iron [kg/m^3].
    pub rho_fe: f64,
    /// Molar mass of oxide rust per mole of iron [kg/mol].
    pub m_o: f64,
    /// Molar mass of hydroxy-oxide rust per mole of iron [kg/mol].
    pub m_h: f64,
    /// Density of oxide rust [kg/m^3].
    pub rho_o: f64,
    /// Density of hydroxy-oxide rust [kg/m^3].
    pub rho_h: f64,
    /// Molar volume ratio oxide rust / iron.
    pub kappa_o: f64,
    /// Molar volume ratio hydroxy-oxide rust / iron.
    pub kappa_h: f64,
    /// Electrons exchanged per iron atom in the anodic reaction.
    pub z_a: f64,
    /// Faraday constant [C/mol].
    pub faraday: f64,
    /// Reference corrosion current density [A/m^2] (1 uA/cm^2).
    pub i_a_ref: f64,
    /// Hydroxy-oxide mass fraction fit prefactor.
    pub k1: f64,
    /// Hydroxy-oxide mass fraction fit exponent (negative).
    pub k2: f64,
    /// Diffusivity of ferrous ions in rust [m^2/s].
    pub d_rust: f64,
    /// Thickness of the concrete transport zone next to the rust layer [m].
    pub t_c: f64,
    /// Use the uncorrected published estimate of the oxide rate constant
    /// (without the 1/r_h mass-balance factor) instead of the
    /// mass-balance-consistent form.
    pub printed_rate_form: bool,
}

impl Default for ChemistryConstants {
    fn default() -> Self {
        let m_fe = 0.055_85;
        let rho_fe = 7870.0;
        let m_o = 0.079_85; // (1/2) Fe2O3 per mole of Fe
        let m_h = 0.088_85; // FeOOH
        let kappa_o = 2.0;
        let kappa_h = 3.3;
        ChemistryConstants {
            k_ii_iii: 0.1,
            k_iii_h: 2e-4,
            c_ox: 0.28,
            m_fe,
            rho_fe,
            m_o,
            m_h,
            // rho_x = M_x rho_Fe / (kappa_x M_Fe) keeps volume bookkeeping
            // consistent with the expansion coefficients.
            rho_o: m_o * rho_fe / (kappa_o * m_fe),
            rho_h: m_h * rho_fe / (kappa_h * m_fe),
            kappa_o,
            kappa_h,
            z_a: 2.0,
            faraday: FARADAY,
            i_a_ref: 1e-2, // 1 uA/cm^2 in A/m^2
            k1: 0.9,
            k2: -0.150_251_331_366_541_77,
            d_rust: 1e-10,
            t_c: 2e-3,
            printed_rate_form: false,
        }
    }
}

impl ChemistryConstants {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("k_ii_iii", self.k_ii_iii),
            ("k_iii_h", self.k_iii_h),
            ("c_ox", self.c_ox),
            ("m_fe", self.m_fe),
            ("rho_fe", self.rho_fe),
            ("m_o", self.m_o),
            ("m_h", self.m_h),
            ("rho_o", self.rho_o),
            ("rho_h", self.rho_h),
            ("z_a", self.z_a),
            ("faraday", self.faraday),
            ("i_a_ref", self.i_a_ref),
            ("d_rust", self.d_rust),
            ("t_c", self.t_c),
        ];
        for (name, v) in positive {
            if !(v > 0.0) {
                return Err(Error::config(format!("chemistry constant {name} must be > 0, got {v}")));
            }
        }
        if !(self.kappa_h > self.kappa_o && self.kappa_o > 1.0) {
            return Err(Error::config("expansion ratios must satisfy kappa_h > kappa_o > 1"));
        }
        if !(self.k1 > 0.0 && self.k1 <= 1.0) {
            return Err(Error::config(format!("k1 must lie in (0, 1], got {}", self.k1)));
        }
        if !(self.k2 < 0.0) {
            return Err(Error::config(format!("k2 must be negative, got {}", self.k2)));
        }
        Ok(())
    }
}

/// Composition of rust produced at a given corrosion current density.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RustComposition {
    /// Mass fraction of hydroxy-oxide rust.
    pub r_h: f64,
    /// Volumetric expansion coefficient of the rust mixture.
    pub kappa: f64,
    /// Oxide precipitation rate constant [1/s].
    pub k_ii_o: f64,
}

impl RustComposition {
    /// Builds the full composition for a current density.
    pub fn for_current_density(i_a: f64, consts: &ChemistryConstants) -> Result<Self> {
        let r_h = hydroxide_mass_fraction(i_a, consts)?;
        Ok(RustComposition {
            r_h,
            kappa: expansion_coefficient(r_h, consts)?,
            k_ii_o: oxide_rate_constant(r_h, consts)?,
        })
    }

    /// Sum of the Fe2+ consumption rate constants, `k_II->o + c_ox k_II->III`.
    pub fn ferrous_rate_sum(&self, consts: &ChemistryConstants) -> f64 {
        self.k_ii_o + consts.c_ox * consts.k_ii_iii
    }
}

/// Mass fraction of hydroxy-oxide rust, `min(1, k1 (i_a/i_ref)^k2)`.
pub fn hydroxide_mass_fraction(i_a: f64, consts: &ChemistryConstants) -> Result<f64> {
    if !(i_a > 0.0) {
        return Err(Error::config(format!(
            "current density must be > 0 for the composition fit, got {i_a}"
        )));
    }
    Ok((consts.k1 * (i_a / consts.i_a_ref).powf(consts.k2)).min(1.0))
}

/// Volumetric expansion coefficient, `r_h kappa_h + (1 - r_h) kappa_o`.
pub fn expansion_coefficient(r_h: f64, consts: &ChemistryConstants) -> Result<f64> {
    if !(0.0..=1.0).contains(&r_h) {
        return Err(Error::config(format!("r_h must lie in [0, 1], got {r_h}")));
    }
    Ok(r_h * consts.kappa_h + (1.0 - r_h) * consts.kappa_o)
}

/// Oxide precipitation rate constant chosen so that a closed, well-mixed
/// reaction system ends at hydroxy-oxide mass fraction `r_h`:
/// `k_II->o = k_II->III c_ox (M_h/M_o) (1 - r_h)/r_h`.
///
/// With `printed_rate_form` the 1/r_h factor is dropped (the uncorrected
/// published estimate, which matches the mass balance only for r_h near 1).
pub fn oxide_rate_constant(r_h: f64, consts: &ChemistryConstants) -> Result<f64> {
    if !(r_h > 0.0 && r_h <= 1.0) {
        return Err(Error::config(format!(
            "oxide rate constant is singular outside 0 < r_h <= 1, got {r_h}"
        )));
    }
    let base = consts.k_ii_iii * consts.c_ox * (consts.m_h / consts.m_o) * (1.0 - r_h);
    Ok(if consts.printed_rate_form {
        base
    } else {
        base / r_h
    })
}

/// Corrosion penetration rate from Faraday's law, `i_a M_Fe / (z_a F rho_Fe)`
/// [m/s].
pub fn faraday_penetration_rate(i_a: f64, consts: &ChemistryConstants) -> Result<f64> {
    if i_a < 0.0 {
        return Err(Error::config(format!("current density must be >= 0, got {i_a}")));
    }
    Ok(i_a * consts.m_fe / (consts.z_a * consts.faraday * consts.rho_fe))
}

/// Ferrous ion molar flux from Faraday's law, `i_a / (z_a F)` [mol m^-2 s^-1].
pub fn faraday_flux(i_a: f64, consts: &ChemistryConstants) -> Result<f64> {
    if i_a < 0.0 {
        return Err(Error::config(format!("current density must be >= 0, got {i_a}")));
    }
    Ok(i_a / (consts.z_a * consts.faraday))
}

/// Flux reduction coefficient of the dense rust layer.
///
/// `t_r` is the rust layer thickness, `s_l` the liquid saturation of the
/// adjacent concrete and `d_c_eff` the ferrous diffusivity of the concrete
/// pore matrix. Returns the fraction of the Faraday flux escaping past the
/// layer, clamped to [0, 1].
pub fn flux_reduction(
    t_r: f64,
    s_l: f64,
    comp: &RustComposition,
    consts: &ChemistryConstants,
    d_c_eff: f64,
) -> Result<f64> {
    if t_r < 0.0 || !(0.0..=1.0).contains(&s_l) || d_c_eff <= 0.0 {
        return Err(Error::config(format!(
            "flux_reduction domain error: t_r = {t_r}, s_l = {s_l}, d_c_eff = {d_c_eff}"
        )));
    }
    if s_l == 0.0 {
        return Ok(0.0);
    }
    let rate = comp.ferrous_rate_sum(consts);
    let a_r = t_r * (rate / consts.d_rust).sqrt();
    let a_c = consts.t_c * (rate / (s_l * d_c_eff)).sqrt();
    let sq_con = (s_l * d_c_eff).sqrt();
    let sq_rust = consts.d_rust.sqrt();
    // 2 e^{A_r} / (1 + e^{2 A_r}) = sech(A_r); evaluate the decaying form to
    // stay finite for thick layers.
    let sech = if a_r > 350.0 {
        2.0 * (-a_r).exp()
    } else {
        1.0 / a_r.cosh()
    };
    let coth = 1.0 / a_c.tanh();
    let k_f = sech * sq_con * coth / (sq_con * coth + sq_rust * a_r.tanh());
    Ok(k_f.clamp(0.0, 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn consts() -> ChemistryConstants {
        ChemistryConstants::default()
    }

    #[test]
    fn composition_fit_hits_published_anchors() {
        let c = consts();
        // 1 uA/cm^2 -> 0.9, 50 uA/cm^2 -> 0.5 (the two fit anchors).
        assert!((hydroxide_mass_fraction(1e-2, &c).unwrap() - 0.9).abs() < 1e-12);
        assert!((hydroxide_mass_fraction(0.5, &c).unwrap() - 0.5).abs() < 1e-12);
        // At the reference density the prefactor comes out exactly.
        assert_eq!(hydroxide_mass_fraction(c.i_a_ref, &c).unwrap(), 0.9);
        assert!(hydroxide_mass_fraction(0.0, &c).is_err());
    }

    #[test]
    fn composition_clamps_at_one_and_decreases() {
        let c = consts();
        // Below the reference density the power law exceeds k1; must clamp.
        assert_eq!(hydroxide_mass_fraction(1e-6, &c).unwrap(), 1.0);
        let mut prev = 2.0;
        for i in 0..60 {
            let i_a = 1e-2 * 10f64.powf(i as f64 / 12.0);
            let r = hydroxide_mass_fraction(i_a, &c).unwrap();
            assert!(r <= prev);
            prev = r;
        }
    }

    #[test]
    fn expansion_coefficient_endpoints_and_mixture() {
        let c = consts();
        assert_eq!(expansion_coefficient(1.0, &c).unwrap(), 3.3);
        assert_eq!(expansion_coefficient(0.0, &c).unwrap(), 2.0);
        // 0.9*3.3 + 0.1*2 = 3.17
        assert!((expansion_coefficient(0.9, &c).unwrap() - 3.17).abs() < 1e-12);
        assert!(expansion_coefficient(1.2, &c).is_err());
        // Affine and bounded.
        for i in 0..=20 {
            let r = i as f64 / 20.0;
            let k = expansion_coefficient(r, &c).unwrap();
            assert!((2.0..=3.3).contains(&k));
        }
    }

    #[test]
    fn oxide_rate_constant_limits() {
        let c = consts();
        assert_eq!(oxide_rate_constant(1.0, &c).unwrap(), 0.0);
        assert!(oxide_rate_constant(0.0, &c).is_err());
        // Frozen from direct evaluation: r_h = 0.9 gives 3.4618e-3 1/s.
        let k = oxide_rate_constant(0.9, &c).unwrap();
        assert!((k - 3.461_768_593_891_324e-3).abs() < 1e-15);
    }

    /// Closed well-mixed box: integrate the two-species reaction system to
    /// completion and recover the hydroxy-oxide mass fraction the rate
    /// constant was built for.
    fn box_final_mass_fraction(r_h_target: f64, c: &ChemistryConstants) -> f64 {
        let k_o = oxide_rate_constant(r_h_target, c).unwrap();
        let k_ox = c.k_ii_iii * c.c_ox;
        let mut c2 = 1.0; // mol/m^3, arbitrary scale
        let mut c3 = 0.0;
        let mut mass_o = 0.0;
        let mut mass_h = 0.0;
        // Semi-implicit Euler, stiff-safe step far below both half-times.
        let dt = 1.0;
        for _ in 0..2_000_000 {
            let c2_new = c2 / (1.0 + dt * (k_o + k_ox));
            let c3_new = (c3 + dt * k_ox * c2_new) / (1.0 + dt * c.k_iii_h);
            mass_o += c.m_o * dt * k_o * c2_new;
            mass_h += c.m_h * dt * c.k_iii_h * c3_new;
            c2 = c2_new;
            c3 = c3_new;
            if c2 + c3 < 1e-9 {
                break;
            }
        }
        mass_h / (mass_o + mass_h)
    }

    #[test]
    fn box_oracle_recovers_target_fraction() {
        let c = consts();
        for target in [0.5, 0.9] {
            let got = box_final_mass_fraction(target, &c);
            assert!(
                (got - target).abs() / target < 0.01,
                "target {target}, box gave {got}"
            );
        }
    }

    #[test]
    fn printed_rate_form_differs_by_inverse_fraction() {
        let mut c = consts();
        let corrected = oxide_rate_constant(0.5, &c).unwrap();
        c.printed_rate_form = true;
        let printed = oxide_rate_constant(0.5, &c).unwrap();
        assert!((corrected * 0.5 - printed).abs() < 1e-18);
    }

    #[test]
    fn faraday_kinematics() {
        let c = consts();
        // 1 uA/cm^2 is about 11.6 um/year.
        let rate = faraday_penetration_rate(1e-2, &c).unwrap();
        let um_per_year = rate * 365.25 * 86400.0 * 1e6;
        assert!((um_per_year - 11.6).abs() < 0.05, "{um_per_year}");
        assert_eq!(faraday_penetration_rate(0.0, &c).unwrap(), 0.0);
        assert!(
            (faraday_penetration_rate(2e-2, &c).unwrap() - 2.0 * rate).abs() < 1e-25
        );

        let j = faraday_flux(1e-2, &c).unwrap();
        assert!((j - 5.182_134_828e-8).abs() < 1e-15, "{j}");
        assert_eq!(faraday_flux(0.0, &c).unwrap(), 0.0);
        assert!((faraday_flux(3e-2, &c).unwrap() - 3.0 * j).abs() < 1e-20);
    }

    #[test]
    fn flux_reduction_no_layer_is_unity() {
        let c = consts();
        let comp = RustComposition::for_current_density(1e-2, &c).unwrap();
        let k = flux_reduction(0.0, 1.0, &comp, &c, 3.85e-11).unwrap();
        assert!((k - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn flux_reduction_thick_layer_vanishes() {
        let c = consts();
        let comp = RustComposition::for_current_density(1e-2, &c).unwrap();
        assert!(flux_reduction(0.01, 1.0, &comp, &c, 3.85e-11).unwrap() < 1e-6);
        assert_eq!(flux_reduction(1.0, 1.0, &comp, &c, 3.85e-11).unwrap(), 0.0);
        assert_eq!(flux_reduction(1e-5, 0.0, &comp, &c, 3.85e-11).unwrap(), 0.0);
    }

    #[test]
    fn flux_reduction_matches_frozen_scalar_oracle() {
        // t_r = 10 um, S_l = 1, D_c = 1e-11/0.26, D_r = 1e-10, rate constants
        // from r_h = 0.9 (rate sum 0.0314618): arbitrary-precision evaluation
        // of the closed form gives 0.767293476720137.
        let c = consts();
        let comp = RustComposition::for_current_density(1e-2, &c).unwrap();
        assert!((comp.r_h - 0.9).abs() < 1e-12);
        let k = flux_reduction(10e-6, 1.0, &comp, &c, 1e-11 / 0.26).unwrap();
        assert!((k - 0.767_293_476_720_137).abs() < 1e-12, "{k}");
    }

    #[test]
    fn flux_reduction_monotone_in_thickness_and_saturation() {
        let c = consts();
        let comp = RustComposition::for_current_density(0.5, &c).unwrap();
        let d = 3.85e-11;
        let mut prev = 1.1;
        for i in 0..=100 {
            let t_r = i as f64 * 1e-6;
            let k = flux_reduction(t_r, 1.0, &comp, &c, d).unwrap();
            assert!(k < prev, "not strictly decreasing at t_r = {t_r}");
            assert!((0.0..=1.0).contains(&k));
            prev = k;
        }
        for i in 1..=10 {
            let s_hi = i as f64 / 10.0;
            let s_lo = s_hi - 0.1;
            let hi = flux_reduction(5e-6, s_hi, &comp, &c, d).unwrap();
            let lo = flux_reduction(5e-6, s_lo.max(0.0), &comp, &c, d).unwrap();
            assert!(lo <= hi + 1e-15, "k_f increased as saturation dropped");
        }
    }
}
