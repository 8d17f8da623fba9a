//! Propagation model: received powers, Nakagami fading, log-normal
//! shadowing, antenna-gain selection and the displacement-theorem intensity
//! transforms that absorb shadowing into the point-process densities.
//!
//! Unit conventions: lengths in km, powers in watts, gains linear. Pathloss
//! is the dimensionless (distance / 1 km)^{-α}; the absolute offset cancels
//! in every SIR since noise defaults to zero. dB/dBm appear only at the
//! configuration boundary.

use rand::Rng;
use rand_distr::{Distribution, Gamma, Normal};

use crate::{BsKind, Error, Result};

const LN10: f64 = std::f64::consts::LN_10;

/// Propagation scenario for the SBS tier. Selects the paired
/// (α_S, m_{S,0}, m_{V,0}) defaults: LOS → (2, 2, 2), NLOS → (4, 1, 1).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Scenario {
    Los,
    Nlos,
}

impl Scenario {
    pub fn label(self) -> &'static str {
        match self {
            Scenario::Los => "los",
            Scenario::Nlos => "nlos",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s.to_ascii_lowercase().as_str() {
            "los" => Some(Scenario::Los),
            "nlos" => Some(Scenario::Nlos),
            _ => None,
        }
    }
}

/// All physical and statistical parameters of the network model.
///
/// Defaults are the standard system parameters (46/20/20 dBm transmit
/// powers, 0/-20 dBi main/side-lobe gains, α_M = 4, shadowing σ of 4/2/4 dB,
/// Greenshields v_max = 120 km/h and λ_max = 63 /km, 3 km region) with the
/// LOS scenario pairing; densities default to the reference deployment used
/// by the coverage figures (λ_m = 5 /km², λ_v = 15 /km, λ_s = 2 λ_m).
#[derive(Clone, Debug, PartialEq)]
pub struct NetworkConfig {
    /// MBS planar density, nodes/km².
    pub lambda_m: f64,
    /// Road (line-process) density, km⁻¹.
    pub lambda_l: f64,
    /// SBS linear density on each road, nodes/km.
    pub lambda_s: f64,
    /// Vehicle linear density on each road, nodes/km.
    pub lambda_v: f64,
    pub p_m_dbm: f64,
    pub p_s_dbm: f64,
    pub p_v_dbm: f64,
    pub g_m_dbi: f64,
    pub g_s0_dbi: f64,
    pub g_s1_dbi: f64,
    pub g_v0_dbi: f64,
    pub g_v1_dbi: f64,
    pub alpha_m: f64,
    pub alpha_s: f64,
    pub m_m: u32,
    pub m_s0: u32,
    pub m_s1: u32,
    pub m_v0: u32,
    pub m_v1: u32,
    pub shadow_std_m_db: f64,
    pub shadow_std_s0_db: f64,
    pub shadow_std_s1_db: f64,
    pub v_max_kmh: f64,
    pub lambda_max_per_km: f64,
    pub scenario: Scenario,
    pub region_radius_km: f64,
    pub noise_power_w: f64,
}

impl Default for NetworkConfig {
    fn default() -> Self {
        Self::defaults(Scenario::Los)
    }
}

impl NetworkConfig {
    pub fn defaults(scenario: Scenario) -> Self {
        let (alpha_s, m_s0, m_v0) = match scenario {
            Scenario::Los => (2.0, 2, 2),
            Scenario::Nlos => (4.0, 1, 1),
        };
        Self {
            lambda_m: 5.0,
            lambda_l: 10.0,
            lambda_s: 10.0,
            lambda_v: 15.0,
            p_m_dbm: 46.0,
            p_s_dbm: 20.0,
            p_v_dbm: 20.0,
            g_m_dbi: 0.0,
            g_s0_dbi: 0.0,
            g_s1_dbi: -20.0,
            g_v0_dbi: 0.0,
            g_v1_dbi: -20.0,
            alpha_m: 4.0,
            alpha_s,
            m_m: 1,
            m_s0,
            m_s1: 1,
            m_v0,
            m_v1: 1,
            shadow_std_m_db: 4.0,
            shadow_std_s0_db: 2.0,
            shadow_std_s1_db: 4.0,
            v_max_kmh: 120.0,
            lambda_max_per_km: 63.0,
            scenario,
            region_radius_km: 3.0,
            noise_power_w: 0.0,
        }
    }

    /// Re-applies the scenario pairing (α_S, m_{S,0}, m_{V,0}); explicit
    /// overrides in a config file are applied afterwards.
    pub fn set_scenario(&mut self, scenario: Scenario) {
        self.scenario = scenario;
        let (alpha_s, m_s0, m_v0) = match scenario {
            Scenario::Los => (2.0, 2, 2),
            Scenario::Nlos => (4.0, 1, 1),
        };
        self.alpha_s = alpha_s;
        self.m_s0 = m_s0;
        self.m_v0 = m_v0;
    }

    pub fn p_m_w(&self) -> f64 {
        dbm_to_watts(self.p_m_dbm)
    }
    pub fn p_s_w(&self) -> f64 {
        dbm_to_watts(self.p_s_dbm)
    }
    pub fn p_v_w(&self) -> f64 {
        dbm_to_watts(self.p_v_dbm)
    }
    pub fn g_m(&self) -> f64 {
        dbi_to_linear(self.g_m_dbi)
    }
    pub fn g_s0(&self) -> f64 {
        dbi_to_linear(self.g_s0_dbi)
    }
    pub fn g_s1(&self) -> f64 {
        dbi_to_linear(self.g_s1_dbi)
    }
    pub fn g_v0(&self) -> f64 {
        dbi_to_linear(self.g_v0_dbi)
    }
    pub fn g_v1(&self) -> f64 {
        dbi_to_linear(self.g_v1_dbi)
    }

    /// DL association constant A = P_M G_M / (P_S G_{S,0}).
    pub fn a_ms(&self) -> f64 {
        self.p_m_w() * self.g_m() / (self.p_s_w() * self.g_s0())
    }

    /// UL association constant B = G_{V,1} / G_{V,0}.
    pub fn b_ms(&self) -> f64 {
        self.g_v1() / self.g_v0()
    }

    pub fn validate(&self) -> Result<()> {
        let nonneg = [
            ("lambda_m", self.lambda_m),
            ("lambda_l", self.lambda_l),
            ("lambda_s", self.lambda_s),
            ("lambda_v", self.lambda_v),
            ("shadow_std_m_db", self.shadow_std_m_db),
            ("shadow_std_s0_db", self.shadow_std_s0_db),
            ("shadow_std_s1_db", self.shadow_std_s1_db),
            ("noise_power_w", self.noise_power_w),
        ];
        for (name, v) in nonneg {
            if !(v >= 0.0) || !v.is_finite() {
                return Err(Error::Validation(format!("{name} must be finite and >= 0")));
            }
        }
        for (name, v) in [
            ("p_m_dbm", self.p_m_dbm),
            ("p_s_dbm", self.p_s_dbm),
            ("p_v_dbm", self.p_v_dbm),
            ("g_m_dbi", self.g_m_dbi),
            ("g_s0_dbi", self.g_s0_dbi),
            ("g_s1_dbi", self.g_s1_dbi),
            ("g_v0_dbi", self.g_v0_dbi),
            ("g_v1_dbi", self.g_v1_dbi),
        ] {
            if !v.is_finite() {
                return Err(Error::Validation(format!("{name} must be finite")));
            }
        }
        if !(self.alpha_m > 2.0) {
            return Err(Error::Validation(
                "alpha_m must exceed 2 for planar interference to converge".into(),
            ));
        }
        if !(self.alpha_s >= 2.0) {
            return Err(Error::Validation(
                "alpha_s must be >= 2 (2 is the LOS on-road exponent)".into(),
            ));
        }
        for (name, m) in [
            ("m_m", self.m_m),
            ("m_s0", self.m_s0),
            ("m_s1", self.m_s1),
            ("m_v0", self.m_v0),
            ("m_v1", self.m_v1),
        ] {
            if !(1..=4).contains(&m) {
                return Err(Error::Validation(format!(
                    "{name} must be an integer in 1..=4 (got {m})"
                )));
            }
        }
        if !(self.v_max_kmh > 0.0) || !(self.lambda_max_per_km >= 0.0) {
            return Err(Error::Validation(
                "v_max_kmh must be > 0 and lambda_max_per_km >= 0".into(),
            ));
        }
        if !(self.region_radius_km > 0.0) {
            return Err(Error::Validation("region_radius_km must be > 0".into()));
        }
        if !(self.a_ms() > self.b_ms()) {
            return Err(Error::Validation(format!(
                "association constants must satisfy a_ms > b_ms \
                 (got a_ms = {:.6e}, b_ms = {:.6e}); the case taxonomy degenerates otherwise",
                self.a_ms(),
                self.b_ms()
            )));
        }
        Ok(())
    }
}

/// Post-displacement process intensities. Shadowing is absorbed by scaling
/// each density with the fractional moment E[χ^{-k/α}] (k = 2 planar, 1 on
/// a line); the other-road Cox fields additionally converge to planar PPPs
/// of intensity π λ_l λ.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TransformedIntensities {
    /// MBS planar intensity λ_M, 1/km².
    pub mbs: f64,
    /// Typical-road SBS line intensity λ_S, 1/km.
    pub sbs_on_road: f64,
    /// Typical-road vehicle line intensity λ_V, 1/km.
    pub veh_on_road: f64,
    /// Other-road SBS planar intensity λ_Sa, 1/km².
    pub sbs_planar: f64,
    /// Other-road vehicle planar intensity λ_Va, 1/km².
    pub veh_planar: f64,
}

/// dBm → watts.
pub fn dbm_to_watts(p_dbm: f64) -> f64 {
    10f64.powf((p_dbm - 30.0) / 10.0)
}

/// dBi → linear gain.
pub fn dbi_to_linear(g_dbi: f64) -> f64 {
    10f64.powf(g_dbi / 10.0)
}

/// Fractional moment E[χ^{-dims/α}] of a zero-mean log-normal shadowing
/// gain with 10 log₁₀ χ ~ N(0, σ²): exp(½ (dims/α · σ ln10/10)²).
pub fn lognormal_fractional_moment(sigma_db: f64, alpha: f64, dims: u32) -> f64 {
    debug_assert!(sigma_db >= 0.0 && alpha > 0.0 && (dims == 1 || dims == 2));
    let s = dims as f64 / alpha * sigma_db * LN10 / 10.0;
    (0.5 * s * s).exp()
}

/// Displacement-theorem intensity transforms for the whole deployment.
pub fn transform_intensities(cfg: &NetworkConfig) -> TransformedIntensities {
    let planar_other = lognormal_fractional_moment(cfg.shadow_std_s1_db, cfg.alpha_s, 2)
        * std::f64::consts::PI
        * cfg.lambda_l;
    TransformedIntensities {
        mbs: lognormal_fractional_moment(cfg.shadow_std_m_db, cfg.alpha_m, 2) * cfg.lambda_m,
        sbs_on_road: lognormal_fractional_moment(cfg.shadow_std_s0_db, cfg.alpha_s, 1)
            * cfg.lambda_s,
        veh_on_road: lognormal_fractional_moment(cfg.shadow_std_s0_db, cfg.alpha_s, 1)
            * cfg.lambda_v,
        sbs_planar: planar_other * cfg.lambda_s,
        veh_planar: planar_other * cfg.lambda_v,
    }
}

/// Unit-mean Nakagami-m power fading: Gamma(shape m, rate m).
pub fn sample_fading<R: Rng + ?Sized>(m: u32, rng: &mut R) -> f64 {
    debug_assert!(m >= 1);
    Gamma::new(m as f64, 1.0 / m as f64)
        .expect("valid gamma parameters")
        .sample(rng)
}

/// Log-normal shadowing gain, linear: 10^{N(0, σ²)/10}.
pub fn sample_shadowing<R: Rng + ?Sized>(sigma_db: f64, rng: &mut R) -> f64 {
    if sigma_db == 0.0 {
        return 1.0;
    }
    let db = Normal::new(0.0, sigma_db)
        .expect("valid normal parameters")
        .sample(rng);
    10f64.powf(db / 10.0)
}

/// Link classes of the typical vehicle: to an MBS, to an SBS on its own
/// road, and to an SBS on another road. Each class pins the constants of
/// both directions of the link.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LinkClass {
    /// Vehicle ↔ MBS.
    VehicleMacro,
    /// Vehicle ↔ SBS on the typical road.
    VehicleSbsTypical,
    /// Vehicle ↔ SBS on another road.
    VehicleSbsOther,
}

/// Constants of one directed link.
#[derive(Clone, Copy, Debug)]
pub struct LinkParams {
    pub power_w: f64,
    pub gain: f64,
    pub nakagami_m: u32,
    pub shadow_std_db: f64,
    pub alpha: f64,
}

impl LinkClass {
    /// Downlink (base station transmits to the vehicle).
    pub fn dl(self, cfg: &NetworkConfig) -> LinkParams {
        match self {
            LinkClass::VehicleMacro => LinkParams {
                power_w: cfg.p_m_w(),
                gain: cfg.g_m(),
                nakagami_m: cfg.m_m,
                shadow_std_db: cfg.shadow_std_m_db,
                alpha: cfg.alpha_m,
            },
            LinkClass::VehicleSbsTypical => LinkParams {
                power_w: cfg.p_s_w(),
                gain: cfg.g_s0(),
                nakagami_m: cfg.m_s0,
                shadow_std_db: cfg.shadow_std_s0_db,
                alpha: cfg.alpha_s,
            },
            LinkClass::VehicleSbsOther => LinkParams {
                power_w: cfg.p_s_w(),
                gain: cfg.g_s1(),
                nakagami_m: cfg.m_s1,
                shadow_std_db: cfg.shadow_std_s1_db,
                alpha: cfg.alpha_s,
            },
        }
    }

    /// Uplink (a vehicle transmits to the base station).
    pub fn ul(self, cfg: &NetworkConfig) -> LinkParams {
        match self {
            LinkClass::VehicleMacro => LinkParams {
                power_w: cfg.p_v_w(),
                gain: cfg.g_v1(),
                nakagami_m: cfg.m_v1,
                shadow_std_db: cfg.shadow_std_m_db,
                alpha: cfg.alpha_m,
            },
            LinkClass::VehicleSbsTypical => LinkParams {
                power_w: cfg.p_v_w(),
                gain: cfg.g_v0(),
                nakagami_m: cfg.m_v0,
                shadow_std_db: cfg.shadow_std_s0_db,
                alpha: cfg.alpha_s,
            },
            LinkClass::VehicleSbsOther => LinkParams {
                power_w: cfg.p_v_w(),
                gain: cfg.g_v1(),
                nakagami_m: cfg.m_v1,
                shadow_std_db: cfg.shadow_std_s1_db,
                alpha: cfg.alpha_s,
            },
        }
    }
}

/// Received power at the typical vehicle in DL from a transmitter of the
/// given class at `distance_km`, with explicit fading and shadowing gains.
pub fn received_power_dl(
    tx: LinkClass,
    distance_km: f64,
    fading: f64,
    shadow: f64,
    cfg: &NetworkConfig,
) -> Result<f64> {
    if distance_km == 0.0 {
        return Err(Error::DegenerateDistance);
    }
    let p = tx.dl(cfg);
    Ok(p.power_w * p.gain * fading * shadow * distance_km.powf(-p.alpha))
}

/// Received power at the serving base station in UL from the typical
/// vehicle. Gain and exponent follow the serving tier: an MBS sees the
/// vehicle's side lobe over α_M, an SBS on the vehicle's road sees the main
/// lobe over α_S.
pub fn received_power_ul(
    serving: BsKind,
    distance_km: f64,
    fading: f64,
    shadow: f64,
    cfg: &NetworkConfig,
) -> Result<f64> {
    if distance_km == 0.0 {
        return Err(Error::DegenerateDistance);
    }
    let p = match serving {
        BsKind::Mbs => LinkClass::VehicleMacro.ul(cfg),
        BsKind::Sbs => LinkClass::VehicleSbsTypical.ul(cfg),
    };
    Ok(p.power_w * p.gain * fading * shadow * distance_km.powf(-p.alpha))
}

/// Greenshields speed–density relation λ(v) = λ_max (1 - v/v_max).
pub fn speed_to_density(v_kmh: f64, cfg: &NetworkConfig) -> Result<f64> {
    if !(0.0..=cfg.v_max_kmh).contains(&v_kmh) {
        return Err(Error::OutOfRange {
            what: "vehicle speed (km/h)",
            value: v_kmh,
            lo: 0.0,
            hi: cfg.v_max_kmh,
        });
    }
    Ok(cfg.lambda_max_per_km * (1.0 - v_kmh / cfg.v_max_kmh))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn dbm_and_dbi_conversions() {
        assert!((dbm_to_watts(30.0) - 1.0).abs() < 1e-12);
        assert!((dbm_to_watts(46.0) - 39.810717055349734).abs() < 1e-9);
        assert!((dbi_to_linear(0.0) - 1.0).abs() < 1e-15);
        assert!((dbi_to_linear(-20.0) - 0.01).abs() < 1e-15);
    }

    #[test]
    fn fractional_moment_degenerate_and_reference_value() {
        assert_eq!(lognormal_fractional_moment(0.0, 4.0, 2), 1.0);
        // σ = 4 dB, α = 4, planar: exp(½ (0.5·0.4·ln10)²) ≈ 1.1118641.
        let v = lognormal_fractional_moment(4.0, 4.0, 2);
        assert!((v - 1.1118640845227588).abs() < 1e-12);
    }

    #[test]
    fn fractional_moment_monte_carlo_oracle() {
        // Independent sampling oracle for E[χ^{-2/α}].
        let (sigma, alpha) = (4.0, 4.0);
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        let n = 2_000_000;
        let mut acc = 0.0;
        for _ in 0..n {
            let chi = sample_shadowing(sigma, &mut rng);
            acc += chi.powf(-2.0 / alpha);
        }
        let mc = acc / n as f64;
        let analytic = lognormal_fractional_moment(sigma, alpha, 2);
        assert!(
            ((mc - analytic) / analytic).abs() < 2e-3,
            "mc={mc} analytic={analytic}"
        );
    }

    #[test]
    fn fractional_moment_is_at_least_one() {
        for sigma in [0.0, 1.0, 2.0, 4.0, 8.0] {
            for alpha in [2.0, 3.0, 4.0] {
                for dims in [1, 2] {
                    assert!(lognormal_fractional_moment(sigma, alpha, dims) >= 1.0);
                }
            }
        }
    }

    #[test]
    fn transform_intensities_zero_shadowing_passthrough() {
        let mut cfg = NetworkConfig::default();
        cfg.shadow_std_m_db = 0.0;
        cfg.shadow_std_s0_db = 0.0;
        cfg.shadow_std_s1_db = 0.0;
        let t = transform_intensities(&cfg);
        assert_eq!(t.mbs, cfg.lambda_m);
        assert_eq!(t.sbs_on_road, cfg.lambda_s);
        assert_eq!(t.veh_on_road, cfg.lambda_v);
        let pll = std::f64::consts::PI * cfg.lambda_l;
        assert!((t.sbs_planar - pll * cfg.lambda_s).abs() < 1e-12);
        assert!((t.veh_planar - pll * cfg.lambda_v).abs() < 1e-12);
    }

    #[test]
    fn transform_intensities_closed_form_and_linearity() {
        let cfg = NetworkConfig::defaults(Scenario::Nlos);
        let t = transform_intensities(&cfg);
        let em2 = lognormal_fractional_moment(4.0, 4.0, 2);
        let es1 = lognormal_fractional_moment(2.0, 4.0, 1);
        let eo2 = lognormal_fractional_moment(4.0, 4.0, 2);
        assert!((t.mbs - em2 * cfg.lambda_m).abs() < 1e-12);
        assert!((t.sbs_on_road - es1 * cfg.lambda_s).abs() < 1e-12);
        assert!((t.veh_on_road - es1 * cfg.lambda_v).abs() < 1e-12);
        let pll = std::f64::consts::PI * cfg.lambda_l;
        assert!((t.sbs_planar - eo2 * pll * cfg.lambda_s).abs() < 1e-10);
        assert!((t.veh_planar - eo2 * pll * cfg.lambda_v).abs() < 1e-10);

        let mut doubled = cfg.clone();
        doubled.lambda_m *= 2.0;
        doubled.lambda_s *= 2.0;
        doubled.lambda_v *= 2.0;
        let t2 = transform_intensities(&doubled);
        assert!((t2.mbs - 2.0 * t.mbs).abs() < 1e-10);
        assert!((t2.sbs_on_road - 2.0 * t.sbs_on_road).abs() < 1e-10);
        assert!((t2.veh_planar - 2.0 * t.veh_planar).abs() < 1e-9);
    }

    #[test]
    fn fading_mean_and_variance() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for m in [1u32, 2, 3] {
            let n = 1_000_000;
            let mut sum = 0.0;
            let mut sq = 0.0;
            for _ in 0..n {
                let h = sample_fading(m, &mut rng);
                sum += h;
                sq += h * h;
            }
            let mean = sum / n as f64;
            let var = sq / n as f64 - mean * mean;
            // mean 1, variance 1/m; 3σ sample-mean bands.
            assert!((mean - 1.0).abs() < 3.0 / (m as f64 * n as f64).sqrt() + 1e-3);
            assert!((var - 1.0 / m as f64).abs() < 0.01, "m={m}: var={var}");
        }
    }

    #[test]
    fn fading_deterministic_under_fixed_rng() {
        let mut a = ChaCha8Rng::seed_from_u64(42);
        let mut b = ChaCha8Rng::seed_from_u64(42);
        for m in [1u32, 2, 4] {
            assert_eq!(sample_fading(m, &mut a), sample_fading(m, &mut b));
        }
    }

    #[test]
    fn shadowing_db_statistics() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let sigma = 4.0;
        let n = 500_000;
        let mut sum = 0.0;
        let mut sq = 0.0;
        for _ in 0..n {
            let db = 10.0 * sample_shadowing(sigma, &mut rng).log10();
            sum += db;
            sq += db * db;
        }
        let mean = sum / n as f64;
        let std = (sq / n as f64 - mean * mean).sqrt();
        assert!(mean.abs() < 0.02);
        assert!((std - sigma).abs() < 0.02);
    }

    #[test]
    fn received_power_selects_class_constants() {
        let cfg = NetworkConfig::default();
        // MBS at 1 km with unit fading/shadowing: P_M·G_M.
        let p = received_power_dl(LinkClass::VehicleMacro, 1.0, 1.0, 1.0, &cfg).unwrap();
        assert!((p - 39.810717055349734).abs() < 1e-9);
        // Doubling distance at α = 4 divides power by 16.
        let p2 = received_power_dl(LinkClass::VehicleMacro, 2.0, 1.0, 1.0, &cfg).unwrap();
        assert!((p / p2 - 16.0).abs() < 1e-9);
        // Side-lobe SBS is 20 dB below a typical-road SBS at equal distance.
        let s0 = received_power_dl(LinkClass::VehicleSbsTypical, 0.5, 1.0, 1.0, &cfg).unwrap();
        let s1 = received_power_dl(LinkClass::VehicleSbsOther, 0.5, 1.0, 1.0, &cfg).unwrap();
        assert!((s1 / s0 - 0.01).abs() < 1e-12);
        // Linearity in fading and shadowing.
        let pf = received_power_dl(LinkClass::VehicleMacro, 1.5, 0.3, 2.0, &cfg).unwrap();
        let p1 = received_power_dl(LinkClass::VehicleMacro, 1.5, 1.0, 1.0, &cfg).unwrap();
        assert!((pf - 0.6 * p1).abs() < 1e-12);
        assert!(matches!(
            received_power_dl(LinkClass::VehicleMacro, 0.0, 1.0, 1.0, &cfg),
            Err(Error::DegenerateDistance)
        ));
    }

    #[test]
    fn uplink_power_uses_serving_tier_constants() {
        let cfg = NetworkConfig::default();
        let at_mbs = received_power_ul(BsKind::Mbs, 1.0, 1.0, 1.0, &cfg).unwrap();
        // Side lobe: P_V · G_{V,1} = 0.1 W · 0.01.
        assert!((at_mbs - cfg.p_v_w() * cfg.g_v1()).abs() < 1e-15);
        let at_sbs = received_power_ul(BsKind::Sbs, 1.0, 1.0, 1.0, &cfg).unwrap();
        assert!((at_sbs - cfg.p_v_w() * cfg.g_v0()).abs() < 1e-15);
        assert_eq!(
            received_power_ul(BsKind::Sbs, 2.0, 0.0, 1.0, &cfg).unwrap(),
            0.0
        );
    }

    #[test]
    fn greenshields_density() {
        let cfg = NetworkConfig::default();
        assert_eq!(speed_to_density(cfg.v_max_kmh, &cfg).unwrap(), 0.0);
        assert_eq!(speed_to_density(0.0, &cfg).unwrap(), 63.0);
        assert!((speed_to_density(60.0, &cfg).unwrap() - 31.5).abs() < 1e-12);
        assert!(matches!(
            speed_to_density(121.0, &cfg),
            Err(Error::OutOfRange { .. })
        ));
        assert!(matches!(
            speed_to_density(-1.0, &cfg),
            Err(Error::OutOfRange { .. })
        ));
    }

    #[test]
    fn scenario_pairing_and_validation() {
        let los = NetworkConfig::defaults(Scenario::Los);
        assert_eq!((los.alpha_s, los.m_s0, los.m_v0), (2.0, 2, 2));
        let nlos = NetworkConfig::defaults(Scenario::Nlos);
        assert_eq!((nlos.alpha_s, nlos.m_s0, nlos.m_v0), (4.0, 1, 1));
        los.validate().unwrap();
        nlos.validate().unwrap();

        // a_ms > b_ms must hold; equal powers with inverted gains break it.
        let mut bad = NetworkConfig::default();
        bad.p_m_dbm = 20.0;
        bad.g_v1_dbi = 0.0;
        bad.g_s0_dbi = 10.0;
        assert!(bad.validate().is_err());
    }

    #[test]
    fn association_constants_reference_values() {
        let cfg = NetworkConfig::default();
        // 46 dBm / 20 dBm with 0 dBi gains: 10^2.6.
        assert!((cfg.a_ms() - 10f64.powf(2.6)).abs() < 1e-9);
        assert!((cfg.b_ms() - 0.01).abs() < 1e-15);
    }
}
