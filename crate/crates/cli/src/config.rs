//! Flat `key = value` parameter files (TOML syntax, SI units) and the
//! command-line overrides layered on top of them.

use std::path::Path;

use atomcavity::SystemParams;
use clap::Args;
use serde::Deserialize;

use crate::CliError;

/// Environment variable naming the default parameter file.
pub const CONFIG_ENV: &str = "ATOMCAVITY_CONFIG";

/// Every key is optional; absent keys keep the figure defaults.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    omega_m: Option<f64>,
    kappa: Option<f64>,
    gamma_a: Option<f64>,
    gamma_m: Option<f64>,
    n_atoms: Option<f64>,
    #[serde(rename = "coupling_G", alias = "coupling_g")]
    coupling_g: Option<f64>,
    delta: Option<f64>,
    delta_r: Option<f64>,
    gamma_r: Option<f64>,
    cavity_length: Option<f64>,
    mirror_mass: Option<f64>,
    omega_c: Option<f64>,
    temperature: Option<f64>,
    n_thermal: Option<f64>,
    chi: Option<f64>,
    delta_a: Option<f64>,
}

/// Parses parameter-file text. `origin` names the source in error messages.
pub fn parse_params(text: &str, origin: &str) -> Result<SystemParams, CliError> {
    let file: ConfigFile =
        toml::from_str(text).map_err(|e| CliError::Config(format!("{origin}: {}", e.to_string().trim_end())))?;
    let mut p = SystemParams::default();
    let fields = [
        (file.omega_m, &mut p.omega_m),
        (file.kappa, &mut p.kappa),
        (file.gamma_a, &mut p.gamma_a),
        (file.gamma_m, &mut p.gamma_m),
        (file.n_atoms, &mut p.n_atoms),
        (file.coupling_g, &mut p.coupling_g),
        (file.delta, &mut p.delta),
        (file.delta_r, &mut p.delta_r),
        (file.gamma_r, &mut p.gamma_r),
        (file.cavity_length, &mut p.cavity_length),
        (file.mirror_mass, &mut p.mirror_mass),
        (file.omega_c, &mut p.omega_c),
        (file.temperature, &mut p.temperature),
        (file.n_thermal, &mut p.n_thermal),
    ];
    for (value, slot) in fields {
        if let Some(v) = value {
            *slot = v;
        }
    }
    p.chi = file.chi.or(p.chi);
    p.delta_a = file.delta_a.or(p.delta_a);
    Ok(p)
}

/// Figure defaults when `path` is `None`, otherwise the file's values.
pub fn load_params(path: Option<&Path>) -> Result<SystemParams, CliError> {
    match path {
        None => Ok(SystemParams::default()),
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
            parse_params(&text, &path.display().to_string())
        }
    }
}

/// One flag per parameter. `omega_m` and `kappa` are SI and define the units
/// of the others: rates in κ, mechanical quantities and detunings in ω_m.
#[derive(Debug, Clone, Default, Args)]
pub struct ParamFlags {
    /// Parameter file (TOML key = value, SI units)
    #[arg(long, global = true, env = CONFIG_ENV, value_name = "FILE")]
    pub config: Option<std::path::PathBuf>,
    /// Mechanical angular frequency [rad/s]
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub omega_m: Option<f64>,
    /// Cavity amplitude decay rate [rad/s]
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub kappa: Option<f64>,
    /// Collective atomic decay rate [units of kappa]
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub gamma_a: Option<f64>,
    /// Mechanical damping rate [units of omega_m]
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub gamma_m: Option<f64>,
    /// Number of atoms
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub n_atoms: Option<f64>,
    /// Collective atom-cavity coupling [units of kappa]
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub coupling_g: Option<f64>,
    /// Effective cavity detuning [units of omega_m]
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub delta: Option<f64>,
    /// Dimensionless effective atomic detuning
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub delta_r: Option<f64>,
    /// Dimensionless effective atomic decay
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub gamma_r: Option<f64>,
    /// Cavity length [m]
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub cavity_length: Option<f64>,
    /// Mirror mass [kg]
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub mirror_mass: Option<f64>,
    /// Cavity angular frequency [rad/s]
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub omega_c: Option<f64>,
    /// Bath temperature [K]
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub temperature: Option<f64>,
    /// Mean thermal phonon number
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub n_thermal: Option<f64>,
    /// Collective drive amplitude [units of kappa]
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub chi: Option<f64>,
    /// Bare atomic detuning [units of omega_m]
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub delta_a: Option<f64>,
}

impl ParamFlags {
    /// File values, then SI flags, then unit-relative flags.
    pub fn resolve(&self) -> Result<SystemParams, CliError> {
        let mut p = load_params(self.config.as_deref())?;
        let set = |slot: &mut f64, v: Option<f64>, unit: f64| {
            if let Some(v) = v {
                *slot = v * unit;
            }
        };
        set(&mut p.omega_m, self.omega_m, 1.0);
        set(&mut p.kappa, self.kappa, 1.0);
        let (kappa, omega_m) = (p.kappa, p.omega_m);
        set(&mut p.gamma_a, self.gamma_a, kappa);
        set(&mut p.gamma_m, self.gamma_m, omega_m);
        set(&mut p.n_atoms, self.n_atoms, 1.0);
        set(&mut p.coupling_g, self.coupling_g, kappa);
        set(&mut p.delta, self.delta, omega_m);
        set(&mut p.delta_r, self.delta_r, 1.0);
        set(&mut p.gamma_r, self.gamma_r, 1.0);
        set(&mut p.cavity_length, self.cavity_length, 1.0);
        set(&mut p.mirror_mass, self.mirror_mass, 1.0);
        set(&mut p.omega_c, self.omega_c, 1.0);
        set(&mut p.temperature, self.temperature, 1.0);
        set(&mut p.n_thermal, self.n_thermal, 1.0);
        if let Some(chi) = self.chi {
            p.chi = Some(chi * kappa);
        }
        if let Some(da) = self.delta_a {
            p.delta_a = Some(da * omega_m);
        }
        Ok(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_text_gives_defaults() {
        assert_eq!(parse_params("", "test").unwrap(), SystemParams::default());
    }

    #[test]
    fn keys_override_defaults() {
        let p = parse_params("kappa = 1e6\ncoupling_G = 2.5e7\nn_atoms = 1000000\n# note\nchi = 3.0\n", "t").unwrap();
        assert_eq!(p.kappa, 1e6);
        assert_eq!(p.coupling_g, 2.5e7);
        assert_eq!(p.n_atoms, 1e6);
        assert_eq!(p.chi, Some(3.0));
        assert_eq!(p.omega_m, SystemParams::default().omega_m);
    }

    #[test]
    fn malformed_number_names_key_and_line() {
        let err = parse_params("kappa = 1e6\ngamma_a = 1.2.3\n", "cfg").unwrap_err().to_string();
        assert!(err.contains("gamma_a"), "{err}");
        assert!(err.contains("line 2"), "{err}");
    }

    #[test]
    fn wrong_type_names_key() {
        let err = parse_params("delta = \"fast\"\n", "cfg").unwrap_err().to_string();
        assert!(err.contains("delta"), "{err}");
        assert!(err.contains("line 1"), "{err}");
    }

    #[test]
    fn unknown_key_is_rejected() {
        let err = parse_params("kapa = 1.0\n", "cfg").unwrap_err().to_string();
        assert!(err.contains("kapa"), "{err}");
    }

    #[test]
    fn relative_flags_use_resolved_units() {
        let flags = ParamFlags { kappa: Some(2.0), coupling_g: Some(50.0), delta: Some(-1.0), ..Default::default() };
        let p = flags.resolve().unwrap();
        assert_eq!(p.coupling_g, 100.0);
        assert_eq!(p.delta, -p.omega_m);
    }
}
