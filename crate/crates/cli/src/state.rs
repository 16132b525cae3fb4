//! JSON state files.

use std::path::Path;

use athermal::majorization::format_sig17;
use athermal::thermo::{to_quasiclassical, DensityMatrix};
use athermal::{AthermalityState, GibbsContext, ProbabilityVector};
use serde::Deserialize;

use crate::CliError;

/// On-disk description of a system and (optionally) its state.
///
/// Without `populations` or `density_matrix` the state is the Gibbs state itself.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateFile {
    pub energies: Vec<f64>,
    pub beta: f64,
    #[serde(default)]
    pub populations: Option<Vec<f64>>,
    #[serde(default)]
    pub density_matrix: Option<Vec<Vec<[f64; 2]>>>,
}

/// A parsed state file: the sorted system and the quasi-classical state on it.
#[derive(Debug, Clone, PartialEq)]
pub struct LoadedState {
    pub system: GibbsContext,
    pub state: AthermalityState,
}

impl StateFile {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Parse(e.to_string()))
    }

    pub fn read(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn system(&self) -> Result<GibbsContext, CliError> {
        Ok(GibbsContext::new(self.energies.clone(), self.beta)?)
    }

    pub fn load(&self) -> Result<LoadedState, CliError> {
        let system = self.system()?;
        let n = system.dim();
        let state = match (&self.populations, &self.density_matrix) {
            (Some(_), Some(_)) => {
                return Err(CliError::Input(
                    "give either populations or density_matrix, not both".into(),
                ))
            }
            (Some(p), None) => {
                if p.len() != n {
                    return Err(CliError::Input(format!("{} populations for {n} energies", p.len())));
                }
                let r = ProbabilityVector::new(system.sort_paired(p)?)?;
                AthermalityState::new(r, system.gibbs())?
            }
            (None, Some(rows)) => {
                if rows.len() != n {
                    return Err(CliError::Input(format!("{}x{} density matrix for {n} energies", rows.len(), rows.len())));
                }
                to_quasiclassical(&DensityMatrix::from_rows(rows)?, &system)?
            }
            (None, None) => AthermalityState::free(system.gibbs())?,
        };
        Ok(LoadedState { system, state })
    }
}

/// Serializes a state on `system` as a state file, numbers with 17 significant digits.
pub fn write_state_file(system: &GibbsContext, state: &AthermalityState) -> String {
    let list = |v: &[f64]| v.iter().map(|x| format_sig17(*x)).collect::<Vec<_>>().join(", ");
    format!(
        "{{\"energies\": [{}], \"beta\": {}, \"populations\": [{}]}}\n",
        list(system.energies()),
        format_sig17(system.beta()),
        list(state.r().as_slice())
    )
}
