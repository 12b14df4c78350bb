use fermiorder::fock::random_state;
use fermiorder::{states, BipartitionSpec, FockVector, ModeOrdering, ModeSystem};

use crate::{StateArgs, UsageError};

pub struct LoadedState {
    pub vector: FockVector,
    /// Human-readable provenance, echoed in reports.
    pub source: String,
}

/// `"a,b|c,d"` -> system with kept block `a, b`.
fn system_from_labels(text: &str) -> Result<ModeSystem, UsageError> {
    let (a, c) = text
        .split_once('|')
        .ok_or_else(|| UsageError(format!("--labels needs `|` between the blocks: `{text}`")))?;
    let split = |s: &str| -> Vec<String> {
        s.split(',').map(str::trim).filter(|l| !l.is_empty()).map(String::from).collect()
    };
    let a = split(a);
    let labels = [a.clone(), split(c)].concat();
    Ok(ModeSystem::new(&labels, a.len())?)
}

fn declared_system(args: &StateArgs) -> Result<Option<ModeSystem>, UsageError> {
    if let Some(text) = &args.labels {
        return system_from_labels(text).map(Some);
    }
    if let Some(m) = args.modes {
        return Ok(Some(ModeSystem::standard(m.n, m.m)?));
    }
    Ok(None)
}

pub fn load_state(args: &StateArgs, seed: u64) -> Result<LoadedState, UsageError> {
    if let Some(name) = &args.named {
        let vector = states::named(name).ok_or_else(|| UsageError(format!("unknown state `{name}`")))??;
        return Ok(LoadedState {
            vector,
            source: format!("named {name}"),
        });
    }
    if let Some(text) = &args.state {
        let system = declared_system(args)?
            .ok_or_else(|| UsageError("--state needs --labels or --modes".into()))?;
        let vector = FockVector::from_superposition(&system, text)?;
        return Ok(LoadedState {
            vector,
            source: format!("inline {text}"),
        });
    }
    if let Some(path) = &args.state_file {
        let text = std::fs::read_to_string(path)
            .map_err(|e| UsageError(format!("{}: {e}", path.display())))?;
        let probe = FockVector::from_json(&text, 0)?;
        let labels = probe.system().labels().to_vec();
        let a_count = match declared_system(args)? {
            Some(sys) if sys.labels() == labels.as_slice() => sys.a_count(),
            Some(sys) if args.labels.is_some() => {
                return Err(UsageError(format!(
                    "--labels {:?} do not match the file's modes {:?}",
                    sys.labels(),
                    labels
                )))
            }
            Some(sys) if sys.n_modes() == labels.len() => sys.a_count(),
            Some(sys) => {
                return Err(UsageError(format!(
                    "--modes gives {} modes, the file has {}",
                    sys.n_modes(),
                    labels.len()
                )))
            }
            None => labels.len() / 2,
        };
        let vector = FockVector::from_json(&text, a_count)?;
        return Ok(LoadedState {
            vector,
            source: format!("file {}", path.display()),
        });
    }
    let system = match declared_system(args)? {
        Some(s) => s,
        None => ModeSystem::standard(2, 2)?,
    };
    let sector = args.sector.into();
    Ok(LoadedState {
        vector: random_state(&system, sector, seed),
        source: format!("random {sector:?} seed {seed}").to_lowercase(),
    })
}

pub fn bipartition(args: &StateArgs, system: &ModeSystem) -> Result<BipartitionSpec, UsageError> {
    Ok(match &args.kept {
        Some(kept) => BipartitionSpec::keeping(system, kept)?,
        None => BipartitionSpec::from_system(system)?,
    })
}

pub fn ordering(text: Option<&str>, system: &ModeSystem) -> Result<ModeOrdering, UsageError> {
    Ok(match text {
        Some(t) => ModeOrdering::parse(system, t)?,
        None => ModeOrdering::identity(system),
    })
}
