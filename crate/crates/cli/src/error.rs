use thiserror::Error;

pub type Result<T, E = CliError> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error in `{field}`: {message}")]
    Config { field: String, message: String },

    #[error("at {point}: {source}")]
    Numerical {
        point: String,
        #[source]
        source: fas_outage::Error,
    },

    #[error("{failures} of {rows} rows outside tolerance")]
    Tolerance { failures: usize, rows: usize },

    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn config(field: impl Into<String>, message: impl Into<String>) -> Self {
        CliError::Config {
            field: field.into(),
            message: message.into(),
        }
    }

    /// Attach a grid point to a library error. Bad-input errors stay config
    /// errors; only numerical failures become [`CliError::Numerical`].
    pub fn at(point: impl Into<String>, err: fas_outage::Error) -> Self {
        match err {
            fas_outage::Error::InvalidParameter { field, message } => CliError::Config {
                field: field.to_string(),
                message: format!("{message} (at {})", point.into()),
            },
            fas_outage::Error::Domain(message) => CliError::Config {
                field: "params".into(),
                message: format!("{message} (at {})", point.into()),
            },
            source => CliError::Numerical {
                point: point.into(),
                source,
            },
        }
    }

    /// 2 config, 3 numerical, 4 tolerance, 1 I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config { .. } => 2,
            CliError::Numerical { .. } => 3,
            CliError::Tolerance { .. } => 4,
            CliError::Io { .. } => 1,
        }
    }
}
