use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("config field `{field}`: {message}")]
    Field { field: String, message: String },

    #[error("{context}: {source}")]
    Core {
        context: String,
        #[source]
        source: symcost_core::Error,
    },

    #[error("cannot access {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("malformed report table: {0}")]
    Table(String),
}

impl CliError {
    pub fn field(field: impl Into<String>, message: impl ToString) -> Self {
        CliError::Field {
            field: field.into(),
            message: message.to_string(),
        }
    }

    pub fn core(context: impl Into<String>, source: symcost_core::Error) -> Self {
        CliError::Core {
            context: context.into(),
            source,
        }
    }

    /// 2 for configuration problems, 4 when a dimension cap is hit, 3 for
    /// any other numerical failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Syntax { .. } | CliError::Field { .. } | CliError::Io { .. } => 2,
            CliError::Core {
                source: symcost_core::Error::DimensionCapExceeded { .. },
                ..
            } => 4,
            CliError::Core { .. } | CliError::Table(_) => 3,
        }
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Syntax {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
