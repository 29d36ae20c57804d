//! Library side of the `dclink` command: scenario runs, sweeps, frequency
//! reports and the verification suite.

pub mod freq;
pub mod run;
pub mod sweep;
pub mod verify;

use crate::error::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

/// Environment variable naming the default output root.
pub const OUT_ENV: &str = "DCLINK_OUT";

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Config { .. } | Error::Domain(_) => EXIT_CONFIG,
        Error::Singular(_) | Error::Unstable { .. } | Error::Numerical(_) | Error::Divergence { .. } | Error::Io(_) => {
            EXIT_NUMERICAL
        }
    }
}
