//! Named reference configurations.

use crate::config::{validate_configuration, ConfigFile, Configuration, FileKind};

fn build(raw: ConfigFile) -> Configuration {
    validate_configuration(&raw).expect("fixture is valid")
}

/// delta = 1, special point, a single blow-up.
pub fn t1() -> Configuration {
    build(ConfigFile::new(
        1,
        Some(FileKind::Special),
        1,
        &[],
        1,
        1,
        None,
    ))
}

/// delta = 1, special point, cusp-shaped chain: p2 free, p3 satellite of p1.
pub fn cusp() -> Configuration {
    build(ConfigFile::new(
        1,
        Some(FileKind::Special),
        3,
        &[(3, 1)],
        1,
        1,
        None,
    ))
}

/// delta = 1, general point, five free points with p2 on the fiber.
pub fn fib5() -> Configuration {
    build(ConfigFile::new(
        1,
        Some(FileKind::General),
        5,
        &[],
        2,
        0,
        None,
    ))
}

/// The first four points of [`fib5`]; its criterion is attained with equality.
pub fn fib4() -> Configuration {
    fib5().truncate(4)
}

/// delta = 1, general point, two free points off the fiber (non-special).
pub fn free2() -> Configuration {
    build(ConfigFile::new(
        1,
        Some(FileKind::General),
        2,
        &[],
        1,
        0,
        Some(2),
    ))
}

/// delta = 2, general point, maximal contact values {15, 51, 262, 786},
/// `M_1` through `p_1, p_2, p_3`.
pub fn ex12() -> Configuration {
    build(ConfigFile::new(
        2,
        Some(FileKind::General),
        12,
        &[(5, 3), (6, 3), (7, 5), (11, 9), (12, 9)],
        1,
        0,
        Some(3),
    ))
}

pub fn all() -> Vec<Configuration> {
    vec![t1(), cusp(), fib5(), fib4(), free2(), ex12()]
}

pub fn by_name(name: &str) -> Option<Configuration> {
    match name.to_ascii_lowercase().as_str() {
        "t1" => Some(t1()),
        "cusp" => Some(cusp()),
        "fib5" => Some(fib5()),
        "fib4" => Some(fib4()),
        "free2" => Some(free2()),
        "ex12" => Some(ex12()),
        _ => None,
    }
}
