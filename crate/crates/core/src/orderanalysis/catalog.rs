//! Built-in interpretations used as examples and test corpus.

use crate::interp::Interpretation;

/// `(name, dim, domain, less)` source of every catalog entry.
const ENTRIES: &[(&str, usize, &str, &str)] = &[
    ("omega", 1, "0 = 0", "x1 < y1"),
    ("finite5", 1, "x1 < 5", "x1 < y1"),
    (
        "omega_plus_omega_star",
        1,
        "0 = 0",
        "x1 == 0 mod 2 & y1 == 1 mod 2 \
         | x1 == 0 mod 2 & y1 == 0 mod 2 & x1 < y1 \
         | x1 == 1 mod 2 & y1 == 1 mod 2 & y1 < x1",
    ),
    (
        "omega_times_k",
        1,
        "0 = 0",
        "x1 == 0 mod 3 & y1 == 1 mod 3 | x1 == 0 mod 3 & y1 == 2 mod 3 | x1 == 1 mod 3 & y1 == 2 mod 3 \
         | x1 == y1 mod 3 & x1 < y1",
    ),
    ("lex_omega2", 2, "0 = 0", "x1 < y1 | x1 = y1 & x2 < y2"),
    (
        "growing_boxes",
        2,
        "0 = 0",
        "x1 < y1 | x1 = y1 & (\
           x2 <= x1 & y2 <= x1 & x2 < y2 \
         | x2 <= x1 & x1 < y2 \
         | x1 < x2 & x1 < y2 & (\
             x2 == x1 mod 2 & !(y2 == x1 mod 2) \
           | x2 == x1 mod 2 & y2 == x1 mod 2 & y2 < x2 \
           | !(x2 == x1 mod 2) & !(y2 == x1 mod 2) & x2 < y2))",
    ),
    ("reverse_omega", 1, "0 = 0", "y1 < x1"),
    (
        "zeta",
        1,
        "0 = 0",
        "x1 == 1 mod 2 & y1 == 0 mod 2 \
         | x1 == 1 mod 2 & y1 == 1 mod 2 & y1 < x1 \
         | x1 == 0 mod 2 & y1 == 0 mod 2 & x1 < y1",
    ),
];

/// Names of all catalog entries.
pub fn names() -> Vec<&'static str> {
    ENTRIES.iter().map(|e| e.0).collect()
}

/// Every catalog interpretation.
pub fn catalog() -> Vec<Interpretation> {
    ENTRIES.iter().map(build).collect()
}

/// Looks up one entry by name.
pub fn get(name: &str) -> Option<Interpretation> {
    ENTRIES.iter().find(|e| e.0 == name).map(build)
}

fn build(e: &(&str, usize, &str, &str)) -> Interpretation {
    Interpretation::from_strings(e.0, e.1, e.2, e.3, None).expect("catalog entries are well formed")
}

/// An order that is not irreflexive, for negative tests.
pub fn broken() -> Interpretation {
    Interpretation::from_strings("broken", 1, "0 = 0", "x1 = y1", None).expect("well formed")
}
