//! Configurations shipped with the crate.

pub const PAPER_4_1: &str = include_str!("../../presets/paper-4.1.cfg");
pub const PAPER_4_2: &str = include_str!("../../presets/paper-4.2.cfg");
pub const PAPER_4_3: &str = include_str!("../../presets/paper-4.3.cfg");
pub const DESK_4_1: &str = include_str!("../../presets/desk-4.1.cfg");
pub const DESK_4_2: &str = include_str!("../../presets/desk-4.2.cfg");
pub const DESK_4_3: &str = include_str!("../../presets/desk-4.3.cfg");
pub const HOMOGENIZE: &str = include_str!("../../presets/homogenize.cfg");

pub const ALL: [(&str, &str); 7] = [
    ("paper-4.1", PAPER_4_1),
    ("paper-4.2", PAPER_4_2),
    ("paper-4.3", PAPER_4_3),
    ("desk-4.1", DESK_4_1),
    ("desk-4.2", DESK_4_2),
    ("desk-4.3", DESK_4_3),
    ("homogenize", HOMOGENIZE),
];

/// Looks up a preset by name, with or without the `.cfg` suffix.
pub fn get(name: &str) -> Option<&'static str> {
    let name = name.strip_suffix(".cfg").unwrap_or(name);
    ALL.iter().find(|(n, _)| *n == name).map(|(_, t)| *t)
}
