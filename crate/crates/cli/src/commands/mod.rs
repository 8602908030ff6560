pub mod bench;
pub mod gate_count;
pub mod noise_study;
pub mod optimize;
pub mod propagate;
pub mod spectrum;

/// File-name-safe form of a backend label.
pub(crate) fn slug(label: &str) -> String {
    label
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '.' || c == '-' { c } else { '_' })
        .collect()
}
