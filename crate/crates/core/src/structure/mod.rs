//! Anti-concentration structure of vectors: compressibility, least common
//! denominators, real-imaginary correlation, delocalization and Lévy
//! concentration.

mod lcd;
mod levy;
mod report;
mod vectors;

pub use lcd::{
    is_complex_witness, is_real_witness, lattice_distance, lcd_complex, lcd_real, LcdBracket,
    LcdQuery, LCD_COMPLEX_MAX_N, UNIT_TOL, WITNESS_MARGIN,
};
pub use levy::{
    draw_sums, exact_equals, levy_exact, levy_from_samples, levy_mc, LevyEstimate, LevyMethod,
    LevyMode, BOUNDARY_SLACK, ENUMERATION_CAP, MIN_MC_SAMPLES,
};
pub use report::{parse_vector_csv, structure_report, vector_hash, ReportOptions, StructureReport};
pub use vectors::{
    complexify, compressibility, delocalized_check, hadamard, real_imag_correlation,
    sparsity_count, CVector, CompressibilityReport, CORRELATION_CLAMP,
};
