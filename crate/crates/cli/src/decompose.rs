use std::path::Path;

use anyhow::{Context, Result};
use serde_json::json;
use unfold_core::ops::CMatrix;
use unfold_core::phase_space::{bloch_messiah, SymplecticMatrix};

use crate::matrix::{format_matrix, read_matrix};
use crate::output::{sci, Bundle};

fn rows(m: &CMatrix) -> Vec<Vec<[f64; 2]>> {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect())
        .collect()
}

/// Bloch–Messiah factors of the symplectic matrix in `path`, given in the
/// `(a, a^dagger)` basis. Files: `s1.txt`, `s2.txt` (matrix format),
/// `report.txt`, `report.json`.
pub fn decompose(path: &Path) -> Result<Bundle> {
    let m = read_matrix(path).with_context(|| format!("reading {}", path.display()))?;
    let s = SymplecticMatrix::new(m).with_context(|| format!("{} is rejected", path.display()))?;
    let f = bloch_messiah(&s)?;

    let mut text = format!(
        "modes      {}\nr_list     {:?}\nresidual   {}\n\nS1\n{}\nS2\n{}",
        s.modes(),
        f.r_list,
        sci(f.residual),
        format_matrix(f.s1.matrix()),
        format_matrix(f.s2.matrix()),
    );
    text.truncate(text.trim_end().len());
    text.push('\n');

    let mut bundle = Bundle::default();
    bundle.add("s1.txt", format_matrix(f.s1.matrix()));
    bundle.add("s2.txt", format_matrix(f.s2.matrix()));
    bundle.add("report.txt", text);
    bundle.add_json(
        "report.json",
        &json!({
            "modes": s.modes(),
            "r_list": f.r_list,
            "residual": f.residual,
            "s1": rows(f.s1.matrix()),
            "s2": rows(f.s2.matrix()),
        }),
    )?;
    Ok(bundle)
}
