//! Printed configurations, compiled into the binary.

use stabcert_core::nmset::NMSet;

use crate::error::{PipelineError, Result};

#[derive(Clone, Copy, Debug)]
pub struct Fixture {
    pub name: &'static str,
    pub text: &'static str,
}

macro_rules! fixture {
    ($id:ident, $file:literal) => {
        pub const $id: Fixture = Fixture {
            name: $file,
            text: include_str!(concat!(env!("CARGO_MANIFEST_DIR"), "/../../fixtures/", $file)),
        };
    };
}

fixture!(HYPEROVAL, "hyperoval.txt");
fixture!(TWO_FOUR_SET, "two_four_set.txt");
fixture!(SEVENZERO_SELFDUAL, "sevenzero_selfdual.txt");
fixture!(SEVENZERO_EXTENSION_POINTS, "sevenzero_extension_points.txt");
fixture!(WEIGHT3_PREFIX, "weight3_prefix.txt");
fixture!(WEIGHT2_PREFIX, "weight2_prefix.txt");
fixture!(SIX_LINE_FAMILY_1, "six_line_family_1.txt");
fixture!(SIX_LINE_FAMILY_2, "six_line_family_2.txt");
fixture!(SIX_LINE_FAMILY_3, "six_line_family_3.txt");
fixture!(SIX_LINE_FAMILY_4, "six_line_family_4.txt");
fixture!(SECUNDUM_LINES, "secundum_lines.txt");
fixture!(HYPERPLANE_LINES, "hyperplane_lines.txt");

pub const SIX_LINE_FAMILIES: [Fixture; 4] = [SIX_LINE_FAMILY_1, SIX_LINE_FAMILY_2, SIX_LINE_FAMILY_3, SIX_LINE_FAMILY_4];

pub const ALL: [Fixture; 12] = [
    HYPEROVAL,
    TWO_FOUR_SET,
    SEVENZERO_SELFDUAL,
    SEVENZERO_EXTENSION_POINTS,
    WEIGHT3_PREFIX,
    WEIGHT2_PREFIX,
    SIX_LINE_FAMILY_1,
    SIX_LINE_FAMILY_2,
    SIX_LINE_FAMILY_3,
    SIX_LINE_FAMILY_4,
    SECUNDUM_LINES,
    HYPERPLANE_LINES,
];

impl Fixture {
    pub fn parse(&self) -> Result<NMSet> {
        NMSet::parse_text(self.text).map_err(|e| PipelineError::Fixture { name: self.name, msg: e.to_string() })
    }

    /// Parses and views the lines in the first `dim` coordinates; the remaining rows
    /// of the printed matrix must vanish.
    pub fn parse_in(&self, dim: usize) -> Result<NMSet> {
        let s = self.parse()?;
        let limit = (1u32 << dim) - 1;
        let fits = s.lines().iter().flat_map(|l| l.points()).chain(s.point_vectors().iter().copied()).all(|v| v & !limit == 0);
        if !fits {
            return Err(PipelineError::Fixture { name: self.name, msg: format!("does not fit {dim} coordinates") });
        }
        let points = s.points();
        Ok(NMSet::new(dim, s.lines().to_vec(), points)?)
    }
}
