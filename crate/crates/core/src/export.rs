//! CSV and SVG renderings of the geography plane. Both are byte-stable for
//! a fixed input.

use std::fmt::Write as _;
use std::io;

use serde::Serialize;

use crate::calculus::{FamilyRecipe, Registry};
use crate::geography::{GeographyError, GeographyPoint, GroupTag};
use crate::homeo::hk_applicable;

/// Column order of the geography CSV.
pub const CSV_COLUMNS: [&str; 16] = [
    "family", "k", "n", "m", "g", "e", "sigma", "c1sq", "chi_h", "group", "b1", "b2plus", "b2minus",
    "hk_ok", "symplectic", "minimal",
];

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CsvRow {
    pub family: &'static str,
    pub k: u8,
    pub n: u32,
    pub m: Option<u32>,
    pub g: Option<u32>,
    pub e: i64,
    pub sigma: i64,
    pub c1sq: i64,
    pub chi_h: i64,
    pub group: &'static str,
    pub b1: u32,
    pub b2plus: i64,
    pub b2minus: i64,
    /// `true`/`false` for `Z_p ⊕ Z_p` rows, `na` otherwise.
    pub hk_ok: &'static str,
    pub symplectic: bool,
    pub minimal: bool,
}

/// Conjunction of the registry's minimality flags over the recipe's blocks.
pub fn recipe_minimal(registry: &Registry, r: &FamilyRecipe) -> bool {
    r.blocks()
        .iter()
        .all(|b| registry.entry(b.key()).is_some_and(|e| e.flags.minimal))
}

pub fn csv_row(registry: &Registry, pt: &GeographyPoint) -> Result<CsvRow, GeographyError> {
    let cn = pt.char_numbers();
    let betti = pt.betti()?;
    let hk_ok = match pt.group {
        GroupTag::ZpxZp => {
            if hk_applicable(betti.b2(), cn.sigma, false, 1) {
                "true"
            } else {
                "false"
            }
        }
        _ => "na",
    };
    Ok(CsvRow {
        family: pt.family.family_label(),
        k: pt.family.k(),
        n: pt.family.n(),
        m: pt.family.m(),
        g: pt.family.g(),
        e: cn.e,
        sigma: cn.sigma,
        c1sq: cn.c1sq,
        chi_h: cn.chi_h,
        group: pt.group.label(),
        b1: betti.b1,
        b2plus: betti.b2_plus,
        b2minus: betti.b2_minus,
        hk_ok,
        symplectic: true,
        minimal: recipe_minimal(registry, &pt.family),
    })
}

/// Writes the header and one row per point, in the given order.
pub fn write_csv<W: io::Write>(registry: &Registry, points: &[GeographyPoint], out: W) -> io::Result<()> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    w.write_record(CSV_COLUMNS)?;
    for pt in points {
        let row = csv_row(registry, pt).map_err(|e| io::Error::new(io::ErrorKind::InvalidData, e))?;
        w.serialize(row)?;
    }
    w.flush()
}

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 480.0;
const MARGIN: f64 = 48.0;

fn group_colour(g: GroupTag) -> &'static str {
    match g {
        GroupTag::ZxZ => "#1f77b4",
        GroupTag::ZxZp => "#ff7f0e",
        GroupTag::ZqxZp => "#2ca02c",
        GroupTag::ZpxZp => "#d62728",
    }
}

/// Scatter plot with `χ_h` horizontal and `c1²` vertical, plus the reference
/// lines `c = 8χ` and `c = 12χ`.
pub fn render_svg(points: &[GeographyPoint]) -> String {
    let chi_max = points.iter().map(|p| p.chi).max().unwrap_or(1).max(1) as f64;
    let c_max = (12.0 * chi_max).max(1.0);
    let x = |chi: f64| MARGIN + chi / chi_max * (WIDTH - 2.0 * MARGIN);
    let y = |c: f64| HEIGHT - MARGIN - c / c_max * (HEIGHT - 2.0 * MARGIN);

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH:.0}" height="{HEIGHT:.0}" viewBox="0 0 {WIDTH:.0} {HEIGHT:.0}">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="black"/>"#,
        x(0.0),
        y(0.0),
        x(chi_max),
        y(0.0)
    );
    let _ = writeln!(
        s,
        r#"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="black"/>"#,
        x(0.0),
        y(0.0),
        x(0.0),
        y(c_max)
    );
    for (slope, label) in [(8.0, "c = 8chi"), (12.0, "c = 12chi")] {
        let _ = writeln!(
            s,
            r#"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="gray" stroke-dasharray="4 4"/>"#,
            x(0.0),
            y(0.0),
            x(c_max / slope),
            y(c_max)
        );
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" font-size="10" fill="gray">{label}</text>"#,
            x(c_max / slope) + 4.0,
            y(c_max) + 12.0
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{:.2}" y="{:.2}" font-size="12">chi_h</text>"#,
        WIDTH / 2.0,
        HEIGHT - 12.0
    );
    let _ = writeln!(
        s,
        r#"<text x="12" y="{:.2}" font-size="12" transform="rotate(-90 12 {:.2})">c1^2</text>"#,
        HEIGHT / 2.0,
        HEIGHT / 2.0
    );
    for p in points {
        let _ = writeln!(
            s,
            r#"<circle cx="{:.2}" cy="{:.2}" r="2.5" fill="{}"><title>({}, {}) {} k={}</title></circle>"#,
            x(p.chi as f64),
            y(p.c as f64),
            group_colour(p.group),
            p.c,
            p.chi,
            p.group.label(),
            p.family.k()
        );
    }
    s.push_str("</svg>\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geography::enumerate_points;

    #[test]
    fn header_and_first_row() {
        let reg = Registry::builtin();
        let pts = enumerate_points(1, 1, 0);
        let mut buf = Vec::new();
        write_csv(&reg, &pts, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), CSV_COLUMNS.join(","));
        assert!(text.contains("A_n,1,1,,,5,-1,7,1,Z+Z,2,3,4,na,true,true"));
        assert!(text.contains("A_n,1,1,,,5,-1,7,1,Z_p+Z_p,0,1,2,false,true,true"));
    }

    #[test]
    fn svg_is_deterministic_and_has_reference_lines() {
        let pts = enumerate_points(2, 2, 1);
        let a = render_svg(&pts);
        assert_eq!(a, render_svg(&pts));
        assert!(a.contains("c = 8chi") && a.contains("c = 12chi"));
        assert_eq!(a.matches("<circle").count(), pts.len());
    }
}
