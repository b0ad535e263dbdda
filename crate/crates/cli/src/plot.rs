use std::fmt::Write as _;

use cutcouple_core::guarantee::GrowthRow;

const W: f64 = 640.0;
const H: f64 = 420.0;
const PAD: f64 = 50.0;

/// Scatter of `tg_size` against `log₂ u0_size` as a standalone SVG.
pub fn growth_svg(rows: &[GrowthRow]) -> String {
    let max_x = rows
        .iter()
        .map(|r| (r.u0_size as f64).log2())
        .fold(1.0, f64::max);
    let max_y = rows.iter().map(|r| r.tg_size).max().unwrap_or(1).max(1) as f64;
    let px = |x: f64| PAD + x / max_x * (W - 2.0 * PAD);
    let py = |y: f64| H - PAD - y / max_y * (H - 2.0 * PAD);

    let mut s = String::new();
    writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}">"#
    )
    .unwrap();
    writeln!(s, r#"<rect width="{W}" height="{H}" fill="white"/>"#).unwrap();
    writeln!(
        s,
        r#"<path d="M{PAD} {t} V{b} H{r}" stroke="black" fill="none"/>"#,
        t = PAD,
        b = H - PAD,
        r = W - PAD
    )
    .unwrap();
    for e in 0..=max_x as usize {
        let x = px(e as f64);
        writeln!(
            s,
            r#"<text x="{x:.1}" y="{y}" font-size="11" text-anchor="middle">2^{e}</text>"#,
            y = H - PAD + 16.0
        )
        .unwrap();
    }
    writeln!(
        s,
        r#"<text x="{x}" y="{y}" font-size="12" text-anchor="middle">|U0|</text>"#,
        x = W / 2.0,
        y = H - 12.0
    )
    .unwrap();
    writeln!(
        s,
        r#"<text x="14" y="{y}" font-size="12" transform="rotate(-90 14 {y})" text-anchor="middle">|T_g|</text>"#,
        y = H / 2.0
    )
    .unwrap();
    writeln!(
        s,
        r#"<text x="{x}" y="{y}" font-size="11" text-anchor="end">{max_y}</text>"#,
        x = PAD - 4.0,
        y = PAD + 4.0
    )
    .unwrap();
    for r in rows {
        writeln!(
            s,
            r##"<circle cx="{:.1}" cy="{:.1}" r="3" fill="#1f77b4" fill-opacity="0.5"/>"##,
            px((r.u0_size as f64).log2()),
            py(r.tg_size as f64)
        )
        .unwrap();
    }
    s.push_str("</svg>\n");
    s
}
