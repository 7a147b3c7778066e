use std::fmt::Write;

/// Self-contained horizontal bar chart, one bar per `(label, value)`.
pub fn bar_chart(title: &str, unit: &str, bars: &[(String, f64)]) -> String {
    let (row, label_w, plot_w, top) = (18.0, 70.0, 420.0, 30.0);
    let height = top + row * bars.len() as f64 + 10.0;
    let width = label_w + plot_w + 80.0;
    let max = bars
        .iter()
        .map(|(_, v)| *v)
        .fold(0.0_f64, f64::max)
        .max(f64::MIN_POSITIVE);
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" font-family="sans-serif" font-size="11">"#
    );
    let _ = writeln!(
        s,
        r#"<text x="4" y="16" font-size="13">{}</text>"#,
        escape(title)
    );
    for (i, (label, v)) in bars.iter().enumerate() {
        let y = top + row * i as f64;
        let w = (v.max(0.0) / max) * plot_w;
        let _ = writeln!(
            s,
            r##"<text x="{}" y="{}" text-anchor="end">{}</text><rect x="{label_w}" y="{y}" width="{w:.1}" height="{}" fill="#4a7ab5"/><text x="{}" y="{}">{v:.1} {}</text>"##,
            label_w - 4.0,
            y + 12.0,
            escape(label),
            row - 4.0,
            label_w + w + 4.0,
            y + 12.0,
            escape(unit)
        );
    }
    s.push_str("</svg>\n");
    s
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}
