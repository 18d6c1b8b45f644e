//! Minimal SVG line plots with optional quartile whiskers.

use std::fmt::Write;

use crate::results::ResultRow;

#[derive(Clone, Debug, PartialEq)]
pub struct Series {
    pub name: String,
    /// `(x, y)` points, drawn in order.
    pub points: Vec<(f64, f64)>,
    /// Optional `(x, low, high)` bars.
    pub whiskers: Vec<(f64, f64, f64)>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LinePlot {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub log_y: bool,
    pub series: Vec<Series>,
}

const W: f64 = 640.0;
const H: f64 = 420.0;
const MARGIN: (f64, f64, f64, f64) = (70.0, 20.0, 40.0, 50.0); // left right top bottom
const COLORS: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"];

impl LinePlot {
    pub fn new(title: &str, x_label: &str, y_label: &str) -> Self {
        Self { title: title.into(), x_label: x_label.into(), y_label: y_label.into(), log_y: false, series: Vec::new() }
    }

    fn ty(&self, y: f64) -> f64 {
        if self.log_y {
            y.max(1e-300).log10()
        } else {
            y
        }
    }

    pub fn to_svg(&self) -> String {
        let mut xs = Vec::new();
        let mut ys = Vec::new();
        for s in &self.series {
            for &(x, y) in &s.points {
                xs.push(x);
                ys.push(self.ty(y));
            }
            for &(x, lo, hi) in &s.whiskers {
                xs.push(x);
                ys.extend([self.ty(lo), self.ty(hi)]);
            }
        }
        let finite = |v: &[f64]| {
            let it = v.iter().copied().filter(|x| x.is_finite());
            let lo = it.clone().fold(f64::INFINITY, f64::min);
            let hi = it.fold(f64::NEG_INFINITY, f64::max);
            match (lo.is_finite(), hi - lo) {
                (false, _) => (0.0, 1.0),
                (true, d) if d <= 0.0 => (lo - 0.5, hi + 0.5),
                (true, d) => (lo - 0.05 * d, hi + 0.05 * d),
            }
        };
        let (x0, x1) = finite(&xs);
        let (y0, y1) = finite(&ys);
        let (ml, mr, mt, mb) = MARGIN;
        let px = |x: f64| ml + (x - x0) / (x1 - x0) * (W - ml - mr);
        let py = |y: f64| H - mb - (y - y0) / (y1 - y0) * (H - mt - mb);

        let mut svg = String::new();
        let _ = writeln!(svg, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" font-family="sans-serif" font-size="12">"#);
        let _ = writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#);
        let _ = writeln!(svg, r#"<text x="{}" y="22" text-anchor="middle" font-size="15">{}</text>"#, W / 2.0, escape(&self.title));
        let _ = writeln!(
            svg,
            r#"<rect x="{ml}" y="{mt}" width="{}" height="{}" fill="none" stroke="black"/>"#,
            W - ml - mr,
            H - mt - mb
        );
        for k in 0..=4 {
            let fx = x0 + (x1 - x0) * k as f64 / 4.0;
            let fy = y0 + (y1 - y0) * k as f64 / 4.0;
            let ylab = if self.log_y { format!("1e{fy:.1}") } else { format!("{fy:.3}") };
            let _ = writeln!(svg, r#"<text x="{:.1}" y="{}" text-anchor="middle">{fx:.2}</text>"#, px(fx), H - mb + 18.0);
            let _ = writeln!(svg, r#"<text x="{}" y="{:.1}" text-anchor="end">{ylab}</text>"#, ml - 6.0, py(fy) + 4.0);
        }
        let _ = writeln!(svg, r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#, W / 2.0, H - 10.0, escape(&self.x_label));
        let _ = writeln!(
            svg,
            r#"<text x="16" y="{}" text-anchor="middle" transform="rotate(-90 16 {})">{}</text>"#,
            H / 2.0,
            H / 2.0,
            escape(&self.y_label)
        );
        for (i, s) in self.series.iter().enumerate() {
            let c = COLORS[i % COLORS.len()];
            let path: Vec<String> = s
                .points
                .iter()
                .filter(|(x, y)| x.is_finite() && self.ty(*y).is_finite())
                .map(|&(x, y)| format!("{:.1},{:.1}", px(x), py(self.ty(y))))
                .collect();
            if !path.is_empty() {
                let _ = writeln!(svg, r#"<polyline fill="none" stroke="{c}" stroke-width="1.5" points="{}"/>"#, path.join(" "));
                for p in &path {
                    let (x, y) = p.split_once(',').unwrap();
                    let _ = writeln!(svg, r#"<circle cx="{x}" cy="{y}" r="2.5" fill="{c}"/>"#);
                }
            }
            for &(x, lo, hi) in &s.whiskers {
                let (a, b) = (py(self.ty(lo)), py(self.ty(hi)));
                if a.is_finite() && b.is_finite() {
                    let _ = writeln!(svg, r#"<line x1="{0:.1}" y1="{a:.1}" x2="{0:.1}" y2="{b:.1}" stroke="{c}"/>"#, px(x));
                }
            }
            let ly = mt + 16.0 + 16.0 * i as f64;
            let _ = writeln!(svg, r#"<rect x="{}" y="{}" width="10" height="10" fill="{c}"/>"#, ml + 10.0, ly - 9.0);
            let _ = writeln!(svg, r#"<text x="{}" y="{ly}">{}</text>"#, ml + 26.0, escape(&s.name));
        }
        svg.push_str("</svg>\n");
        svg
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Linear-interpolated quantile of unsorted data.
pub fn quantile(values: &[f64], q: f64) -> f64 {
    let mut v: Vec<f64> = values.iter().copied().filter(|x| x.is_finite()).collect();
    if v.is_empty() {
        return f64::NAN;
    }
    v.sort_by(f64::total_cmp);
    let pos = q.clamp(0.0, 1.0) * (v.len() - 1) as f64;
    let (i, frac) = (pos.floor() as usize, pos.fract());
    if i + 1 < v.len() {
        v[i] * (1.0 - frac) + v[i + 1] * frac
    } else {
        v[i]
    }
}

pub fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

/// Groups `value(row)` by `key(row)` in ascending key order.
fn grouped<K, V>(rows: &[&ResultRow], key: K, value: V) -> Vec<(f64, Vec<f64>)>
where
    K: Fn(&ResultRow) -> Option<f64>,
    V: Fn(&ResultRow) -> Option<f64>,
{
    let mut out: Vec<(f64, Vec<f64>)> = Vec::new();
    for r in rows {
        let (Some(k), Some(v)) = (key(r), value(r)) else { continue };
        match out.iter_mut().find(|(x, _)| *x == k) {
            Some((_, vs)) => vs.push(v),
            None => out.push((k, vec![v])),
        }
    }
    out.sort_by(|a, b| a.0.total_cmp(&b.0));
    out
}

fn mean_series<K, V>(name: &str, rows: &[&ResultRow], key: K, value: V, whiskers: bool) -> Series
where
    K: Fn(&ResultRow) -> Option<f64>,
    V: Fn(&ResultRow) -> Option<f64>,
{
    let g = grouped(rows, key, value);
    Series {
        name: name.into(),
        points: g.iter().map(|(k, v)| (*k, mean(v))).collect(),
        whiskers: if whiskers { g.iter().map(|(k, v)| (*k, quantile(v, 0.25), quantile(v, 0.75))).collect() } else { vec![] },
    }
}

/// Named SVG documents summarizing a results table; empty for unknown experiments.
pub fn plots_for(rows: &[ResultRow]) -> Vec<(String, String)> {
    let select = |prefix: &str, side: Option<&str>| -> Vec<&ResultRow> {
        rows.iter()
            .filter(|r| r.experiment == prefix && side.is_none_or(|s| r.side.map(|x| x.label()) == Some(s)))
            .collect()
    };
    let m_of = |r: &ResultRow| r.m.map(|m| m as f64);
    let mut out = Vec::new();

    if rows.iter().any(|r| r.experiment == "random-dmera") {
        let mut ent = LinePlot::new("Random DMERA: entanglement entropy", "subsystem size M", "entropy (nats)");
        let mut err = LinePlot::new("Random DMERA: absolute entropy error", "subsystem size M", "|error|");
        err.log_y = true;
        for side in ["L", "R"] {
            let sel = select("random-dmera", Some(side));
            if sel.is_empty() {
                continue;
            }
            ent.series.push(mean_series(&format!("exact {side}"), &sel, m_of, |r| r.exact_entropy, true));
            ent.series.push(mean_series(&format!("VQSE {side}"), &sel, m_of, |r| r.estimated_entropy, false));
            err.series.push(mean_series(&format!("side {side}"), &sel, m_of, |r| r.abs_error.map(|e| e.max(1e-17)), true));
        }
        out.push(("random_dmera_entropy.svg".into(), ent.to_svg()));
        out.push(("random_dmera_error.svg".into(), err.to_svg()));
    }

    if rows.iter().any(|r| r.experiment == "lrtim/energy") {
        let h_of = |r: &ResultRow| r.h;
        let mut en = LinePlot::new("VQE relative energy error", "h / J", "relative error");
        en.log_y = true;
        en.series.push(mean_series("VQE", &select("lrtim/energy", None), h_of, |r| r.relative_energy_error(), false));
        let mut ent = LinePlot::new("Ground-state entanglement entropy", "h / J", "entropy (nats)");
        let sel = select("lrtim/entropy", None);
        let mut ms: Vec<usize> = sel.iter().filter_map(|r| r.m).collect();
        ms.dedup();
        for m in ms {
            let sub: Vec<&ResultRow> = sel.iter().copied().filter(|r| r.m == Some(m)).collect();
            ent.series.push(mean_series(&format!("exact M={m}"), &sub, h_of, |r| r.exact_entropy, false));
            ent.series.push(mean_series(&format!("VQSE M={m}"), &sub, h_of, |r| r.estimated_entropy, false));
        }
        out.push(("lrtim_energy_error.svg".into(), en.to_svg()));
        out.push(("lrtim_entropy.svg".into(), ent.to_svg()));
    }

    if rows.iter().any(|r| r.experiment.starts_with("noisy-lrtim/")) {
        let h_of = |r: &ResultRow| r.h;
        let mut p = LinePlot::new("Noisy VQSE entropy estimates", "h / J", "entropy (nats)");
        p.series.push(mean_series("exact", &select("noisy-lrtim/noiseless", None), h_of, |r| r.exact_entropy, false));
        for tag in ["noiseless", "raw", "mitigated"] {
            let sel = select(&format!("noisy-lrtim/{tag}"), None);
            p.series.push(mean_series(tag, &sel, h_of, |r| r.estimated_entropy, tag != "noiseless"));
        }
        out.push(("noisy_lrtim_entropy.svg".into(), p.to_svg()));
    }
    out
}
