//! Region CSV and SVG documents.
//!
//! CSV layout:
//!
//! ```text
//! kind,resolution
//! capacity,64
//! r1,r2,cert
//! 0,1,u=1*[1/0][0.5/0.5]|d=1*[0.5/0.5]
//! ```
//!
//! A certificate has an uplink side `u=` and a relay side `d=`, separated by
//! `|`, either of which may be absent. Each side lists weighted components
//! joined by `+`; pmf entries are joined by `/`. Numbers use Rust's
//! shortest round-trip formatting, so parsing restores them exactly.

use super::{CertifiedVertex, RatePoint, RegionError, RegionKind, RegionPolyline, RelayMix, TimeShare, TimeShareComponent};
use crate::prob::Pmf;
use std::fmt::Write;

fn pmf_text(p: &Pmf) -> String {
    let parts: Vec<String> = p.probs().iter().map(|v| v.to_string()).collect();
    format!("[{}]", parts.join("/"))
}

fn cert_text(v: &CertifiedVertex) -> String {
    let mut sides = Vec::new();
    if let Some(t) = &v.uplink {
        let comps: Vec<String> = t
            .components
            .iter()
            .map(|c| format!("{}*{}{}", c.weight, pmf_text(&c.p1), pmf_text(&c.p2)))
            .collect();
        sides.push(format!("u={}", comps.join("+")));
    }
    if let Some(m) = &v.downlink {
        let comps: Vec<String> = m.components.iter().map(|(w, p)| format!("{w}*{}", pmf_text(p))).collect();
        sides.push(format!("d={}", comps.join("+")));
    }
    sides.join("|")
}

pub fn region_csv(region: &RegionPolyline) -> String {
    let mut out = format!("kind,resolution\n{},{}\nr1,r2,cert\n", region.kind.as_str(), region.resolution);
    for v in &region.vertices {
        let _ = writeln!(out, "{},{},{}", v.point.r1, v.point.r2, cert_text(v));
    }
    out
}

fn csv_err(line: usize, message: impl Into<String>) -> RegionError {
    RegionError::Csv {
        line,
        message: message.into(),
    }
}

fn parse_num(s: &str, line: usize) -> Result<f64, RegionError> {
    s.trim().parse().map_err(|_| csv_err(line, format!("'{s}' is not a number")))
}

/// Splits `w*[a/b][c/d]` into the weight and the bracketed pmfs.
fn parse_component(s: &str, line: usize) -> Result<(f64, Vec<Pmf>), RegionError> {
    let (w, rest) = s.split_once('*').ok_or_else(|| csv_err(line, format!("component '{s}' has no weight")))?;
    let weight = parse_num(w, line)?;
    let mut pmfs = Vec::new();
    let mut rest = rest.trim();
    while !rest.is_empty() {
        let body = rest
            .strip_prefix('[')
            .and_then(|r| r.split_once(']'))
            .ok_or_else(|| csv_err(line, format!("malformed pmf in '{s}'")))?;
        let probs = body.0.split('/').map(|v| parse_num(v, line)).collect::<Result<Vec<_>, _>>()?;
        pmfs.push(Pmf::new(probs).map_err(|e| csv_err(line, e.to_string()))?);
        rest = body.1.trim();
    }
    Ok((weight, pmfs))
}

fn parse_cert(text: &str, point: RatePoint, line: usize) -> Result<CertifiedVertex, RegionError> {
    let mut v = CertifiedVertex {
        point,
        uplink: None,
        downlink: None,
    };
    for side in text.split('|').map(str::trim).filter(|s| !s.is_empty()) {
        if let Some(body) = side.strip_prefix("u=") {
            let mut components = Vec::new();
            for c in body.split('+') {
                match parse_component(c, line)? {
                    (weight, pmfs) if pmfs.len() == 2 => {
                        let mut it = pmfs.into_iter();
                        let (p1, p2) = (it.next().unwrap(), it.next().unwrap());
                        components.push(TimeShareComponent { weight, p1, p2 });
                    }
                    _ => return Err(csv_err(line, "uplink components need two pmfs")),
                }
            }
            v.uplink = Some(TimeShare { components });
        } else if let Some(body) = side.strip_prefix("d=") {
            let mut components = Vec::new();
            for c in body.split('+') {
                match parse_component(c, line)? {
                    (weight, pmfs) if pmfs.len() == 1 => components.push((weight, pmfs.into_iter().next().unwrap())),
                    _ => return Err(csv_err(line, "relay components need one pmf")),
                }
            }
            v.downlink = Some(RelayMix { components });
        } else {
            return Err(csv_err(line, format!("unknown certificate side '{side}'")));
        }
    }
    Ok(v)
}

/// Reads a document written by [`region_csv`]. `max_gap` is not stored and
/// comes back as `None`.
pub fn parse_region_csv(text: &str) -> Result<RegionPolyline, RegionError> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
    let mut next = |want: &str| lines.next().ok_or_else(|| csv_err(0, format!("missing {want}")));
    let (n, l) = next("header")?;
    if l.trim() != "kind,resolution" {
        return Err(csv_err(n, "expected 'kind,resolution'"));
    }
    let (n, l) = next("kind line")?;
    let (kind, res) = l.split_once(',').ok_or_else(|| csv_err(n, "expected 'kind,resolution' values"))?;
    let kind = RegionKind::parse(kind.trim()).ok_or_else(|| csv_err(n, format!("unknown kind '{kind}'")))?;
    let resolution = res.trim().parse().map_err(|_| csv_err(n, format!("bad resolution '{res}'")))?;
    let (n, l) = next("column header")?;
    if l.trim() != "r1,r2,cert" {
        return Err(csv_err(n, "expected 'r1,r2,cert'"));
    }
    let mut vertices = Vec::new();
    for (n, l) in lines.filter(|(_, l)| !l.trim().is_empty()) {
        let mut fields = l.splitn(3, ',');
        let r1 = parse_num(fields.next().unwrap_or(""), n)?;
        let r2 = parse_num(fields.next().ok_or_else(|| csv_err(n, "missing r2"))?, n)?;
        let point = RatePoint::try_new(r1, r2).map_err(|e| csv_err(n, e.to_string()))?;
        vertices.push(parse_cert(fields.next().unwrap_or(""), point, n)?);
    }
    Ok(RegionPolyline {
        kind,
        vertices,
        resolution,
        max_gap: None,
    })
}

const COLORS: [&str; 5] = ["#4c72b0", "#dd8452", "#55a868", "#c44e52", "#8172b3"];

/// Plots each labelled region as a filled polygon; vertices of the last
/// region are marked and annotated.
pub fn regions_svg(layers: &[(&str, &RegionPolyline)]) -> String {
    let (w, h, m) = (520.0, 520.0, 60.0);
    let xmax = layers.iter().map(|(_, r)| r.max_r1()).fold(0.0, f64::max).max(1e-9) * 1.05;
    let ymax = layers.iter().map(|(_, r)| r.max_r2()).fold(0.0, f64::max).max(1e-9) * 1.05;
    let sx = |x: f64| m + x / xmax * (w - 2.0 * m);
    let sy = |y: f64| h - m - y / ymax * (h - 2.0 * m);

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}" font-family="sans-serif" font-size="11">"#
    );
    let _ = writeln!(s, r#"<rect width="{w}" height="{h}" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<line x1="{m}" y1="{b}" x2="{r}" y2="{b}" stroke="black"/><line x1="{m}" y1="{b}" x2="{m}" y2="{m}" stroke="black"/>"#,
        b = h - m,
        r = w - m
    );
    for k in 0..=4 {
        let (fx, fy) = (xmax * k as f64 / 4.0, ymax * k as f64 / 4.0);
        let _ = writeln!(
            s,
            r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">{fx:.3}</text><text x="{:.1}" y="{:.1}" text-anchor="end">{fy:.3}</text>"#,
            sx(fx),
            h - m + 16.0,
            m - 6.0,
            sy(fy) + 4.0
        );
    }
    let _ = writeln!(s, r#"<text x="{}" y="{}" text-anchor="middle">R1 (bits/use)</text>"#, w / 2.0, h - 16.0);
    let _ = writeln!(
        s,
        r#"<text x="16" y="{}" text-anchor="middle" transform="rotate(-90 16 {})">R2 (bits/use)</text>"#,
        h / 2.0,
        h / 2.0
    );

    for (i, (label, region)) in layers.iter().enumerate() {
        let color = COLORS[i % COLORS.len()];
        let pts = region.points();
        let mut poly = vec![RatePoint::ORIGIN];
        if let Some(first) = pts.first() {
            poly.push(RatePoint::new(0.0, first.r2));
        }
        poly.extend(pts.iter().copied());
        if let Some(last) = pts.last() {
            poly.push(RatePoint::new(last.r1, 0.0));
        }
        let attr: Vec<String> = poly.iter().map(|p| format!("{:.2},{:.2}", sx(p.r1), sy(p.r2))).collect();
        let _ = writeln!(
            s,
            r#"<polygon points="{}" fill="{color}" fill-opacity="0.25" stroke="{color}" stroke-width="1.5"/>"#,
            attr.join(" ")
        );
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{}" fill="{color}">{label}</text>"#,
            w - m - 110.0,
            m + 14.0 * i as f64
        );
    }
    if let Some((_, region)) = layers.last() {
        for p in region.points() {
            let _ = writeln!(
                s,
                r#"<circle cx="{:.2}" cy="{:.2}" r="2.5" fill="black"/><text x="{:.2}" y="{:.2}" font-size="9">({:.3}, {:.3})</text>"#,
                sx(p.r1),
                sy(p.r2),
                sx(p.r1) + 4.0,
                sy(p.r2) - 4.0,
                p.r1,
                p.r2
            );
        }
    }
    s.push_str("</svg>\n");
    s
}
