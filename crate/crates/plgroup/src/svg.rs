//! Rectangle diagrams: the domain on a top line, the range on a bottom line, one connector
//! per vertex, and the slope written inside each trapezoid.

use crate::error::{Error, Result};
use crate::plmap::PLMap;
use crate::rational::*;
use num_traits::ToPrimitive;
use std::fmt::Write;

const MARGIN: f64 = 20.0;

/// Renders f over `window`, or over the hull of its support when no window is given
/// (the unit interval for the identity).
pub fn render_svg(f: &PLMap, window: Option<(Q, Q)>, width: u32, height: u32) -> Result<String> {
    let (lo, hi) = match window {
        Some((a, b)) if a < b => (a, b),
        Some(_) => return Err(Error::BadParameters("window needs lo < hi".into())),
        None => match f.support() {
            None => (zero(), one()),
            Some((Some(a), Some(b))) => (a, b),
            Some(_) => return Err(Error::UnboundedWithoutWindow),
        },
    };
    let mut xs = vec![lo.clone()];
    xs.extend(f.breaks().into_iter().filter(|x| *x > lo && *x < hi));
    xs.push(hi.clone());
    let ys: Vec<Q> = xs.iter().map(|x| f.eval(x)).collect();
    let (ylo, yhi) = (ys[0].clone(), ys.last().unwrap().clone());

    let (w, h) = (width as f64, height as f64);
    let span = w - 2.0 * MARGIN;
    let scale = |t: &Q, a: &Q, b: &Q| MARGIN + span * ((t - a) / (b - a)).to_f64().unwrap_or(0.0);
    let (top, bottom) = (MARGIN, h - MARGIN);
    let tick = 6.0;

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}">"#
    );
    let _ = writeln!(s, r#"<g stroke="black" stroke-width="1">"#);
    let _ = writeln!(s, r#"<line class="axis domain" x1="{MARGIN:.2}" y1="{top:.2}" x2="{:.2}" y2="{top:.2}"/>"#, w - MARGIN);
    let _ = writeln!(s, r#"<line class="axis range" x1="{MARGIN:.2}" y1="{bottom:.2}" x2="{:.2}" y2="{bottom:.2}"/>"#, w - MARGIN);
    for x in &xs {
        let px = scale(x, &lo, &hi);
        let _ = writeln!(s, r#"<line class="tick domain" x1="{px:.2}" y1="{:.2}" x2="{px:.2}" y2="{:.2}"/>"#, top - tick, top + tick);
    }
    for y in &ys {
        let px = scale(y, &ylo, &yhi);
        let _ = writeln!(s, r#"<line class="tick range" x1="{px:.2}" y1="{:.2}" x2="{px:.2}" y2="{:.2}"/>"#, bottom - tick, bottom + tick);
    }
    for (x, y) in xs.iter().zip(&ys) {
        let _ = writeln!(
            s,
            r#"<line class="connector" x1="{:.2}" y1="{top:.2}" x2="{:.2}" y2="{bottom:.2}"/>"#,
            scale(x, &lo, &hi),
            scale(y, &ylo, &yhi)
        );
    }
    let _ = writeln!(s, "</g>");
    let _ = writeln!(s, r#"<g font-family="sans-serif" font-size="12" text-anchor="middle">"#);
    for i in 0..xs.len() - 1 {
        let slope = (&ys[i + 1] - &ys[i]) / (&xs[i + 1] - &xs[i]);
        let cx = (scale(&xs[i], &lo, &hi) + scale(&xs[i + 1], &lo, &hi) + scale(&ys[i], &ylo, &yhi) + scale(&ys[i + 1], &ylo, &yhi)) / 4.0;
        let _ = writeln!(s, r#"<text class="slope" x="{cx:.2}" y="{:.2}">{}</text>"#, (top + bottom) / 2.0, fmt_q(&slope));
    }
    let _ = writeln!(s, "</g>");
    s.push_str("</svg>\n");
    Ok(s)
}
