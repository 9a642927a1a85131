//! SVG frames: walls in black, taboo zones in red, movable obstacles in
//! yellow, other obstacles in grey, the robot disc in blue with its two
//! sensor cones, goals as green crosses and the travelled path as a line.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use super::{ScenarioError, ScenarioSpec};
use crate::geometry::{ConvexPolygon, Point};
use crate::planner::Configuration;
use crate::simulator::{EventKind, ExecutionTrace};

const SCALE: f64 = 60.0;
const MARGIN: f64 = 20.0;
const HEADER: f64 = 28.0;

struct Canvas<'a> {
    spec: &'a ScenarioSpec,
    out: String,
}

impl Canvas<'_> {
    fn px(&self, p: Point) -> (f64, f64) {
        let b = &self.spec.bounds;
        (MARGIN + (p.x - b.min.x) * SCALE, HEADER + MARGIN + (b.max.y - p.y) * SCALE)
    }

    fn polygon(&mut self, poly: &ConvexPolygon, style: &str) {
        let pts: Vec<String> = poly
            .vertices()
            .iter()
            .map(|v| {
                let (x, y) = self.px(*v);
                format!("{x:.2},{y:.2}")
            })
            .collect();
        let _ = writeln!(self.out, r#"<polygon points="{}" {style}/>"#, pts.join(" "));
    }

    fn cone(&mut self, pose: Configuration, half_angle: f64, range: f64, style: &str) {
        let (cx, cy) = self.px(pose.position);
        let r = range * SCALE;
        if half_angle >= PI {
            let _ = writeln!(self.out, r#"<circle cx="{cx:.2}" cy="{cy:.2}" r="{r:.2}" {style}/>"#);
            return;
        }
        let (ax, ay) = self.px(pose.position + Point::from_angle(pose.heading - half_angle) * range);
        let (bx, by) = self.px(pose.position + Point::from_angle(pose.heading + half_angle) * range);
        let large = u8::from(2.0 * half_angle > PI);
        let _ = writeln!(
            self.out,
            r#"<path d="M {cx:.2} {cy:.2} L {ax:.2} {ay:.2} A {r:.2} {r:.2} 0 {large} 0 {bx:.2} {by:.2} Z" {style}/>"#
        );
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// The world as it stands after event `index` of `trace`. Obstacle
/// footprints follow the pushes recorded up to that event. Defined for
/// every event kind; `index` past the end is clamped.
pub fn render_frame(trace: &ExecutionTrace, spec: &ScenarioSpec, index: usize) -> String {
    let upto = index.min(trace.events.len().saturating_sub(1));
    let events = if trace.events.is_empty() { &[][..] } else { &trace.events[..=upto] };
    let mut footprints: BTreeMap<&str, &ConvexPolygon> =
        spec.obstacles.iter().map(|o| (o.id.as_str(), &o.footprint)).collect();
    for e in events {
        if let Some(m) = &e.moved_obstacle {
            footprints.insert(m.id.as_str(), &m.footprint);
        }
    }
    let robot = events.last().map_or(spec.start, |e| e.robot_pose);

    let b = &spec.bounds;
    let width = 2.0 * MARGIN + b.width() * SCALE;
    let height = HEADER + 2.0 * MARGIN + b.height() * SCALE;
    let mut c = Canvas {
        spec,
        out: String::new(),
    };
    let _ = writeln!(
        c.out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0}" height="{height:.0}" viewBox="0 0 {width:.2} {height:.2}">"#
    );
    let caption = match events.last() {
        Some(e) => format!("{} | tick {} | {:?} {}", spec.name, e.tick, e.kind, e.note),
        None => format!("{} | start", spec.name),
    };
    let _ = writeln!(
        c.out,
        r#"<text x="{MARGIN}" y="18" font-family="monospace" font-size="12">{}</text>"#,
        escape(&caption)
    );
    let (x0, y0) = c.px(Point::new(b.min.x, b.max.y));
    let _ = writeln!(
        c.out,
        r##"<rect x="{x0:.2}" y="{y0:.2}" width="{:.2}" height="{:.2}" fill="#ffffff" stroke="#000000"/>"##,
        b.width() * SCALE,
        b.height() * SCALE
    );
    for z in &spec.taboo_zones {
        c.polygon(z, r##"fill="#e03030" fill-opacity="0.35" stroke="#e03030""##);
    }
    for w in &spec.static_map {
        c.polygon(w, r##"fill="#202020" stroke="#000000""##);
    }
    for o in &spec.obstacles {
        let fill = if o.movable && spec.whitelist.contains(&o.class_label) { "#f2c500" } else { "#8c8c8c" };
        let fp = footprints[o.id.as_str()];
        c.polygon(fp, &format!(r##"fill="{fill}" stroke="#000000""##));
        let (lx, ly) = c.px(fp.centroid());
        let _ = writeln!(
            c.out,
            r#"<text x="{lx:.2}" y="{ly:.2}" font-family="monospace" font-size="10" text-anchor="middle">{}</text>"#,
            escape(&o.id)
        );
    }
    for (k, g) in spec.goals.iter().enumerate() {
        let (gx, gy) = c.px(*g);
        let d = 6.0;
        let _ = writeln!(
            c.out,
            r##"<path d="M {:.2} {:.2} L {:.2} {:.2} M {:.2} {:.2} L {:.2} {:.2}" stroke="#1a9641" stroke-width="2"/>"##,
            gx - d,
            gy - d,
            gx + d,
            gy + d,
            gx - d,
            gy + d,
            gx + d,
            gy - d
        );
        let _ = writeln!(
            c.out,
            r##"<text x="{:.2}" y="{:.2}" font-family="monospace" font-size="10" fill="#1a9641">G{}</text>"##,
            gx + d,
            gy - d,
            k + 1
        );
    }
    if !events.is_empty() {
        let pts: Vec<String> = std::iter::once(spec.start)
            .chain(events.iter().map(|e| e.robot_pose))
            .map(|q| {
                let (x, y) = c.px(q.position);
                format!("{x:.2},{y:.2}")
            })
            .collect();
        let _ = writeln!(
            c.out,
            r##"<polyline points="{}" fill="none" stroke="#2c7bb6" stroke-width="1.5"/>"##,
            pts.join(" ")
        );
    }
    let s = spec.sensor;
    c.cone(robot, s.g_half_angle, s.g_range, r##"fill="#2c7bb6" fill-opacity="0.08" stroke="#2c7bb6" stroke-opacity="0.4""##);
    c.cone(robot, s.s_half_angle, s.s_range, r##"fill="#1a9641" fill-opacity="0.12" stroke="#1a9641" stroke-opacity="0.5""##);
    let (rx, ry) = c.px(robot.position);
    let _ = writeln!(
        c.out,
        r##"<circle cx="{rx:.2}" cy="{ry:.2}" r="{:.2}" fill="#2c7bb6" stroke="#000000"/>"##,
        spec.radius * SCALE
    );
    let (hx, hy) = c.px(robot.position + Point::from_angle(robot.heading) * spec.radius);
    let _ = writeln!(
        c.out,
        r##"<line x1="{rx:.2}" y1="{ry:.2}" x2="{hx:.2}" y2="{hy:.2}" stroke="#ffffff" stroke-width="2"/>"##
    );
    c.out.push_str("</svg>\n");
    c.out
}

/// Writes one frame per `Sense` event and a final frame into `dir`, named
/// `frame_0000.svg` onwards. An empty trace gives no frames.
pub fn render_frames(trace: &ExecutionTrace, spec: &ScenarioSpec, dir: impl AsRef<Path>) -> Result<Vec<PathBuf>, ScenarioError> {
    let dir = dir.as_ref();
    fs::create_dir_all(dir).map_err(|e| ScenarioError::io(dir, e))?;
    let mut indices: Vec<usize> = trace
        .events
        .iter()
        .enumerate()
        .filter(|(_, e)| e.kind == EventKind::Sense)
        .map(|(k, _)| k)
        .collect();
    if !trace.events.is_empty() {
        indices.push(trace.events.len() - 1);
    }
    let mut written = Vec::with_capacity(indices.len());
    for (n, k) in indices.into_iter().enumerate() {
        let path = dir.join(format!("frame_{n:04}.svg"));
        fs::write(&path, render_frame(trace, spec, k)).map_err(|e| ScenarioError::io(&path, e))?;
        written.push(path);
    }
    Ok(written)
}
