//! A 50×50 RGB software camera looking down on the unit-square workspace.
//!
//! Pixel `(col, row)` has its centre at workspace coordinates
//! `((col + 0.5) / 50, 1 - (row + 0.5) / 50)`: row 0 is the top of the
//! frame and `y` grows upwards as in the workspace. A pixel takes a shape's
//! colour when its centre lies inside the shape; there is no anti-aliasing.
//! Frames flatten row-major, pixel-major: index `(row * 50 + col) * 3 + ch`
//! with channels R, G, B in `[0, 1]`.

use std::io::{self, Write};

use crate::geometry::Point;
use crate::sensor::SensorVector;

pub const WIDTH: usize = 50;
pub const HEIGHT: usize = 50;
pub const CHANNELS: usize = 3;
pub const IMAGE_LEN: usize = WIDTH * HEIGHT * CHANNELS;
/// Workspace units to pixels.
pub const PIXELS_PER_UNIT: f64 = 50.0;
/// Stroke width of arm links, in pixels.
pub const LINK_THICKNESS: f64 = 2.0;

#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Rgb {
    pub r: f64,
    pub g: f64,
    pub b: f64,
}

impl Rgb {
    pub const WHITE: Rgb = Rgb::new(1.0, 1.0, 1.0);
    pub const BLACK: Rgb = Rgb::new(0.0, 0.0, 0.0);
    pub const RED: Rgb = Rgb::new(1.0, 0.0, 0.0);
    pub const BLUE: Rgb = Rgb::new(0.0, 0.0, 1.0);

    pub const fn new(r: f64, g: f64, b: f64) -> Self {
        Rgb { r, g, b }
    }

    /// Fully saturated, full-value colour of `hue` (in turns, wrapped to `[0, 1)`).
    pub fn from_hue(hue: f64) -> Rgb {
        let h = hue.rem_euclid(1.0) * 6.0;
        let sector = (h.floor() as usize).min(5);
        let f = h - sector as f64;
        match sector {
            0 => Rgb::new(1.0, f, 0.0),
            1 => Rgb::new(1.0 - f, 1.0, 0.0),
            2 => Rgb::new(0.0, 1.0, f),
            3 => Rgb::new(0.0, 1.0 - f, 1.0),
            4 => Rgb::new(f, 0.0, 1.0),
            _ => Rgb::new(1.0, 0.0, 1.0 - f),
        }
    }

    fn channels(self) -> [f64; 3] {
        [
            self.r.clamp(0.0, 1.0),
            self.g.clamp(0.0, 1.0),
            self.b.clamp(0.0, 1.0),
        ]
    }
}

/// What the camera sees at the end of a trial.
#[derive(Clone, Debug, PartialEq)]
pub enum Scene {
    /// A planar arm: base, two joints, tip.
    Arm { joints: [Point; 4] },
    /// A single disk.
    Disk { center: Point, radius: f64, color: Rgb },
}

#[derive(Clone, Debug, PartialEq)]
pub struct Image {
    data: Vec<f64>,
}

impl Image {
    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn pixel(&self, col: usize, row: usize) -> [f64; 3] {
        let i = (row * WIDTH + col) * CHANNELS;
        [self.data[i], self.data[i + 1], self.data[i + 2]]
    }

    pub fn flatten(&self) -> SensorVector {
        SensorVector::new(self.data.clone())
    }

    /// Inverse of [`Image::flatten`]; `None` unless the length is exactly 7500.
    pub fn unflatten(v: &SensorVector) -> Option<Image> {
        (v.len() == IMAGE_LEN).then(|| Image {
            data: v.values().iter().map(|c| c.clamp(0.0, 1.0)).collect(),
        })
    }

    fn set(&mut self, col: usize, row: usize, color: Rgb) {
        let i = (row * WIDTH + col) * CHANNELS;
        self.data[i..i + 3].copy_from_slice(&color.channels());
    }

    /// Colours every pixel whose centre satisfies `inside(px, py)`, where
    /// the arguments are pixel-space coordinates of the centre.
    fn fill_where(&mut self, color: Rgb, inside: impl Fn(f64, f64) -> bool) {
        for row in 0..HEIGHT {
            for col in 0..WIDTH {
                if inside(col as f64 + 0.5, row as f64 + 0.5) {
                    self.set(col, row, color);
                }
            }
        }
    }

    /// Binary PPM (`P6`, maxval 255, channel byte = round(value·255)).
    pub fn write_ppm<W: Write>(&self, mut w: W) -> io::Result<()> {
        write!(w, "P6\n{WIDTH} {HEIGHT}\n255\n")?;
        let bytes: Vec<u8> = self
            .data
            .iter()
            .map(|c| (c.clamp(0.0, 1.0) * 255.0).round() as u8)
            .collect();
        w.write_all(&bytes)
    }
}

fn to_pixels(p: Point) -> (f64, f64) {
    (p.x * PIXELS_PER_UNIT, (1.0 - p.y) * PIXELS_PER_UNIT)
}

pub fn raster_clear(color: Rgb) -> Image {
    let c = color.channels();
    Image {
        data: c.iter().copied().cycle().take(IMAGE_LEN).collect(),
    }
}

/// Fills the pixels whose centres lie within `radius` of `center`.
pub fn raster_disk(img: &mut Image, center: Point, radius: f64, color: Rgb) {
    let (cx, cy) = to_pixels(center);
    fill_disk_px(img, cx, cy, radius * PIXELS_PER_UNIT, color);
}

pub(crate) fn fill_disk_px(img: &mut Image, cx: f64, cy: f64, r: f64, color: Rgb) {
    let r2 = r * r;
    img.fill_where(color, |px, py| {
        let (dx, dy) = (px - cx, py - cy);
        dx * dx + dy * dy <= r2
    });
}

/// Fills the pixels whose centres lie within `thickness / 2` pixels of the
/// segment `p1 → p2` (a capsule).
pub fn raster_segment(img: &mut Image, p1: Point, p2: Point, thickness: f64, color: Rgb) {
    let a = to_pixels(p1);
    let b = to_pixels(p2);
    let half2 = (0.5 * thickness).powi(2);
    img.fill_where(color, |px, py| {
        segment_distance_squared((px, py), a, b) <= half2
    });
}

fn segment_distance_squared(p: (f64, f64), a: (f64, f64), b: (f64, f64)) -> f64 {
    let (dx, dy) = (b.0 - a.0, b.1 - a.1);
    let len2 = dx * dx + dy * dy;
    let t = if len2 == 0.0 {
        0.0
    } else {
        (((p.0 - a.0) * dx + (p.1 - a.1) * dy) / len2).clamp(0.0, 1.0)
    };
    let (qx, qy) = (a.0 + t * dx - p.0, a.1 + t * dy - p.1);
    qx * qx + qy * qy
}

/// Draws `scene` over whatever `img` already holds.
pub fn draw_scene(img: &mut Image, scene: &Scene) {
    match scene {
        Scene::Arm { joints } => {
            for link in joints.windows(2) {
                raster_segment(img, link[0], link[1], LINK_THICKNESS, Rgb::BLUE);
            }
        }
        Scene::Disk {
            center,
            radius,
            color,
        } => raster_disk(img, *center, *radius, *color),
    }
}

/// The camera frame of `scene` on a white background.
pub fn render_scene(scene: &Scene) -> SensorVector {
    let mut img = raster_clear(Rgb::WHITE);
    draw_scene(&mut img, scene);
    img.flatten()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn colored(img: &Image, color: Rgb) -> usize {
        let c = color.channels();
        (0..HEIGHT)
            .flat_map(|r| (0..WIDTH).map(move |col| (col, r)))
            .filter(|&(col, r)| img.pixel(col, r) == c)
            .count()
    }

    /// Independent per-pixel containment count for a disk.
    fn disk_oracle(center: Point, radius: f64) -> usize {
        let mut n = 0;
        for row in 0..HEIGHT {
            for col in 0..WIDTH {
                let x = (col as f64 + 0.5) / 50.0;
                let y = 1.0 - (row as f64 + 0.5) / 50.0;
                if ((x - center.x).powi(2) + (y - center.y).powi(2)).sqrt() <= radius + 1e-12 {
                    n += 1;
                }
            }
        }
        n
    }

    #[test]
    fn clear_fills_every_channel() {
        assert!(raster_clear(Rgb::WHITE).data().iter().all(|&c| c == 1.0));
        assert!(raster_clear(Rgb::BLACK).data().iter().all(|&c| c == 0.0));
        let red = raster_clear(Rgb::RED);
        assert_eq!(red.data().len(), IMAGE_LEN);
        assert!(red.data().chunks(3).all(|px| px == [1.0, 0.0, 0.0]));
    }

    #[test]
    fn central_disk_pixel_count() {
        let mut img = raster_clear(Rgb::WHITE);
        raster_disk(&mut img, Point::new(0.5, 0.5), 0.1, Rgb::RED);
        let n = colored(&img, Rgb::RED);
        assert!((69..=89).contains(&n), "{n}");
        assert_eq!(n, disk_oracle(Point::new(0.5, 0.5), 0.1));
    }

    #[test]
    fn tiny_disk_on_pixel_center_colors_one_pixel() {
        let mut img = raster_clear(Rgb::WHITE);
        raster_disk(&mut img, Point::new(0.51, 0.49), 0.004, Rgb::RED);
        assert_eq!(colored(&img, Rgb::RED), 1);
        assert_eq!(img.pixel(25, 25), [1.0, 0.0, 0.0]);
    }

    #[test]
    fn corner_disk_is_clipped() {
        let mut img = raster_clear(Rgb::WHITE);
        raster_disk(&mut img, Point::new(0.0, 0.0), 0.1, Rgb::RED);
        let n = colored(&img, Rgb::RED);
        assert_eq!(n, disk_oracle(Point::new(0.0, 0.0), 0.1));
        // one quadrant of the full disk
        assert!(n < 89 / 4 + 3 && n > 69 / 4 - 3, "{n}");
    }

    #[test]
    fn horizontal_band_matches_capsule_oracle() {
        let mut img = raster_clear(Rgb::WHITE);
        let (a, b) = (Point::new(0.0, 0.5), Point::new(1.0, 0.5));
        raster_segment(&mut img, a, b, 2.0, Rgb::BLUE);
        let n = colored(&img, Rgb::BLUE);
        // row centres at y = 0.51 and 0.49 are exactly one pixel away
        let mut oracle = 0;
        for row in 0..HEIGHT {
            for col in 0..WIDTH {
                let py = row as f64 + 0.5;
                let px = col as f64 + 0.5;
                let dx = if px < 0.0 { -px } else if px > 50.0 { px - 50.0 } else { 0.0 };
                if (dx * dx + (py - 25.0).powi(2)).sqrt() <= 1.0 {
                    oracle += 1;
                }
            }
        }
        assert_eq!(n, oracle);
        assert_eq!(n, 100);
    }

    #[test]
    fn zero_length_segment_is_a_disk() {
        let p = Point::new(0.5, 0.5);
        let mut seg = raster_clear(Rgb::WHITE);
        raster_segment(&mut seg, p, p, 4.0, Rgb::BLUE);
        let mut disk = raster_clear(Rgb::WHITE);
        raster_disk(&mut disk, p, 2.0 / PIXELS_PER_UNIT, Rgb::BLUE);
        assert_eq!(seg, disk);
    }

    #[test]
    fn drawing_twice_is_idempotent() {
        let (a, b) = (Point::new(0.1, 0.2), Point::new(0.8, 0.7));
        let mut once = raster_clear(Rgb::WHITE);
        raster_segment(&mut once, a, b, 2.0, Rgb::BLUE);
        let mut twice = once.clone();
        raster_segment(&mut twice, a, b, 2.0, Rgb::BLUE);
        assert_eq!(once, twice);
    }

    #[test]
    fn one_pixel_translation_shifts_support() {
        let mut a = raster_clear(Rgb::WHITE);
        fill_disk_px(&mut a, 20.25, 24.0, 4.3, Rgb::RED);
        let mut b = raster_clear(Rgb::WHITE);
        fill_disk_px(&mut b, 21.25, 24.0, 4.3, Rgb::RED);
        for row in 0..HEIGHT {
            for col in 0..WIDTH - 1 {
                assert_eq!(a.pixel(col, row), b.pixel(col + 1, row));
            }
        }
    }

    #[test]
    fn hue_wheel_reference_colors() {
        assert_eq!(Rgb::from_hue(0.0), Rgb::RED);
        assert_eq!(Rgb::from_hue(1.0), Rgb::RED);
        assert_eq!(Rgb::from_hue(0.75), Rgb::new(0.5, 0.0, 1.0));
        assert_eq!(Rgb::from_hue(0.5), Rgb::new(0.0, 1.0, 1.0));
        assert_eq!(Rgb::from_hue(-0.25), Rgb::new(0.5, 0.0, 1.0));
    }

    #[test]
    fn flatten_round_trip_and_ppm_layout() {
        let mut img = raster_clear(Rgb::WHITE);
        raster_disk(&mut img, Point::new(0.3, 0.7), 0.1, Rgb::from_hue(0.3));
        let v = img.flatten();
        assert_eq!(v.len(), IMAGE_LEN);
        assert_eq!(Image::unflatten(&v).unwrap(), img);
        assert!(Image::unflatten(&SensorVector::new(vec![0.0; 5])).is_none());

        let mut ppm = Vec::new();
        img.write_ppm(&mut ppm).unwrap();
        let header = b"P6\n50 50\n255\n";
        assert_eq!(&ppm[..header.len()], header);
        assert_eq!(ppm.len(), header.len() + IMAGE_LEN);
        let body = &ppm[header.len()..];
        for (byte, value) in body.iter().zip(img.data()) {
            assert_eq!(*byte, (value * 255.0).round() as u8);
        }
    }
}
