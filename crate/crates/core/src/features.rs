//! Holistic word features for Matra-script vs Roman discrimination.
//!
//! Every word is reduced to eight numbers, each scaled into `[0, 1]`:
//!
//! | index | feature |
//! |-------|---------|
//! | 0 | horizontalness at the headline row R2 (longest run / width) |
//! | 1 | headline-band pixel count / band area |
//! | 2 | segmentation-point pixel count / width |
//! | 3..8 | foreground/background transitions at R2, R3, R4, R12, R13, over width |
//!
//! Features are computed on the tight ink box, so they do not depend on
//! where the word sits inside its crop.

use std::fmt;

use crate::error::{Error, Result};
use crate::raster::BinaryImage;

pub const FEATURE_COUNT: usize = 8;

/// How the interior landmark rows are derived from R1, R2 and R5.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LandmarkRule {
    /// Successive midpoints: R4 = (R2+R5)/2, R3 = (R2+R4)/2.
    #[default]
    Midpoint,
    /// R4 = (R2+R5)/4, R3 = (R2+R4)/3 taken as printed, then clamped.
    Literal,
}

impl std::str::FromStr for LandmarkRule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "midpoint" => Ok(Self::Midpoint),
            "literal" => Ok(Self::Literal),
            other => Err(Error::Config(format!("unknown landmark rule {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FeatureConfig {
    pub landmark_rule: LandmarkRule,
    /// Rows whose horizontalness reaches this fraction of the R2 value
    /// extend the headline band.
    pub band_coherence: f64,
}

impl Default for FeatureConfig {
    fn default() -> Self {
        Self {
            landmark_rule: LandmarkRule::Midpoint,
            band_coherence: 0.75,
        }
    }
}

/// Row positions sampled for transition counts. All indices are rows of the
/// word image and lie in `[r1, r5]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RowLandmarks {
    /// First row with ink.
    pub r1: usize,
    /// Row of maximal horizontalness (topmost on ties).
    pub r2: usize,
    pub r3: usize,
    pub r4: usize,
    /// Last row with ink.
    pub r5: usize,
    pub r12: usize,
    pub r13: usize,
}

/// Headline band around R2 and the pixel counts derived from it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HeadlineAnalysis {
    /// Inclusive row range.
    pub band: (usize, usize),
    pub matra_pixel_count: usize,
    pub segmentation_point_count: usize,
}

impl HeadlineAnalysis {
    pub fn band_height(&self) -> usize {
        self.band.1 - self.band.0 + 1
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FeatureVector(pub [f64; FEATURE_COUNT]);

impl FeatureVector {
    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }
}

/// Tab-separated, shortest round-trip decimals.
impl fmt::Display for FeatureVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str("\t")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

/// Longest run of consecutive ink pixels in each row.
pub fn horizontalness_profile(word: &BinaryImage) -> Result<Vec<usize>> {
    let profile: Vec<usize> = (0..word.height())
        .map(|y| longest_run(word.row(y)))
        .collect();
    if profile.iter().all(|&v| v == 0) {
        return Err(Error::EmptyWord);
    }
    Ok(profile)
}

fn longest_run(row: &[bool]) -> usize {
    let mut best = 0;
    let mut cur = 0;
    for &fg in row {
        cur = if fg { cur + 1 } else { 0 };
        best = best.max(cur);
    }
    best
}

/// Topmost row holding the profile maximum.
fn argmax(profile: &[usize]) -> usize {
    let mut best = 0;
    for (i, &v) in profile.iter().enumerate() {
        if v > profile[best] {
            best = i;
        }
    }
    best
}

pub fn row_landmarks(profile: &[usize], rule: LandmarkRule) -> Result<RowLandmarks> {
    let r1 = profile
        .iter()
        .position(|&v| v > 0)
        .ok_or(Error::EmptyWord)?;
    let r5 = profile
        .iter()
        .rposition(|&v| v > 0)
        .ok_or(Error::EmptyWord)?;
    let r2 = argmax(profile);
    let (r4, r3) = match rule {
        LandmarkRule::Midpoint => {
            let r4 = (r2 + r5) / 2;
            (r4, (r2 + r4) / 2)
        }
        LandmarkRule::Literal => {
            let r4 = (r2 + r5) / 4;
            (r4, (r2 + r4) / 3)
        }
    };
    let r12 = (r1 + r2) / 2;
    let r13 = (r12 + r2) / 2;
    let clamp = |r: usize| r.clamp(r1, r5);
    Ok(RowLandmarks {
        r1,
        r2,
        r3: clamp(r3),
        r4: clamp(r4),
        r5,
        r12: clamp(r12),
        r13: clamp(r13),
    })
}

/// Locates the headline band and counts Matra and segmentation-point pixels.
///
/// The band is the maximal run of rows around R2 whose horizontalness stays
/// at or above `coherence` times the R2 value. A column is a candidate cut
/// when it carries no ink anywhere below the band; band pixels in those
/// columns are segmentation points.
pub fn headline_analysis(
    word: &BinaryImage,
    landmarks: &RowLandmarks,
    profile: &[usize],
    coherence: f64,
) -> HeadlineAnalysis {
    let peak = profile[landmarks.r2] as f64;
    let strong = |r: usize| profile[r] as f64 >= coherence * peak;
    let mut top = landmarks.r2;
    while top > landmarks.r1 && strong(top - 1) {
        top -= 1;
    }
    let mut bottom = landmarks.r2;
    while bottom < landmarks.r5 && strong(bottom + 1) {
        bottom += 1;
    }

    let mut matra = 0;
    let mut seg = 0;
    for x in 0..word.width() {
        let ink_below = (bottom + 1..word.height()).any(|y| word.get(x, y));
        let in_band = (top..=bottom).filter(|&y| word.get(x, y)).count();
        matra += in_band;
        if !ink_below {
            seg += in_band;
        }
    }
    HeadlineAnalysis {
        band: (top, bottom),
        matra_pixel_count: matra,
        segmentation_point_count: seg,
    }
}

/// Number of ink/paper changeovers between horizontally adjacent pixels.
pub fn transitions(word: &BinaryImage, row: usize) -> Result<usize> {
    if row >= word.height() {
        return Err(Error::RowOutOfRange {
            row,
            height: word.height(),
        });
    }
    Ok(word.row(row).windows(2).filter(|p| p[0] != p[1]).count())
}

/// Computes the eight-element descriptor of a word bitmap.
pub fn extract_features(word: &BinaryImage, cfg: &FeatureConfig) -> Result<FeatureVector> {
    let word = word.trim().ok_or(Error::EmptyWord)?;
    let profile = horizontalness_profile(&word)?;
    let lm = row_landmarks(&profile, cfg.landmark_rule)?;
    let head = headline_analysis(&word, &lm, &profile, cfg.band_coherence);

    let w = word.width() as f64;
    let tr = |r: usize| transitions(&word, r).map(|t| t as f64 / w);
    let f = [
        profile[lm.r2] as f64 / w,
        head.matra_pixel_count as f64 / (w * head.band_height() as f64),
        head.segmentation_point_count as f64 / w,
        tr(lm.r2)?,
        tr(lm.r3)?,
        tr(lm.r4)?,
        tr(lm.r12)?,
        tr(lm.r13)?,
    ];
    Ok(FeatureVector(f.map(|v| v.clamp(0.0, 1.0))))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row_image(pattern: &str) -> BinaryImage {
        BinaryImage::from_ascii(&[pattern]).unwrap()
    }

    #[test]
    fn profile_uses_longest_run() {
        let img = BinaryImage::from_ascii(&[
            "############",
            "###..#####..",
            "............",
            "#...........",
        ])
        .unwrap();
        assert_eq!(horizontalness_profile(&img).unwrap(), vec![12, 5, 0, 1]);
    }

    #[test]
    fn empty_word_errors() {
        let img = BinaryImage::blank(4, 4).unwrap();
        assert_eq!(
            horizontalness_profile(&img).unwrap_err().to_string(),
            "empty word image"
        );
        assert!(extract_features(&img, &FeatureConfig::default()).is_err());
    }

    #[test]
    fn landmark_midpoints() {
        let mut profile = vec![1; 40];
        profile[10] = 9;
        let lm = row_landmarks(&profile, LandmarkRule::Midpoint).unwrap();
        assert_eq!((lm.r1, lm.r2, lm.r5), (0, 10, 39));
        assert_eq!((lm.r4, lm.r3, lm.r12, lm.r13), (24, 17, 5, 7));
    }

    #[test]
    fn landmark_literal_rule_is_clamped() {
        let mut profile = vec![0; 50];
        for v in &mut profile[10..40] {
            *v = 1;
        }
        profile[20] = 5;
        let lm = row_landmarks(&profile, LandmarkRule::Literal).unwrap();
        // (20+39)/4 = 14, (20+14)/3 = 11
        assert_eq!((lm.r4, lm.r3), (14, 11));
        profile[12] = 9;
        let lm = row_landmarks(&profile, LandmarkRule::Literal).unwrap();
        // (12+39)/4 = 12, (12+12)/3 = 8 -> clamped up to r1
        assert_eq!((lm.r4, lm.r3), (12, 10));
    }

    #[test]
    fn degenerate_landmarks() {
        let lm = row_landmarks(&[0, 0, 3, 0], LandmarkRule::Midpoint).unwrap();
        assert!([lm.r1, lm.r2, lm.r3, lm.r4, lm.r5, lm.r12, lm.r13]
            .iter()
            .all(|&r| r == 2));
        let lm = row_landmarks(&[5, 1, 1, 1], LandmarkRule::Midpoint).unwrap();
        assert_eq!((lm.r12, lm.r13), (0, 0));
    }

    #[test]
    fn headline_only_word() {
        let img = row_image(&"#".repeat(20));
        let profile = horizontalness_profile(&img).unwrap();
        let lm = row_landmarks(&profile, LandmarkRule::Midpoint).unwrap();
        let h = headline_analysis(&img, &lm, &profile, 0.75);
        assert_eq!(h.band, (0, 0));
        assert_eq!((h.matra_pixel_count, h.segmentation_point_count), (20, 20));
    }

    #[test]
    fn band_is_minimal_without_coherent_rows() {
        let img =
            BinaryImage::from_ascii(&["#...#...", "########", "#..#..#.", "#..#..#."]).unwrap();
        let profile = horizontalness_profile(&img).unwrap();
        let lm = row_landmarks(&profile, LandmarkRule::Midpoint).unwrap();
        let h = headline_analysis(&img, &lm, &profile, 0.75);
        assert_eq!(h.band, (1, 1));
        assert_eq!(h.matra_pixel_count, 8);
        // columns 1, 2, 4, 5, 7 are empty below the band
        assert_eq!(h.segmentation_point_count, 5);
    }

    #[test]
    fn transition_counts() {
        assert_eq!(transitions(&row_image(".........."), 0).unwrap(), 0);
        assert_eq!(transitions(&row_image("#..##"), 0).unwrap(), 2);
        assert_eq!(transitions(&row_image("#.#.#.#."), 0).unwrap(), 7);
        assert!(matches!(
            transitions(&row_image("#"), 1),
            Err(Error::RowOutOfRange { row: 1, height: 1 })
        ));
    }

    #[test]
    fn saturated_headline() {
        let img = BinaryImage::from_ascii(&["..........", ".########.", ".........."]).unwrap();
        let f = extract_features(&img, &FeatureConfig::default()).unwrap();
        assert_eq!(f.0[0], 1.0);
        assert_eq!(f.0[3], 0.0);
    }

    #[test]
    fn single_pixel_word() {
        let img = BinaryImage::from_ascii(&["...", ".#.", "..."]).unwrap();
        let f = extract_features(&img, &FeatureConfig::default()).unwrap();
        assert_eq!(f.0, [1.0, 1.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn display_is_tab_separated() {
        let f = FeatureVector([1.0, 0.5, 0.25, 0.0, 0.125, 0.1, 1.0, 0.0]);
        assert_eq!(f.to_string(), "1\t0.5\t0.25\t0\t0.125\t0.1\t1\t0");
    }
}
