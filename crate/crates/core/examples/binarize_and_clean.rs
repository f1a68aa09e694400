//! Threshold a noisy gray page, then despeckle and close it.

use scriptid::mlp::XorShift64;
use scriptid::raster::{binarize, close, despeckle, threshold_of, GrayImage};

fn main() -> scriptid::Result<()> {
    let mut rng = XorShift64::new(3);
    let mut page = GrayImage::filled(120, 60, 215)?;
    // a dark stroke with a one-pixel crack, plus salt noise
    for y in 20..26 {
        for x in 10..110 {
            if x != 60 {
                page.set(x, y, 30 + rng.below(40) as u8);
            }
        }
    }
    for _ in 0..40 {
        page.set(rng.below(120), rng.below(60), 20);
    }
    // a rule along the top edge, inside the border band
    for x in 0..120 {
        page.set(x, 1, 40);
    }

    let t = threshold_of(&page);
    let ink = binarize(&page);
    let cleaned = despeckle(&ink, 4, 10);
    let closed = close(&cleaned);
    println!("threshold {t}");
    println!(
        "ink pixels: raw {}, despeckled {}, closed {}",
        ink.foreground_count(),
        cleaned.foreground_count(),
        closed.foreground_count()
    );
    println!("crack at column 60 filled: {}", closed.get(60, 22));
    Ok(())
}
