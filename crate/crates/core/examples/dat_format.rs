//! Write a bitmap as DAT text, read it back, and show a parse error.

use scriptid::raster::{load_dat, save_dat, BinaryImage};

fn main() -> scriptid::Result<()> {
    let img = BinaryImage::from_ascii(&["..####..", ".#....#.", ".#....#.", "..####.."])?;
    let bytes = save_dat(&img);
    print!("{}", String::from_utf8_lossy(&bytes));

    let back = load_dat(&bytes)?;
    assert_eq!(back, img);
    assert_eq!(save_dat(&back), bytes);
    println!("round trip ok, {} ink pixels", back.foreground_count());

    match load_dat(b"3 2\n010\n0x1\n") {
        Err(e) => println!("rejected: {e}"),
        Ok(_) => unreachable!(),
    }
    Ok(())
}
