//! CSV and PGM writers.

use std::fs::File;
use std::io::{BufWriter, Read, Write};
use std::path::Path;

use lwquad::regions::{Region, RegionMap};

use crate::Failure;

/// 17 significant digits, round-trippable; negative zero prints as zero.
pub fn num(x: f64) -> String {
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{x:.16e}")
}

pub fn create(path: &Path) -> Result<BufWriter<File>, Failure> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| Failure::io(path, e))
}

/// Comma-separated file with a mandatory header.
pub struct CsvWriter<W: Write> {
    inner: W,
    columns: usize,
}

impl<W: Write> CsvWriter<W> {
    pub fn new(mut inner: W, header: &[&str]) -> std::io::Result<Self> {
        writeln!(inner, "{}", header.join(","))?;
        Ok(Self {
            inner,
            columns: header.len(),
        })
    }

    pub fn row(&mut self, fields: &[String]) -> std::io::Result<()> {
        debug_assert_eq!(fields.len(), self.columns);
        writeln!(self.inner, "{}", fields.join(","))
    }

    pub fn finish(mut self) -> std::io::Result<W> {
        self.inner.flush()?;
        Ok(self.inner)
    }
}

pub fn gray_level(r: Region) -> u8 {
    match r {
        Region::Outside => 0,
        Region::Bad => 128,
        Region::Good => 255,
    }
}

pub fn region_from_gray(g: u8) -> Option<Region> {
    match g {
        0 => Some(Region::Outside),
        128 => Some(Region::Bad),
        255 => Some(Region::Good),
        _ => None,
    }
}

/// Binary PGM; the first image row is the largest `mu|b|`, so the origin
/// sits at the bottom left as in a plot.
pub fn write_pgm(mut w: impl Write, map: &RegionMap) -> std::io::Result<()> {
    let r = map.resolution;
    write!(
        w,
        "P5\n# lwquad {:?} map; origin bottom-left; column i: lambda|a| = (i+0.5)/{r}; \
         row from bottom j: mu|b| = (j+0.5)/{r}; 0 outside ball, 128 bad, 255 good\n{r} {r}\n255\n",
        map.kind
    )?;
    let mut bytes = Vec::with_capacity(r * r);
    for j in (0..r).rev() {
        for i in 0..r {
            bytes.push(gray_level(map.get(i, j)));
        }
    }
    w.write_all(&bytes)?;
    w.flush()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pgm {
    pub width: usize,
    pub height: usize,
    pub maxval: u16,
    /// Top row first.
    pub pixels: Vec<u8>,
}

/// Reads an 8-bit binary PGM, skipping `#` comments in the header.
pub fn read_pgm(mut r: impl Read) -> Result<Pgm, String> {
    let mut data = Vec::new();
    r.read_to_end(&mut data).map_err(|e| e.to_string())?;
    let mut pos = 0;
    let mut tokens = Vec::new();
    while tokens.len() < 4 {
        while pos < data.len() && data[pos].is_ascii_whitespace() {
            pos += 1;
        }
        if pos < data.len() && data[pos] == b'#' {
            while pos < data.len() && data[pos] != b'\n' {
                pos += 1;
            }
            continue;
        }
        let start = pos;
        while pos < data.len() && !data[pos].is_ascii_whitespace() {
            pos += 1;
        }
        if start == pos {
            return Err("truncated header".into());
        }
        tokens.push(String::from_utf8_lossy(&data[start..pos]).into_owned());
    }
    // exactly one whitespace byte before the raster
    pos += 1;
    if tokens[0] != "P5" {
        return Err(format!("not a P5 file: {}", tokens[0]));
    }
    let parse = |s: &str| s.parse::<usize>().map_err(|e| format!("bad header field `{s}`: {e}"));
    let (width, height, maxval) = (parse(&tokens[1])?, parse(&tokens[2])?, parse(&tokens[3])?);
    if maxval > 255 {
        return Err("only 8-bit PGM is supported".into());
    }
    let pixels = data.get(pos..pos + width * height).ok_or("truncated raster")?.to_vec();
    Ok(Pgm {
        width,
        height,
        maxval: maxval as u16,
        pixels,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use lwquad::regions::{sweep_unchecked, RegionKind};

    #[test]
    fn number_format_keeps_17_digits() {
        assert_eq!(num(0.25), "2.5000000000000000e-1");
        assert_eq!(num(-0.0), num(0.0));
        let x = 0.1 + 0.2;
        assert_eq!(num(x).parse::<f64>().unwrap(), x);
        assert_eq!(num(x).split('e').next().unwrap().replace('.', "").len(), 17);
    }

    #[test]
    fn pgm_round_trip() {
        let map = sweep_unchecked(RegionKind::Corner, 8);
        let mut buf = Vec::new();
        write_pgm(&mut buf, &map).unwrap();
        let pgm = read_pgm(buf.as_slice()).unwrap();
        assert_eq!((pgm.width, pgm.height, pgm.maxval), (8, 8, 255));
        for (i, j, class) in map.iter() {
            let g = pgm.pixels[(7 - j) * 8 + i];
            assert_eq!(region_from_gray(g), Some(class));
        }
    }

    #[test]
    fn csv_header_first() {
        let mut w = CsvWriter::new(Vec::new(), &["a", "b"]).unwrap();
        w.row(&["1".into(), "2".into()]).unwrap();
        assert_eq!(String::from_utf8(w.finish().unwrap()).unwrap(), "a,b\n1,2\n");
    }
}
