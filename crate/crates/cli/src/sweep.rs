use std::io::Write;

use lwquad::regions::{sweep_unchecked, Region, RegionMap};

use crate::output::{create, num, write_pgm, CsvWriter};
use crate::{exit, CmdResult, Failure, SweepArgs};

pub fn write_csv(w: impl Write, map: &RegionMap) -> std::io::Result<()> {
    let mut csv = CsvWriter::new(w, &["la", "mb", "class"])?;
    for (i, j, class) in map.iter() {
        csv.row(&[num(map.center(i)), num(map.center(j)), class.code().to_string()])?;
    }
    csv.finish().map(|_| ())
}

pub fn run(args: &SweepArgs, out: &mut dyn Write) -> CmdResult {
    if args.res == 0 {
        return Err(Failure::usage("--res must be positive"));
    }
    // fail before the sweep if an output cannot be created
    let csv_file = args.out_csv.as_deref().map(create).transpose()?;
    let pgm_file = args.out_pgm.as_deref().map(create).transpose()?;
    let map = sweep_unchecked(args.which.into(), args.res);
    if let (Some(f), Some(p)) = (csv_file, &args.out_csv) {
        write_csv(f, &map).map_err(|e| Failure::io(p, e))?;
    }
    if let (Some(f), Some(p)) = (pgm_file, &args.out_pgm) {
        write_pgm(f, &map).map_err(|e| Failure::io(p, e))?;
    }
    writeln!(
        out,
        "sweep: {:?} resolution {} outside {} bad {} good {}",
        args.which,
        args.res,
        map.count(Region::Outside),
        map.count(Region::Bad),
        map.count(Region::Good)
    )
    .map_err(Failure::report)?;
    Ok(exit::OK)
}
