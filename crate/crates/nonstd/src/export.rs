//! CSV tables for partial-sum traces and per-cell ranges.

use std::io::Write;

use nonstd_core::interval::RatInterval;
use nonstd_core::riemann::Partition;
use nonstd_core::series::SumTrace;

pub fn write_trace<W: Write>(out: W, trace: &SumTrace) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["n", "S_n lo", "S_n hi"])?;
    for (n, s) in &trace.sums {
        w.write_record([n.to_string(), s.lo().to_string(), s.hi().to_string()])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_cells<W: Write>(out: W, p: &Partition, ranges: &[RatInterval]) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["cell", "lo", "hi"])?;
    for (cell, r) in p.cells().zip(ranges) {
        w.write_record([cell.to_string(), r.lo().to_string(), r.hi().to_string()])?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use nonstd_core::expr::parse;
    use nonstd_core::rat;
    use nonstd_core::riemann::darboux_bounds;

    #[test]
    fn cell_table() {
        let p = Partition::uniform(&rat::int(0), &rat::int(1), 2);
        let d = darboux_bounds(&parse("x").unwrap(), &p, 32).unwrap();
        let mut buf = Vec::new();
        write_cells(&mut buf, &p, &d.ranges).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "cell,lo,hi\n\"[0, 1/2]\",0,1/2\n\"[1/2, 1]\",1/2,1\n");
    }
}
