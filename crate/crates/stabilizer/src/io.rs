use std::io::{Read, Write};

use atomarray_model::ShotRecord;

use crate::error::StabilizerError;

/// Writes shots as CSV with columns `shot_id, bitstring, loss_mask`.
pub fn write_shots_csv<W: Write>(w: W, shots: &[ShotRecord]) -> Result<(), StabilizerError> {
    let mut wr = csv::Writer::from_writer(w);
    wr.write_record(["shot_id", "bitstring", "loss_mask"])?;
    for (k, s) in shots.iter().enumerate() {
        wr.write_record([k.to_string(), s.bitstring(), s.loss_mask()])?;
    }
    wr.flush()?;
    Ok(())
}

pub fn read_shots_csv<R: Read>(r: R) -> Result<Vec<ShotRecord>, StabilizerError> {
    let mut rd = csv::Reader::from_reader(r);
    let mut out = Vec::new();
    for rec in rd.records() {
        let rec = rec?;
        let bits: Vec<u8> = rec[1].bytes().map(|b| (b == b'1') as u8).collect();
        let lost: Vec<bool> = rec[2].bytes().map(|b| b == b'1').collect();
        out.push(ShotRecord::new(bits, lost)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_round_trip() {
        let shots = vec![
            ShotRecord::new(vec![0, 1, 0], vec![false, false, true]).unwrap(),
            ShotRecord::without_loss(vec![1, 1, 0]),
        ];
        let mut buf = Vec::new();
        write_shots_csv(&mut buf, &shots).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("shot_id,bitstring,loss_mask\n0,011,001\n"));
        assert_eq!(read_shots_csv(&buf[..]).unwrap(), shots);
    }
}
