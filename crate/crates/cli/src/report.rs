use mzm_core::linalg::CMatrix;
use num_complex::Complex64;

/// `[re, im]` with negative zeros cleared so output is stable.
pub fn pair(z: Complex64) -> [f64; 2] {
    [z.re + 0.0, z.im + 0.0]
}

/// Row-major `[re, im]` entries.
pub fn matrix(m: &CMatrix) -> Vec<Vec<[f64; 2]>> {
    (0..m.nrows()).map(|r| (0..m.ncols()).map(|c| pair(m[(r, c)])).collect()).collect()
}

pub fn amplitudes(a: &[Complex64]) -> Vec<[f64; 2]> {
    a.iter().copied().map(pair).collect()
}

/// Shortest round-trip text, in exponent form below `1e-4`.
pub fn num(x: f64) -> String {
    let x = x + 0.0;
    if x != 0.0 && x.abs() < 1e-4 {
        format!("{x:e}")
    } else {
        format!("{x}")
    }
}

/// `re+imi`
pub fn csv_complex(z: Complex64) -> String {
    let [re, im] = pair(z);
    let im = if im.is_sign_negative() { num(im) } else { format!("+{}", num(im)) };
    format!("{}{im}i", num(re))
}

pub fn csv_table(header: &[&str], rows: &[Vec<String>]) -> Result<String, csv::Error> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for row in rows {
        w.write_record(row)?;
    }
    let bytes = w.into_inner().map_err(|e| e.into_error())?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}
