//! Paired t-test at the 0.01 significance level.

use alloc::format;

use crate::{Error, Result};

/// Two-tailed critical values `t_{0.995, df}` for `df = 1..=200`, rounded to 10 decimals.
const T_CRITICAL_001: [f64; 200] = [
    63.6567411629,
    9.9248432009,
    5.8409093097,
    4.6040948714,
    4.0321429836,
    3.7074280213,
    3.4994832974,
    3.3553873313,
    3.2498355416,
    3.1692726726,
    3.1058065155,
    3.0545395894,
    3.0122758387,
    2.9768427344,
    2.9467128835,
    2.9207816225,
    2.8982305196,
    2.8784404727,
    2.8609346064,
    2.8453397098,
    2.8313595580,
    2.8187560606,
    2.8073356838,
    2.7969395048,
    2.7874358137,
    2.7787145333,
    2.7706829571,
    2.7632624555,
    2.7563859037,
    2.7499956536,
    2.7440419193,
    2.7384814820,
    2.7332766424,
    2.7283943671,
    2.7238055892,
    2.7194846304,
    2.7154087215,
    2.7115576019,
    2.7079131835,
    2.7044592674,
    2.7011813036,
    2.6980661862,
    2.6951020792,
    2.6922782657,
    2.6895850194,
    2.6870134922,
    2.6845556179,
    2.6822040270,
    2.6799519736,
    2.6777932709,
    2.6757222341,
    2.6737336306,
    2.6718226362,
    2.6699847957,
    2.6682159885,
    2.6665123976,
    2.6648704822,
    2.6632869535,
    2.6617587522,
    2.6602830289,
    2.6588571267,
    2.6574785650,
    2.6561450251,
    2.6548543374,
    2.6536044694,
    2.6523935150,
    2.6512196852,
    2.6500812987,
    2.6489767744,
    2.6479046238,
    2.6468634442,
    2.6458519132,
    2.6448687821,
    2.6439128717,
    2.6429830670,
    2.6420783131,
    2.6411976114,
    2.6403400153,
    2.6395046275,
    2.6386905963,
    2.6378971134,
    2.6371234104,
    2.6363687569,
    2.6356324580,
    2.6349138523,
    2.6342123094,
    2.6335272291,
    2.6328580385,
    2.6322041912,
    2.6315651656,
    2.6309404634,
    2.6303296083,
    2.6297321451,
    2.6291476383,
    2.6285756708,
    2.6280158435,
    2.6274677740,
    2.6269310958,
    2.6264054573,
    2.6258905214,
    2.6253859647,
    2.6248914763,
    2.6244067580,
    2.6239315231,
    2.6234654959,
    2.6230084115,
    2.6225600148,
    2.6221200606,
    2.6216883126,
    2.6212645435,
    2.6208485340,
    2.6204400730,
    2.6200389568,
    2.6196449892,
    2.6192579807,
    2.6188777486,
    2.6185041165,
    2.6181369140,
    2.6177759765,
    2.6174211451,
    2.6170722662,
    2.6167291912,
    2.6163917764,
    2.6160598831,
    2.6157333766,
    2.6154121271,
    2.6150960084,
    2.6147848988,
    2.6144786799,
    2.6141772376,
    2.6138804607,
    2.6135882420,
    2.6133004771,
    2.6130170650,
    2.6127379077,
    2.6124629101,
    2.6121919799,
    2.6119250276,
    2.6116619662,
    2.6114027112,
    2.6111471805,
    2.6108952947,
    2.6106469761,
    2.6104021496,
    2.6101607420,
    2.6099226822,
    2.6096879011,
    2.6094563313,
    2.6092279075,
    2.6090025659,
    2.6087802446,
    2.6085608833,
    2.6083444233,
    2.6081308073,
    2.6079199797,
    2.6077118863,
    2.6075064742,
    2.6073036919,
    2.6071034893,
    2.6069058174,
    2.6067106285,
    2.6065178762,
    2.6063275151,
    2.6061395010,
    2.6059537906,
    2.6057703421,
    2.6055891144,
    2.6054100672,
    2.6052331615,
    2.6050583592,
    2.6048856229,
    2.6047149161,
    2.6045462035,
    2.6043794501,
    2.6042146221,
    2.6040516864,
    2.6038906104,
    2.6037313627,
    2.6035739121,
    2.6034182286,
    2.6032642824,
    2.6031120446,
    2.6029614871,
    2.6028125821,
    2.6026653025,
    2.6025196220,
    2.6023755145,
    2.6022329548,
    2.6020919180,
    2.6019523799,
    2.6018143167,
    2.6016777052,
    2.6015425226,
    2.6014087465,
    2.6012763552,
    2.6011453272,
    2.6010156417,
    2.6008872780,
    2.6007602160,
    2.6006344362,
];

/// Standard normal 0.995 quantile, used beyond the tabulated range.
const Z_0995: f64 = 2.5758293035489004;

/// Two-tailed critical t value at α = 0.01 for `df` degrees of freedom (`df ≥ 1`).
pub fn t_critical_001(df: usize) -> f64 {
    match df {
        0 => f64::INFINITY,
        1..=200 => T_CRITICAL_001[df - 1],
        _ => Z_0995,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TTestResult {
    /// Paired t statistic of `a - b`; infinite when the differences are constant and non-zero.
    pub t: f64,
    pub df: usize,
    pub mean_difference: f64,
    pub significant_at_001: bool,
}

/// Paired t-test on `a[i] - b[i]`, two-tailed at α = 0.01.
///
/// With zero variance in the differences the result is significant iff their
/// mean is non-zero.
pub fn paired_t_test(a: &[f64], b: &[f64]) -> Result<TTestResult> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch { expected: a.len(), found: b.len() });
    }
    let n = a.len();
    if n < 2 {
        return Err(Error::validation(format!("paired t-test needs at least two pairs, got {n}")));
    }
    if a.iter().chain(b).any(|v| !v.is_finite()) {
        return Err(Error::validation("paired t-test inputs must be finite"));
    }
    let diffs = || a.iter().zip(b).map(|(x, y)| x - y);
    let mean = diffs().sum::<f64>() / n as f64;
    let var = diffs().map(|d| (d - mean) * (d - mean)).sum::<f64>() / (n - 1) as f64;
    let df = n - 1;
    if var == 0.0 {
        let t = if mean == 0.0 { 0.0 } else { f64::INFINITY.copysign(mean) };
        return Ok(TTestResult { t, df, mean_difference: mean, significant_at_001: mean != 0.0 });
    }
    let t = mean / libm::sqrt(var / n as f64);
    Ok(TTestResult { t, df, mean_difference: mean, significant_at_001: t.abs() > t_critical_001(df) })
}
