//! Published high-precision values used as regression targets.
//!
//! `C` and `B` hold the imaginary part of `c_n` and the nonzero component of
//! `b_n` (imaginary for even `n`, real for odd `n`) exactly as tabulated.

/// Imaginary part of `tau` for the zero on the imaginary axis.
pub const TAU0_IM: &str = "0.52352170001799926680053440480610976968";

/// Imaginary part of `tau` for the zero on the line `Re tau = 1/2`.
pub const TAU_HALF_IM: &str = "0.13091903039676244690411482601971302060";

/// `Im c_0 .. Im c_10` (every `c_n` is purely imaginary).
pub const C: [&str; 11] = [
    "1.90985931710274402922660516047017234441351574888547738497",
    "0.00028162994902227980400370919939063856289594529890275357",
    "-0.00000045163288929282012635455207577614911204985274433204",
    "0.00000000108245596925811696405920054080771200657423178116",
    "-0.00000000000307154282808538137128721799597366123291772057",
    "0.00000000000000957094344711630129941209014246199967789040",
    "-0.00000000000000003165503372449709626701121359204401518804",
    "0.00000000000000000010911333723210259127123321555755721374",
    "-0.00000000000000000000038769575689989675972304397185016487",
    "0.00000000000000000000000140991650336337176376718140570072",
    "-0.00000000000000000000000000522238601930043508518075691844",
];

/// `b_0 .. b_9` as tabulated, signs included.
pub const B: [&str; 10] = [
    "1.9101404964982709820376545357984830913777487030",
    "-0.9982361219015924374815710878280361648431190825",
    "0.0055236842011260453610739166397990326586651337",
    "-0.01149489150274208316313259093815041563703067326",
    "0.0178252611095229253133162329291348589135823077",
    "0.0218243134639575211728774441381952550676521991",
    "0.0216634844629385759461618124642355350591382590",
    "-0.0173461622715009362175946164162223267332088060",
    "0.0104172812309514952250501361120571266678673695",
    "0.0029825116383882005761911965146832408919333302",
];

/// First coefficients of `H~(q e^12)`.
pub const H_TILDE: [i64; 5] = [-12, -288, 75168, -29321856, 13541649696];

/// `(i, j, k, numerator, denominator)` for the term `(numerator/denominator) X^i Y^j Z^k`.
pub type Term = (i32, i32, i32, i64, i64);

/// `a_1 .. a_5` as term lists.
pub const A: [&[Term]; 5] = [
    &[(0, 0, 2, 1, 1)],
    &[(1, 0, 5, 1, 1), (2, 0, 3, 1, 1), (0, 1, 4, -2, 1)],
    &[
        (2, 0, 8, 1, 1),
        (3, 0, 6, -2, 1),
        (1, 1, 7, -4, 1),
        (4, 0, 4, 1, 1),
        (2, 1, 5, -4, 1),
        (0, 2, 6, 8, 1),
    ],
    &[
        (3, 0, 11, 1, 1),
        (4, 0, 9, -5, 1),
        (2, 1, 10, -6, 1),
        (5, 0, 7, -9, 1),
        (3, 1, 8, 20, 1),
        (1, 2, 9, 20, 1),
        (6, 0, 5, 1, 1),
        (4, 1, 6, -6, 1),
        (2, 2, 7, 24, 1),
        (0, 3, 8, -40, 1),
    ],
    &[
        (4, 0, 14, 1, 1),
        (5, 0, 12, -8, 1),
        (3, 1, 13, -8, 1),
        (6, 0, 10, 66, 5),
        (4, 1, 11, 56, 1),
        (2, 2, 12, 36, 1),
        (7, 0, 8, -20, 1),
        (5, 1, 9, 104, 1),
        (3, 2, 10, -836, 5),
        (1, 3, 11, -112, 1),
        (8, 0, 6, 1, 1),
        (6, 1, 7, -8, 1),
        (4, 2, 8, 48, 1),
        (2, 3, 9, -160, 1),
        (0, 4, 10, 224, 1),
    ],
];
