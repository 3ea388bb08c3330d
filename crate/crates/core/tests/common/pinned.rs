//! Tracy-Widom and Airy values from `tools/tw_oracle.py` (mpmath, 40 digits,
//! Gauss-Legendre orders 50 and 70 agreeing to 1e-35).

pub const PINNED_GUE: [(f64, f64); 6] = [
    (-3.0, 0.080_319_552_939_334_548),
    (-2.0, 0.413_224_142_505_122_555),
    (-1.0, 0.807_214_241_999_285_292),
    (0.0, 0.969_372_828_355_262_668),
    (1.0, 0.997_505_438_149_389_249),
    (2.0, 0.999_887_553_698_309_173),
];

pub const PINNED_GOE: [(f64, f64); 6] = [
    (-3.0, 0.069_600_119_096_548_632),
    (-2.0, 0.274_320_197_911_963_802),
    (-1.0, 0.583_789_895_519_749_244),
    (0.0, 0.831_908_066_202_951_991),
    (1.0, 0.951_421_236_911_550_735),
    (2.0, 0.989_597_571_084_826_992),
];

pub const AI_AT_ZERO: f64 = 0.355_028_053_887_817_239;
