use sodesign_web::ops::{analyze, designs_in_code, equivalent};

const FANO: &str = "7 7 3 3 1\n1101000\n0110100\n0011010\n0001101\n1000110\n0100011\n1010001\n";
const FANO_RELABELED: &str =
    "7 7 3 3 1\n1110000\n1001100\n0101010\n0010110\n0011001\n0100101\n1000011\n";
const HAMMING_8: &str = "8 4\n10010110\n01010101\n00110011\n00001111\n";

#[test]
fn analyze_reports_the_point_code() {
    let out = analyze(FANO).unwrap();
    assert!(out.contains("all-ones column"));
    assert!(out.contains("[8, 4, 4] code, self-orthogonal"));
    assert!(out.contains("weights 0:1,4:14,8:1"));
    assert!(analyze(HAMMING_8).unwrap().starts_with("[8, 4, 4] code"));
    assert!(analyze("").is_err());
    assert!(analyze("7 7 3 3 1\n1101000\n").is_err());
}

#[test]
fn the_plane_sits_in_the_extended_hamming_code() {
    let out = designs_in_code(HAMMING_8, 7, 3, 1, true).unwrap();
    assert!(out.starts_with("1 non-isomorphic designs"));
    let found = out.split_once("\n\n").unwrap().1;
    assert!(equivalent(found, FANO).unwrap());
    assert!(designs_in_code(FANO, 7, 3, 1, true).is_err());
}

#[test]
fn equivalence_of_designs_and_codes() {
    assert!(equivalent(FANO, FANO_RELABELED).unwrap());
    assert!(equivalent(HAMMING_8, HAMMING_8).unwrap());
    assert!(!equivalent(HAMMING_8, "8 4\n11000000\n00110000\n00001100\n00000011\n").unwrap());
    assert!(equivalent(FANO, HAMMING_8).is_err());
}
