use tbspace::ciphers::{check_test_vector, parse_test_vectors};

#[test]
fn published_vectors_round_trip() {
    let text = include_str!("fixtures/known_answers.txt");
    let vectors = parse_test_vectors(text).expect("fixture parses");
    assert_eq!(vectors.len(), 6);
    assert!(vectors.iter().any(|v| v.cipher == "aes128"));
    assert!(vectors.iter().any(|v| v.cipher == "present80"));
    for tv in &vectors {
        assert!(
            check_test_vector(tv).expect("vector evaluates"),
            "vector failed: {} key={:02x?}",
            tv.cipher,
            tv.key
        );
    }
}
