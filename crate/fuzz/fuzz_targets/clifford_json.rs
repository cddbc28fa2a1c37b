//! Fuzz the Clifford-element decoder and the algebra built on top of it:
//! deserialization must reject out-of-range blades and non-finite
//! coefficients, and accepted elements must survive products, grade
//! projections, interior products and a serialization round trip.

#![no_main]

use libfuzzer_sys::fuzz_target;

use reductive_geom::CliffordElement;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(a) = serde_json::from_str::<CliffordElement>(text) else {
        return;
    };
    let n = a.dimension();
    let _ = a.grade(0);
    let _ = a.grade(n.min(4));
    if let Ok(sq) = a.mul(&a) {
        let _ = sq.max_abs_coeff();
    }
    if n > 0 {
        let v: Vec<f64> = (0..n).map(|i| if i % 2 == 0 { 1.0 } else { -0.5 }).collect();
        let _ = a.interior(&v);
    }
    let json = serde_json::to_string(&a).expect("serializable");
    let back: CliffordElement = serde_json::from_str(&json).expect("round trip parses");
    assert!(a.sub(&back).max_abs_coeff() == 0.0, "round trip must be exact");
});
