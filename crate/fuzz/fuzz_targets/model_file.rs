//! Fuzz the model-file decoder: arbitrary bytes go through JSON parsing,
//! schema validation (index bounds, partner filling, dimension caps) and,
//! for small models, the full invariant check and the orthonormalization
//! path. None of it may panic or allocate unboundedly.

#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(model) = reductive_geom::io::load_model_str(text) else {
        return;
    };
    // cheap paths for any accepted model
    let x: Vec<f64> = (0..model.dim()).map(|i| (i % 3) as f64 - 1.0).collect();
    let _ = model.bracket(&x, &x);
    let _ = model.project(&x, reductive_geom::Part::M);
    let round_trip = reductive_geom::io::save_model_string(&model);
    let _ = reductive_geom::io::load_model_str(&round_trip);
    // the O(dim^5) validation and the factorization paths only at desk scale
    if model.dim() <= 10 {
        let report = model.validate();
        let _ = report.all_passed();
        let _ = model.orthonormalize_m();
        let _ = model.casimir_a();
        let _ = reductive_geom::connection::levi_civita_map(&model);
    }
});
