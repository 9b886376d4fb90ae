//! Holds the `acceptance` test target, which checks the compiler end to end
//! against fixed criteria. Run it with `cargo test -p qroute-suite`.
