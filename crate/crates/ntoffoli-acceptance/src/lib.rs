//! Holds the `acceptance` test target. It runs last in `cargo test --workspace`
//! so a failing criterion does not stop the library's own tests.
