//! Holds the `acceptance` test target, which checks the library against the
//! published claims end to end and prints one line per criterion.
