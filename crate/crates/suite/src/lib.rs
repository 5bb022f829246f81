//! Acceptance criteria for `hopf-chern`, run as the `acceptance` test target.
