#pragma once

#include <doctest.h>

// Relative comparison. doctest's default Approx adds an absolute scale of 1,
// which makes it useless for SI lengths and frequencies.
inline doctest::Approx approx(double v) { return doctest::Approx(v).scale(0.0); }
