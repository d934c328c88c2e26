#pragma once

#include "maxsum/model.hpp"

namespace maxsum {

// Centered, scaled rank transform of the response. For untied data
// sum(e) = 0 and sum(e_i^2) = n(n-1)/(n+1) hold as identities; with midranks
// for ties the first stays exact and the second only approximate.
struct ScoreVector {
    Vector e;
    Index n() const { return e.size(); }
};

// Midranks: for untied data a permutation of 1..n; ties receive the average
// of the ranks they span.
Vector rank(const Vector& y);

// e_i = sqrt(12) * (R_i/(n+1) - 1/2).
ScoreVector wilcoxon_scores(const Vector& y);

}  // namespace maxsum
