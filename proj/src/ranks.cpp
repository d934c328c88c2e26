#include "maxsum/ranks.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace maxsum {

Vector rank(const Vector& y) {
    const Index n = y.size();
    if (n < 1) throw DimensionError("rank() needs at least one value");
    if (!y.allFinite()) throw NonFiniteError("rank() input contains NaN or Inf");

    std::vector<Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Index{0});
    std::sort(order.begin(), order.end(),
              [&y](Index a, Index b) { return y[a] < y[b]; });

    Vector ranks(n);
    Index i = 0;
    while (i < n) {
        Index j = i;
        while (j + 1 < n && y[order[j + 1]] == y[order[i]]) ++j;
        // positions i..j (0-based) share the midrank
        const double midrank = 0.5 * static_cast<double>(i + j) + 1.0;
        for (Index k = i; k <= j; ++k) ranks[order[k]] = midrank;
        i = j + 1;
    }
    return ranks;
}

ScoreVector wilcoxon_scores(const Vector& y) {
    const Index n = y.size();
    if (n < 2) throw DimensionError("wilcoxon_scores() needs n >= 2");
    const Vector ranks = rank(y);
    const double sqrt12 = std::sqrt(12.0);
    const double scale = 1.0 / static_cast<double>(n + 1);
    ScoreVector score;
    score.e = sqrt12 * (ranks.array() * scale - 0.5);
    return score;
}

}  // namespace maxsum
