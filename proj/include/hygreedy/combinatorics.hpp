#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "hygreedy/common.hpp"

namespace hygreedy {

// Exact C(n, k), clamped to INT64_MAX on overflow.
inline std::int64_t binomial(std::int64_t n, std::int64_t k) {
    if (k < 0 || k > n) return 0;
    if (k > n - k) k = n - k;
    unsigned __int128 acc = 1;
    for (std::int64_t i = 1; i <= k; ++i) {
        acc = acc * static_cast<unsigned __int128>(n - k + i);
        acc /= static_cast<unsigned __int128>(i);
        if (acc > static_cast<unsigned __int128>(std::numeric_limits<std::int64_t>::max()))
            return std::numeric_limits<std::int64_t>::max();
    }
    return static_cast<std::int64_t>(acc);
}

// Colexicographic rank of a strictly increasing k-subset:
// rank = sum_j C(s_j, j+1). Rank 0 is {0,...,k-1}.
inline std::int64_t subset_rank(std::span<const Vertex> sorted) {
    std::int64_t rank = 0;
    for (std::size_t j = 0; j < sorted.size(); ++j)
        rank += binomial(sorted[j], static_cast<std::int64_t>(j) + 1);
    return rank;
}

inline std::vector<Vertex> subset_unrank(std::int64_t rank, int k) {
    require_input(rank >= 0 && k >= 1, "subset_unrank needs rank >= 0 and k >= 1");
    std::vector<Vertex> out(k);
    for (int j = k; j >= 1; --j) {
        Vertex s = static_cast<Vertex>(j) - 1;
        while (binomial(s + 1, j) <= rank) ++s;
        out[j - 1] = s;
        rank -= binomial(s, j);
    }
    return out;
}

}  // namespace hygreedy
