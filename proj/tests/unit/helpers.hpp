#ifndef CAUSALCAST_TESTS_HELPERS_HPP
#define CAUSALCAST_TESTS_HELPERS_HPP

#include <vector>

#include "causalcast/graph.hpp"

namespace causalcast::testutil {

inline Dag chain3() { return Dag(3, {{0, 1}, {1, 2}}); }
inline Dag collider3() { return Dag(3, {{0, 1}, {2, 1}}); }
inline Dag fork3() { return Dag(3, {{0, 1}, {0, 2}}); }

// All subsets of {0..n-1} \ {i, j}.
inline std::vector<std::vector<int>> conditioning_sets(int n, int i, int j) {
    std::vector<int> rest;
    for (int v = 0; v < n; ++v) {
        if (v != i && v != j) rest.push_back(v);
    }
    std::vector<std::vector<int>> subsets;
    for (unsigned mask = 0; mask < (1u << rest.size()); ++mask) {
        std::vector<int> z;
        for (std::size_t b = 0; b < rest.size(); ++b) {
            if (mask & (1u << b)) z.push_back(rest[b]);
        }
        subsets.push_back(std::move(z));
    }
    return subsets;
}

}  // namespace causalcast::testutil

#endif
