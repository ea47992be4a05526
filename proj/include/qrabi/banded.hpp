#pragma once

#include "qrabi/ops.hpp"

#include <utility>
#include <vector>

namespace qrabi {

/// Real symmetric band matrix in LAPACK lower storage: lower(i - j, j) = A(i, j)
/// for j <= i <= j + kd. `order[b]` maps band index b to the caller's basis index.
struct BandedSymmetric {
    Index n = 0;
    int kd = 0;
    RMatrix lower;
    std::vector<Index> order;

    double at(Index i, Index j) const {
        if (i < j) std::swap(i, j);
        return i - j > kd ? 0.0 : lower(i - j, j);
    }
};

} // namespace qrabi
