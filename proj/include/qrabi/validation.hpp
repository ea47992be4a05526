#pragma once

// The acceptance suite: eleven numbered checks against independent oracles.

#include "qrabi/model.hpp"
#include "qrabi/ops.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace qrabi {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string measured;
    std::string expected;
    std::vector<std::string> notes;
    double seconds = 0.0;
};

using Builder = std::function<QMatrix(const ModelParams&, const Truncation&)>;

struct ValidationOptions {
    int workers = 1;
    std::uint64_t seed = 20240611;
    double bias = 1e-8;
    GConvention convention = GConvention::Reconciled;
    /// Reduced-Hamiltonian builders checked by criterion 2; empty means the library's own.
    Builder h0_builder;
    Builder h3_builder;
    /// Criteria to run (1..11); empty runs all of them.
    std::vector<int> only;
};

inline constexpr int kCriterionCount = 11;

/// Runs the selected criteria in order; `on_result` sees each one as soon as it finishes.
std::vector<CriterionResult> run_validation(const ValidationOptions& opts,
                                            const std::function<void(const CriterionResult&)>& on_result = {});

/// One table row: "PASS  7  qpt-energy-curve  measured ... | expected ...  (12.3 s)", notes indented below.
std::string format_result(const CriterionResult& r);

} // namespace qrabi
