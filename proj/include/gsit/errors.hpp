#ifndef GSIT_ERRORS_HPP
#define GSIT_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace gsit {

// Dimension or layout mismatch between operands.
struct ShapeError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// A softmax row (or a graph vertex neighborhood) with no finite entry.
struct DegenerateRowError : std::domain_error {
    DegenerateRowError(const std::string& what, std::size_t row)
        : std::domain_error(what + " (row " + std::to_string(row) + ")"), row_index(row) {}
    std::size_t row_index;
};

// An operation was called outside its contract (e.g. non-scalar loss).
struct ContractError : std::logic_error {
    using std::logic_error::logic_error;
};

// Skewness/kurtosis requested for a distribution with ~zero variance.
struct DegenerateDistributionError : std::domain_error {
    using std::domain_error::domain_error;
};

// Meter misuse: a second forward pass recorded without reset.
struct AccountingError : std::logic_error {
    using std::logic_error::logic_error;
};

// Bad run configuration (file or flags).
struct ConfigError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Training loss became non-finite.
struct DivergenceError : std::runtime_error {
    DivergenceError(std::size_t step)
        : std::runtime_error("training loss non-finite at step " + std::to_string(step)), step_index(step) {}
    std::size_t step_index;
};

} // namespace gsit

#endif
