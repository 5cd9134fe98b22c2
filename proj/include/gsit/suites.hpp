#ifndef GSIT_SUITES_HPP
#define GSIT_SUITES_HPP

#include <string>
#include <vector>

#include "gsit/config.hpp"

namespace gsit::lab {

struct SuiteResult {
    std::string name;
    bool pass = false;
    double max_abs_diff = 0.0; // worst deviation observed, where applicable
    std::string details;
};

// Equivalence of per-vertex graph aggregation with the attention path:
// bipartite graphs against cross attention, complete graphs with
// self-loops against self attention. 100 seeded instances.
SuiteResult graph_equivalence_suite();

// Tied-weight equivalence of the shared-tree and forest models over 100
// seeded configs, plus the untied negative control.
SuiteResult tied_equivalence_suite();

// Block-sparse execution against the dense masked encoder for every
// structure's streams, 50 seeds each.
SuiteResult decomposition_suite();

// Exact 3x fusion-parameter ratio across (d, p, heads) draws.
SuiteResult param_ratio_suite();

// Instrumented FLOP parity between the forest model and the decomposed
// shared-tree model, and meter/closed-form reconciliation for both.
SuiteResult flop_parity_suite();

// Attention-map memory parity over 20 random layouts.
SuiteResult memory_parity_suite();

// Restriction identity and disorder deviation over 50 seeds.
SuiteResult disorder_suite();

// Finite-difference checks for every tape primitive and the full
// shared-tree loss.
SuiteResult gradient_suite();

// Golden Allow-set fixtures for the six structures and validate().
SuiteResult mask_fixture_suite();

// Convergence of both trainable models at the fixed run config, with a
// bit-identical rerun. Not part of `verify`; used by the acceptance tests.
SuiteResult training_suite(const RunConfig& cfg, double mse_threshold);

// Suites behind one `verify` selection name, in reporting order.
std::vector<SuiteResult> run_suites(const std::string& selection); // throws ConfigError

} // namespace gsit::lab

#endif
