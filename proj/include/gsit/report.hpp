#ifndef GSIT_REPORT_HPP
#define GSIT_REPORT_HPP

#include <string>
#include <vector>

#include <json.hpp>

#include "gsit/complexity.hpp"
#include "gsit/disorder.hpp"
#include "gsit/suites.hpp"

namespace gsit::lab {

using Json = nlohmann::ordered_json;

Json config_json(const model::ModelConfig& cfg);
Json flops_json(const model::ModelConfig& cfg);   // mult / gsit_decomposed / gsit_dense phase maps
Json memory_json(const model::ModelConfig& cfg);  // per-stream dense/block_sum/block_peak
Json params_json(const model::ModelConfig& cfg);  // mult, gsit, ratio
Json suites_json(const std::vector<SuiteResult>& suites);
Json disorder_json(const DisorderReport& report);

// Full report: config, suites, flops, memory, params.
Json verify_report(const model::ModelConfig& cfg, const std::vector<SuiteResult>& suites);
// Same minus suites.
Json bench_report(const model::ModelConfig& cfg);

} // namespace gsit::lab

#endif
