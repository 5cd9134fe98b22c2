#include "gsit/report.hpp"

namespace gsit::lab {

using model::ModelKind;

Json config_json(const model::ModelConfig& cfg) {
    Json j;
    j["layout"] = {cfg.layout.lengths()[0], cfg.layout.lengths()[1], cfg.layout.lengths()[2]};
    j["dim"] = cfg.d;
    j["hidden"] = cfg.p;
    j["heads"] = cfg.heads;
    j["out_dim"] = cfg.out_dim;
    j["structure"] = mask::to_string(cfg.structure);
    return j;
}

namespace {

Json breakdown_json(const cost::ComplexityBreakdown& b) {
    Json j;
    for (std::size_t c = 0; c < cost::kCounterCount; ++c)
        j[exec::counter_name(static_cast<cost::Counter>(c))] = b.counts[c];
    j["total"] = b.total();
    return j;
}

Json mem_json(const exec::MemMeter& m) {
    Json j;
    j["dense_total"] = m.dense_total;
    j["block_sum"] = m.block_sum;
    j["block_peak"] = m.block_peak;
    return j;
}

} // namespace

Json flops_json(const model::ModelConfig& cfg) {
    Json j;
    j["mult"] = breakdown_json(cost::flops_closed_form(cfg, ModelKind::mult, false));
    j["gsit_decomposed"] = breakdown_json(cost::flops_closed_form(cfg, ModelKind::gsit, true));
    j["gsit_dense"] = breakdown_json(cost::flops_closed_form(cfg, ModelKind::gsit, false));
    return j;
}

Json memory_json(const model::ModelConfig& cfg) {
    const mask::PatternPair pair = mask::fusion_patterns(cfg.structure);
    Json j;
    j["stage1_forward"] = mem_json(exec::memory_report(cfg.layout, pair.forward, cfg.heads));
    j["stage1_backward"] = mem_json(exec::memory_report(cfg.layout, pair.backward, cfg.heads));
    j["stage2_intra"] = mem_json(exec::memory_report(cfg.layout, mask::intra_pattern(), cfg.heads));
    return j;
}

Json params_json(const model::ModelConfig& cfg) {
    const std::uint64_t gsit = cost::gsit_fusion_params(cfg.d, cfg.p);
    const std::uint64_t mult = cost::mult_fusion_params(cfg.d, cfg.p);
    Json j;
    j["mult"] = mult;
    j["gsit"] = gsit;
    j["ratio"] = static_cast<double>(mult) / static_cast<double>(gsit);
    return j;
}

Json suites_json(const std::vector<SuiteResult>& suites) {
    Json j;
    for (const SuiteResult& s : suites) {
        Json entry;
        entry["pass"] = s.pass;
        entry["max_abs_diff"] = s.max_abs_diff;
        entry["details"] = s.details;
        j[s.name] = entry;
    }
    return j;
}

Json disorder_json(const DisorderReport& report) {
    Json j;
    j["deviation"] = report.deviation;
    j["row_deviation"] = report.row_deviation;
    j["identity_residual"] = report.identity_residual;
    j["verdict"] = report.disorder_detected ? "disorder" : "none";
    return j;
}

Json verify_report(const model::ModelConfig& cfg, const std::vector<SuiteResult>& suites) {
    Json j;
    j["config"] = config_json(cfg);
    j["suites"] = suites_json(suites);
    j["flops"] = flops_json(cfg);
    j["memory"] = memory_json(cfg);
    j["params"] = params_json(cfg);
    return j;
}

Json bench_report(const model::ModelConfig& cfg) {
    Json j;
    j["config"] = config_json(cfg);
    j["flops"] = flops_json(cfg);
    j["memory"] = memory_json(cfg);
    j["params"] = params_json(cfg);
    return j;
}

} // namespace gsit::lab
