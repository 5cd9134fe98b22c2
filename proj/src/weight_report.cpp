#include "gsit/weight_report.hpp"

#include <set>

namespace gsit::lab {

std::vector<double> flatten(const attn::EncoderWeights& w) {
    std::vector<double> out;
    out.reserve(w.param_count());
    for (const num::Tensor2* t : {&w.w_q, &w.w_k, &w.w_v, &w.w_1, &w.w_2})
        out.insert(out.end(), t->flat().begin(), t->flat().end());
    return out;
}

namespace {

EncoderReport report_values(std::string name, const std::vector<double>& values) {
    EncoderReport r;
    r.name = std::move(name);
    r.parameter_count = values.size();
    r.stats = num::moments(values);
    r.degenerate = r.stats.degenerate();
    return r;
}

std::vector<EncoderReport> assemble(
    const std::vector<std::pair<std::string, const attn::EncoderWeights*>>& encoders,
    const num::Tensor2& f) {
    std::vector<EncoderReport> out;
    std::vector<double> all;
    std::set<const attn::EncoderWeights*> seen;
    for (const auto& [name, enc] : encoders) {
        if (!seen.insert(enc).second) continue;
        const std::vector<double> values = flatten(*enc);
        out.push_back(report_values(name, values));
        all.insert(all.end(), values.begin(), values.end());
    }
    all.insert(all.end(), f.flat().begin(), f.flat().end());
    out.push_back(report_values("all", all));
    return out;
}

} // namespace

std::vector<EncoderReport> weight_report(const model::GsitWeights& w) {
    return assemble({{"forward", w.forward.get()}, {"backward", w.backward.get()}, {"intra", w.intra.get()}},
                    *w.f);
}

std::vector<EncoderReport> weight_report(const model::MultWeights& w) {
    std::vector<std::pair<std::string, const attn::EncoderWeights*>> encoders;
    for (const auto& [key, enc] : w.cross)
        encoders.emplace_back(
            std::string("cross_") + mask::short_name(key.first) + mask::short_name(key.second),
            enc.get());
    for (std::size_t i = 0; i < 3; ++i)
        encoders.emplace_back(std::string("self_") + mask::short_name(mask::modality_from_index(i)),
                              w.self_enc[i].get());
    return assemble(encoders, *w.f);
}

} // namespace gsit::lab
