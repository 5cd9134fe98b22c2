#include "gsit/cli.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "gsit/report.hpp"
#include "gsit/train.hpp"

namespace gsit::lab {

namespace {

std::array<std::size_t, 3> parse_layout_arg(const std::string& text) {
    std::array<std::size_t, 3> out{};
    std::stringstream ss(text);
    std::string part;
    std::size_t i = 0;
    while (std::getline(ss, part, ',')) {
        if (i >= 3) throw ConfigError("layout must be three comma-separated lengths");
        out[i++] = static_cast<std::size_t>(std::stoull(part));
    }
    if (i != 3) throw ConfigError("layout must be three comma-separated lengths");
    return out;
}

std::string mask_value_text(double v) { return v == 0.0 ? "0" : "-inf"; }

void emit_masks(std::ostream& out, mask::StructureName structure, const mask::SegmentLayout& layout,
                const std::string& format) {
    out << "structure " << mask::to_string(structure) << ", layout " << layout.to_string() << "\n";
    for (const auto& [label, pattern] : mask::patterns_of(structure)) {
        out << label << "\n";
        const num::Tensor2 m = mask::materialize(pattern, layout);
        for (std::size_t r = 0; r < m.rows(); ++r) {
            std::string line;
            for (std::size_t c = 0; c < m.cols(); ++c) {
                if (format == "ascii") {
                    line += (m(r, c) == 0.0) ? 'O' : 'J';
                } else {
                    if (c) line += ',';
                    line += mask_value_text(m(r, c));
                }
            }
            out << line << "\n";
        }
    }
}

int run_verify(const std::string& suite, std::ostream& out) {
    const std::vector<SuiteResult> suites = run_suites(suite);
    model::ModelConfig report_cfg;
    report_cfg.layout = mask::SegmentLayout(2, 3, 4);
    report_cfg.d = 8;
    report_cfg.p = 16;
    report_cfg.heads = 1;
    out << verify_report(report_cfg, suites).dump(2) << "\n";
    for (const SuiteResult& s : suites)
        if (!s.pass) return 1;
    return 0;
}

int run_train(const RunConfig& cfg, const std::string& model_name, const std::string& out_path,
              const std::string& weights_path, std::ostream& out) {
    const model::ModelKind kind = model::model_kind_from_string(model_name);
    const TrainResult result = train_model(kind, cfg);

    if (!out_path.empty()) {
        std::ofstream curve(out_path);
        if (!curve) throw ConfigError("cannot open curve file: " + out_path);
        write_curve_csv(curve, result);
    } else {
        write_curve_csv(out, result);
    }
    if (!weights_path.empty()) save_trained_weights(weights_path, cfg, result);

    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", result.final_full_mse);
    out << "final_mse " << buf << "\n";
    return 0;
}

} // namespace

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"interlaced-masked multimodal transformer laboratory"};
    app.require_subcommand(1);

    // verify
    std::string suite = "all";
    CLI::App* verify = app.add_subcommand("verify", "run the verification suites and emit a report");
    verify->add_option("--suite", suite, "all|equiv|graph|decomp|flops|grad|masks|disorder")
        ->default_val("all");

    // bench
    std::string bench_layout;
    std::size_t bench_dim = 8, bench_hidden = 0, bench_heads = 1;
    std::string bench_emit = "json";
    CLI::App* bench = app.add_subcommand("bench", "closed-form cost and memory report");
    bench->add_option("--layout", bench_layout, "a,b,c segment lengths")->required();
    bench->add_option("--dim", bench_dim, "model width")->required();
    bench->add_option("--hidden", bench_hidden, "MLP hidden width (default 2*dim)");
    bench->add_option("--heads", bench_heads, "head count");
    bench->add_option("--emit", bench_emit, "json");

    // train
    std::string train_model_name, train_structure, train_out, train_weights, train_config;
    std::size_t train_steps = 0, train_batch = 0, train_samples = 0, train_heads = 0;
    std::string train_layout;
    std::size_t train_dim = 0, train_hidden = 0;
    double train_lr = 0.05, train_noise = 0.3;
    long long train_seed = -1;
    CLI::App* train = app.add_subcommand("train", "SGD on the synthetic fusion task");
    train->add_option("--model", train_model_name, "gsit|mult|naive")->required();
    train->add_option("--structure", train_structure, "original|s1|s2|s3|self_only");
    train->add_option("--steps", train_steps, "SGD steps");
    train->add_option("--lr", train_lr, "learning rate");
    train->add_option("--seed", train_seed, "seed");
    train->add_option("--batch", train_batch, "batch size (0 = full)");
    train->add_option("--samples", train_samples, "dataset size");
    train->add_option("--noise", train_noise, "injection noise");
    train->add_option("--layout", train_layout, "a,b,c segment lengths");
    train->add_option("--dim", train_dim, "model width");
    train->add_option("--hidden", train_hidden, "MLP hidden width");
    train->add_option("--heads", train_heads, "head count");
    train->add_option("--out", train_out, "loss curve CSV path (stdout when omitted)");
    train->add_option("--weights-out", train_weights, "checkpoint path");
    train->add_option("--config", train_config, "config file; flags override file values");

    // masks
    std::string masks_structure, masks_layout = "1,1,1", masks_emit = "ascii";
    CLI::App* masks = app.add_subcommand("masks", "emit a structure's patterns");
    masks->add_option("--structure", masks_structure, "original|s1|s2|s3|self_only|iem")->required();
    masks->add_option("--layout", masks_layout, "a,b,c segment lengths");
    masks->add_option("--emit", masks_emit, "ascii|csv");

    // disorder
    long long disorder_seed = 1;
    std::string disorder_layout = "3,4,5";
    std::size_t disorder_dim = 8, disorder_heads = 1;
    CLI::App* disorder = app.add_subcommand("disorder", "normalization-widening demonstration");
    disorder->add_option("--seed", disorder_seed, "seed");
    disorder->add_option("--layout", disorder_layout, "a,b,c segment lengths");
    disorder->add_option("--dim", disorder_dim, "model width");
    disorder->add_option("--heads", disorder_heads, "head count");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << e.what() << "\n";
        return 2;
    }

    try {
        if (verify->parsed()) return run_verify(suite, out);

        if (bench->parsed()) {
            if (bench_emit != "json") throw ConfigError("bench emits json only");
            model::ModelConfig cfg;
            const auto l = parse_layout_arg(bench_layout);
            cfg.layout = mask::SegmentLayout(l[0], l[1], l[2]);
            cfg.d = bench_dim;
            cfg.p = bench_hidden == 0 ? 2 * bench_dim : bench_hidden;
            cfg.heads = bench_heads;
            cfg.check();
            out << bench_report(cfg).dump(2) << "\n";
            return 0;
        }

        if (train->parsed()) {
            RunConfig cfg;
            if (!train_config.empty()) cfg = parse_config_file(train_config);
            if (!train_structure.empty()) cfg.structure = mask::structure_from_string(train_structure);
            if (train->count("--steps")) cfg.steps = train_steps;
            if (train->count("--lr")) cfg.lr = train_lr;
            if (train->count("--seed")) {
                if (train_seed < 0) throw ConfigError("seed must be non-negative");
                cfg.seed = static_cast<std::uint64_t>(train_seed);
            }
            if (train->count("--batch")) cfg.batch = train_batch;
            if (train->count("--samples")) cfg.samples = train_samples;
            if (train->count("--noise")) cfg.noise = train_noise;
            if (!train_layout.empty()) cfg.layout = parse_layout_arg(train_layout);
            if (train->count("--dim")) cfg.d = train_dim;
            if (train->count("--hidden")) cfg.p = train_hidden;
            if (train->count("--heads")) cfg.heads = train_heads;
            return run_train(cfg, train_model_name, train_out, train_weights, out);
        }

        if (masks->parsed()) {
            if (masks_emit != "ascii" && masks_emit != "csv")
                throw ConfigError("masks --emit must be ascii or csv");
            const auto l = parse_layout_arg(masks_layout);
            emit_masks(out, mask::structure_from_string(masks_structure),
                       mask::SegmentLayout(l[0], l[1], l[2]), masks_emit);
            return 0;
        }

        if (disorder->parsed()) {
            const auto l = parse_layout_arg(disorder_layout);
            const mask::SegmentLayout layout(l[0], l[1], l[2]);
            const DisorderReport report =
                disorder_demo(static_cast<std::uint64_t>(disorder_seed), layout, disorder_dim,
                              disorder_heads);
            Json j;
            Json cfg;
            cfg["seed"] = disorder_seed;
            cfg["layout"] = {l[0], l[1], l[2]};
            cfg["dim"] = disorder_dim;
            cfg["heads"] = disorder_heads;
            j["config"] = cfg;
            j.update(disorder_json(report));
            out << j.dump(2) << "\n";
            return 0;
        }
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const ContractError& e) {
        // Bad flag combinations surface as precondition violations.
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const DivergenceError& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }

    err << "usage error: no subcommand\n";
    return 2;
}

} // namespace gsit::lab
