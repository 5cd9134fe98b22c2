#include "gsit/config.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

namespace gsit::lab {

model::ModelConfig RunConfig::model_config() const {
    model::ModelConfig cfg;
    cfg.layout = segment_layout();
    cfg.d = d;
    cfg.p = p;
    cfg.heads = heads;
    cfg.out_dim = out_dim;
    cfg.structure = structure;
    cfg.check();
    return cfg;
}

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

std::size_t parse_count(const std::string& v, const std::string& key) {
    try {
        const long long n = std::stoll(v);
        if (n < 0) throw ConfigError(key + " must be non-negative");
        return static_cast<std::size_t>(n);
    } catch (const ConfigError&) {
        throw;
    } catch (...) {
        throw ConfigError("bad integer for " + key + ": " + v);
    }
}

double parse_real(const std::string& v, const std::string& key) {
    try {
        return std::stod(v);
    } catch (...) {
        throw ConfigError("bad number for " + key + ": " + v);
    }
}

std::array<std::size_t, 3> parse_layout(const std::string& v) {
    std::array<std::size_t, 3> out{};
    std::stringstream ss(v);
    std::string part;
    std::size_t i = 0;
    while (std::getline(ss, part, ',')) {
        if (i >= 3) throw ConfigError("layout must have exactly three lengths");
        out[i++] = parse_count(trim(part), "layout");
    }
    if (i != 3) throw ConfigError("layout must have exactly three lengths");
    return out;
}

} // namespace

RunConfig parse_config(std::istream& in) {
    RunConfig cfg;
    std::string section;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        if (t.front() == '[' && t.back() == ']') {
            section = t.substr(1, t.size() - 2);
            if (section != "model" && section != "train" && section != "data")
                throw ConfigError("unknown section [" + section + "] at line " + std::to_string(lineno));
            continue;
        }
        const std::size_t eq = t.find('=');
        if (eq == std::string::npos)
            throw ConfigError("expected key = value at line " + std::to_string(lineno));
        const std::string key = trim(t.substr(0, eq));
        const std::string value = trim(t.substr(eq + 1));
        const std::string scoped = section + "." + key;

        if (scoped == "model.layout") cfg.layout = parse_layout(value);
        else if (scoped == "model.dim") cfg.d = parse_count(value, key);
        else if (scoped == "model.hidden") cfg.p = parse_count(value, key);
        else if (scoped == "model.heads") cfg.heads = parse_count(value, key);
        else if (scoped == "model.out_dim") cfg.out_dim = parse_count(value, key);
        else if (scoped == "model.structure") cfg.structure = mask::structure_from_string(value);
        else if (scoped == "train.seed") cfg.seed = parse_count(value, key);
        else if (scoped == "train.steps") cfg.steps = parse_count(value, key);
        else if (scoped == "train.lr") cfg.lr = parse_real(value, key);
        else if (scoped == "train.batch") cfg.batch = parse_count(value, key);
        else if (scoped == "train.init_std") cfg.init_std = parse_real(value, key);
        else if (scoped == "data.samples") cfg.samples = parse_count(value, key);
        else if (scoped == "data.noise") cfg.noise = parse_real(value, key);
        else throw ConfigError("unknown key '" + key + "' in section [" + section + "]");
    }
    return cfg;
}

RunConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    return parse_config(in);
}

std::string serialize(const RunConfig& cfg) {
    std::ostringstream out;
    out << "[model]\n";
    out << "layout = " << cfg.layout[0] << "," << cfg.layout[1] << "," << cfg.layout[2] << "\n";
    out << "dim = " << cfg.d << "\n";
    out << "hidden = " << cfg.p << "\n";
    out << "heads = " << cfg.heads << "\n";
    out << "out_dim = " << cfg.out_dim << "\n";
    out << "structure = " << mask::to_string(cfg.structure) << "\n";
    out << "[train]\n";
    out << "seed = " << cfg.seed << "\n";
    out << "steps = " << cfg.steps << "\n";
    std::ostringstream lr;
    lr.precision(17);
    lr << cfg.lr;
    out << "lr = " << lr.str() << "\n";
    out << "batch = " << cfg.batch << "\n";
    std::ostringstream is;
    is.precision(17);
    is << cfg.init_std;
    out << "init_std = " << is.str() << "\n";
    out << "[data]\n";
    out << "samples = " << cfg.samples << "\n";
    std::ostringstream ns;
    ns.precision(17);
    ns << cfg.noise;
    out << "noise = " << ns.str() << "\n";
    return out.str();
}

} // namespace gsit::lab
