#include "pftg/config.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <tuple>

namespace pftg {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

struct RawConfig {
    std::map<std::string, std::pair<std::string, int>> kv; // key -> (value, line)
};

RawConfig tokenize(const std::string& text) {
    RawConfig raw;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        std::size_t eq = line.find('=');
        if (eq == std::string::npos) throw ParseError(lineno, "expected `key = value`");
        std::string key = trim(line.substr(0, eq));
        std::string val = trim(line.substr(eq + 1));
        if (key.empty()) throw ParseError(lineno, "empty key");
        if (val.empty()) throw ParseError(lineno, "empty value for key `" + key + "`");
        if (raw.kv.count(key)) throw ParseError(lineno, "duplicate key `" + key + "`");
        raw.kv[key] = {val, lineno};
    }
    return raw;
}

class Reader {
  public:
    explicit Reader(RawConfig raw) : raw_(std::move(raw)) {}

    bool has(const std::string& key) const { return raw_.kv.count(key) != 0; }

    double number(const std::string& key, double def) {
        if (!has(key)) return def;
        auto [val, line] = take(key);
        const char* s = val.c_str();
        char* end = nullptr;
        double x = std::strtod(s, &end);
        if (end == s || *end != '\0') throw ParseError(line, "`" + key + "`: not a number");
        return x;
    }

    double required_number(const std::string& key) {
        if (!has(key)) throw ValidationError("missing required key `" + key + "`");
        return number(key, 0);
    }

    long integer(const std::string& key, long def) {
        if (!has(key)) return def;
        auto [val, line] = take(key);
        const char* s = val.c_str();
        char* end = nullptr;
        long x = std::strtol(s, &end, 10);
        if (end == s || *end != '\0') throw ParseError(line, "`" + key + "`: not an integer");
        return x;
    }

    bool boolean(const std::string& key, bool def) {
        if (!has(key)) return def;
        auto [val, line] = take(key);
        if (val == "true") return true;
        if (val == "false") return false;
        throw ParseError(line, "`" + key + "`: expected true or false");
    }

    std::string word(const std::string& key, const std::string& def) {
        if (!has(key)) return def;
        return take(key).first;
    }

    std::vector<double> number_list(const std::string& key) {
        auto [val, line] = take(key);
        std::vector<double> out;
        std::stringstream ss(val);
        std::string item;
        while (std::getline(ss, item, ',')) {
            item = trim(item);
            const char* s = item.c_str();
            char* end = nullptr;
            double x = std::strtod(s, &end);
            if (item.empty() || end == s || *end != '\0')
                throw ParseError(line, "`" + key + "`: not a number list");
            out.push_back(x);
        }
        return out;
    }

    void finish() const {
        for (const auto& [key, vl] : raw_.kv)
            if (!used_.count(key)) throw ParseError(vl.second, "unknown key `" + key + "`");
    }

  private:
    std::pair<std::string, int> take(const std::string& key) {
        used_.insert(key);
        return raw_.kv.at(key);
    }
    RawConfig raw_;
    std::set<std::string> used_;
};

FieldInit parse_field_init(Reader& r, const std::string& prefix) {
    FieldInit fi;
    std::string kind = r.word(prefix + ".kind", "constant");
    if (kind == "constant") {
        fi.kind = FieldInit::Kind::Constant;
        fi.value = r.number(prefix + ".value", 0.0);
    } else if (kind == "noise") {
        fi.kind = FieldInit::Kind::Noise;
        fi.mean = r.number(prefix + ".mean", 0.0);
        fi.amplitude = r.number(prefix + ".amplitude", 0.0);
    } else if (kind == "tanh") {
        fi.kind = FieldInit::Kind::Tanh;
        fi.x0 = r.number(prefix + ".x0", 0.5);
        fi.width = r.number(prefix + ".width", 0.1);
    } else {
        throw ValidationError("`" + prefix + ".kind` must be constant, noise or tanh");
    }
    return fi;
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void emit_field_init(std::ostringstream& out, const std::string& prefix, const FieldInit& fi) {
    switch (fi.kind) {
    case FieldInit::Kind::Constant:
        out << prefix << ".kind = constant\n" << prefix << ".value = " << fmt(fi.value) << "\n";
        break;
    case FieldInit::Kind::Noise:
        out << prefix << ".kind = noise\n"
            << prefix << ".mean = " << fmt(fi.mean) << "\n"
            << prefix << ".amplitude = " << fmt(fi.amplitude) << "\n";
        break;
    case FieldInit::Kind::Tanh:
        out << prefix << ".kind = tanh\n"
            << prefix << ".x0 = " << fmt(fi.x0) << "\n"
            << prefix << ".width = " << fmt(fi.width) << "\n";
        break;
    }
}

} // namespace

void RunConfig::validate() const {
    solver.validate();
    (void)make_grid();
    if (!(t_end > 0)) throw ValidationError("t_end must be > 0");
    if (snapshot_every < 0) throw ValidationError("snapshot_every must be >= 0");
    if (!(steady_threshold > 0)) throw ValidationError("steady.threshold must be > 0");
}

bool RunConfig::operator==(const RunConfig& o) const {
    auto key = [](const RunConfig& c) {
        return std::tuple(c.solver.alpha, c.solver.gamma, c.solver.potential.kind,
                          c.solver.potential.eps, c.solver.potential.kappa,
                          c.solver.proliferation.kind, c.solver.proliferation.value,
                          c.solver.proliferation.p0, c.solver.dt, c.solver.tol_newton,
                          c.solver.tol_lin, c.solver.max_newton, c.solver.solver_kind, c.dim, c.n,
                          c.length, c.init, c.t_end, c.snapshot_every, c.seed, c.output_dir,
                          c.steady_detect, c.steady_threshold, c.steady_stop);
    };
    return key(*this) == key(o);
}

RunConfig parse_config(const std::string& text) {
    Reader r(tokenize(text));
    RunConfig cfg;

    cfg.solver.alpha = r.required_number("alpha");
    cfg.solver.gamma = r.required_number("gamma");
    cfg.solver.dt = r.required_number("dt");
    cfg.t_end = r.required_number("t_end");

    std::string pk = r.word("potential.kind", "");
    if (pk == "quartic")
        cfg.solver.potential.kind = PotentialKind::Quartic;
    else if (pk == "logarithmic")
        cfg.solver.potential.kind = PotentialKind::Logarithmic;
    else if (pk == "double_obstacle")
        cfg.solver.potential.kind = PotentialKind::DoubleObstacle;
    else if (pk.empty())
        throw ValidationError("missing required key `potential.kind`");
    else
        throw ValidationError("`potential.kind` must be quartic, logarithmic or double_obstacle");
    cfg.solver.potential.eps = r.required_number("potential.eps");
    cfg.solver.potential.kappa = r.number("potential.kappa", 0.0);

    std::string prk = r.word("proliferation.kind", "constant");
    if (prk == "constant") {
        cfg.solver.proliferation.kind = ProliferationSpec::Kind::Constant;
        cfg.solver.proliferation.value = r.number("proliferation.value", 0.0);
    } else if (prk == "sqrt_w") {
        cfg.solver.proliferation.kind = ProliferationSpec::Kind::SqrtW;
        cfg.solver.proliferation.p0 = r.number("proliferation.p0", 1.0);
    } else {
        throw ValidationError("`proliferation.kind` must be constant or sqrt_w");
    }

    cfg.solver.tol_newton = r.number("tol_newton", 1e-10);
    cfg.solver.tol_lin = r.number("tol_lin", 1e-11);
    cfg.solver.max_newton = int(r.integer("max_newton", 50));

    std::string sk = r.word("solver.kind", "cg");
    if (sk == "cg")
        cfg.solver.solver_kind = LinearMethod::CG;
    else if (sk == "cosine_transform")
        cfg.solver.solver_kind = LinearMethod::CosineTransform;
    else
        throw ValidationError("`solver.kind` must be cg or cosine_transform");

    cfg.dim = int(r.integer("grid.dim", 0));
    if (cfg.dim == 0) throw ValidationError("missing required key `grid.dim`");
    auto ns = r.has("grid.n") ? r.number_list("grid.n") : std::vector<double>{};
    auto ls = r.has("grid.length") ? r.number_list("grid.length") : std::vector<double>{};
    if (int(ns.size()) != cfg.dim)
        throw ValidationError("`grid.n` must list one cell count per axis");
    if (int(ls.size()) != cfg.dim)
        throw ValidationError("`grid.length` must list one length per axis");
    for (int a = 0; a < cfg.dim; ++a) {
        if (ns[a] != double(long(ns[a]))) throw ValidationError("`grid.n` entries must be integers");
        cfg.n[a] = int(ns[a]);
        cfg.length[a] = ls[a];
    }
    for (int a = cfg.dim; a < 3; ++a) {
        cfg.n[a] = 1;
        cfg.length[a] = 1;
    }

    cfg.init.file = r.word("init.file", "");
    cfg.init.mu = parse_field_init(r, "init.mu");
    cfg.init.u = parse_field_init(r, "init.u");
    cfg.init.sigma = parse_field_init(r, "init.sigma");

    cfg.snapshot_every = r.integer("snapshot_every", 0);
    cfg.seed = (unsigned long long)r.integer("seed", 0);
    cfg.output_dir = r.word("output_dir", "out");
    cfg.steady_detect = r.boolean("steady.detect", false);
    cfg.steady_threshold = r.number("steady.threshold", 1e-6);
    cfg.steady_stop = r.boolean("steady.stop", true);

    r.finish();
    cfg.validate();
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open config file `" + path + "`");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string serialize_config(const RunConfig& cfg) {
    std::ostringstream out;
    out << "alpha = " << fmt(cfg.solver.alpha) << "\n";
    out << "gamma = " << fmt(cfg.solver.gamma) << "\n";
    out << "dt = " << fmt(cfg.solver.dt) << "\n";
    out << "t_end = " << fmt(cfg.t_end) << "\n";
    out << "potential.kind = " << to_string(cfg.solver.potential.kind) << "\n";
    out << "potential.eps = " << fmt(cfg.solver.potential.eps) << "\n";
    if (cfg.solver.potential.kind == PotentialKind::Logarithmic)
        out << "potential.kappa = " << fmt(cfg.solver.potential.kappa) << "\n";
    if (cfg.solver.proliferation.kind == ProliferationSpec::Kind::Constant) {
        out << "proliferation.kind = constant\n";
        out << "proliferation.value = " << fmt(cfg.solver.proliferation.value) << "\n";
    } else {
        out << "proliferation.kind = sqrt_w\n";
        out << "proliferation.p0 = " << fmt(cfg.solver.proliferation.p0) << "\n";
    }
    out << "tol_newton = " << fmt(cfg.solver.tol_newton) << "\n";
    out << "tol_lin = " << fmt(cfg.solver.tol_lin) << "\n";
    out << "max_newton = " << cfg.solver.max_newton << "\n";
    out << "solver.kind = "
        << (cfg.solver.solver_kind == LinearMethod::CG ? "cg" : "cosine_transform") << "\n";
    out << "grid.dim = " << cfg.dim << "\n";
    out << "grid.n = ";
    for (int a = 0; a < cfg.dim; ++a) out << (a ? "," : "") << cfg.n[a];
    out << "\n";
    out << "grid.length = ";
    for (int a = 0; a < cfg.dim; ++a) out << (a ? "," : "") << fmt(cfg.length[a]);
    out << "\n";
    if (!cfg.init.file.empty()) out << "init.file = " << cfg.init.file << "\n";
    emit_field_init(out, "init.mu", cfg.init.mu);
    emit_field_init(out, "init.u", cfg.init.u);
    emit_field_init(out, "init.sigma", cfg.init.sigma);
    out << "snapshot_every = " << cfg.snapshot_every << "\n";
    out << "seed = " << cfg.seed << "\n";
    out << "output_dir = " << cfg.output_dir << "\n";
    out << "steady.detect = " << (cfg.steady_detect ? "true" : "false") << "\n";
    out << "steady.threshold = " << fmt(cfg.steady_threshold) << "\n";
    out << "steady.stop = " << (cfg.steady_stop ? "true" : "false") << "\n";
    return out.str();
}

} // namespace pftg
