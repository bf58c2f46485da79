#include "normcount/config.hpp"

#include "normcount/errors.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <fstream>
#include <sstream>

namespace normcount {

namespace {

namespace pt = boost::property_tree;

std::vector<u64> parse_list(const std::string& text) {
    std::string cleaned;
    for (char ch : text) cleaned += (ch == '[' || ch == ']' || ch == ',' || ch == ';') ? ' ' : ch;
    std::istringstream in(cleaned);
    std::vector<u64> out;
    std::string tok;
    while (in >> tok) {
        try {
            std::size_t used = 0;
            const long long v = std::stoll(tok, &used);
            if (used != tok.size() || v <= 0) throw InvalidArgument("");
            out.push_back(static_cast<u64>(v));
        } catch (const std::exception&) {
            throw InvalidArgument("config: bad entry '" + tok + "' in H");
        }
    }
    return out;
}

bool parse_bool(const std::string& v) {
    if (v == "true" || v == "yes" || v == "1") return true;
    if (v == "false" || v == "no" || v == "0") return false;
    throw InvalidArgument("config: expected a boolean, got '" + v + "'");
}

template <class T>
T get_number(const pt::ptree& sec, const std::string& key) {
    const std::string v = sec.get<std::string>(key);
    try {
        std::size_t used = 0;
        T out;
        if constexpr (std::is_floating_point_v<T>) {
            out = static_cast<T>(std::stod(v, &used));
        } else {
            out = static_cast<T>(std::stoll(v, &used));
        }
        if (used != v.size()) throw InvalidArgument("");
        return out;
    } catch (const std::exception&) {
        throw InvalidArgument("config: bad value '" + v + "' for " + key);
    }
}

void reject_unknown(const pt::ptree& sec, const std::string& name, std::initializer_list<const char*> keys) {
    for (const auto& [k, v] : sec) {
        bool known = false;
        for (const char* key : keys) known = known || k == key;
        if (!known) throw InvalidArgument("config: unknown key '" + k + "' in [" + name + "]");
    }
}

// drops "# ..." after whitespace on a line; full-line comments are left to the ini parser
std::string strip_trailing_comments(const std::string& text) {
    std::istringstream lines(text);
    std::string out, line;
    while (std::getline(lines, line)) {
        for (std::size_t i = 1; i < line.size(); ++i) {
            if (line[i] == '#' && (line[i - 1] == ' ' || line[i - 1] == '\t')) {
                line.erase(i);
                break;
            }
        }
        out += line;
        out += '\n';
    }
    return out;
}

} // namespace

Config parse_config(const std::string& text) {
    pt::ptree tree;
    std::istringstream in(strip_trailing_comments(text));
    try {
        pt::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
        throw InvalidArgument(std::string("config: ") + e.what());
    }
    Config cfg;
    for (const auto& [name, sec] : tree) {
        if (sec.empty() && !sec.data().empty()) throw InvalidArgument("config: key '" + name + "' outside a section");
        if (name == "field") {
            reject_unknown(sec, name, {"q", "H", "pid", "negative_norms"});
            if (!sec.count("q") || !sec.count("H")) throw InvalidArgument("config: [field] needs q and H");
            const i64 q = get_number<i64>(sec, "q");
            if (q < 3) throw InvalidArgument("config: q must be at least 3");
            const auto H = parse_list(sec.get<std::string>("H"));
            FieldSpec spec = make_field_spec(static_cast<u64>(q), H, false);
            const auto table = known_pid(spec);
            if (sec.count("pid")) {
                spec.pid = parse_bool(sec.get<std::string>("pid"));
                if (table && *table != spec.pid) {
                    throw InvalidArgument("config: pid = " + std::string(spec.pid ? "true" : "false") +
                                          " contradicts the built-in class number table");
                }
            } else {
                spec.pid = table.value_or(false);
            }
            cfg.field = spec;
            if (sec.count("negative_norms")) {
                cfg.negative_norms = parse_negative_norms(sec.get<std::string>("negative_norms"));
            }
        } else if (name == "form") {
            reject_unknown(sec, name, {"a", "b", "c"});
            cfg.form = make_form_spec(sec.count("a") ? get_number<i64>(sec, "a") : 0,
                                      sec.count("b") ? get_number<i64>(sec, "b") : 0,
                                      sec.count("c") ? get_number<i64>(sec, "c") : 0);
        } else if (name == "engine") {
            reject_unknown(sec, name,
                           {"B", "strategy", "threads", "memory_budget_mib", "beta", "eps0", "eta", "w0_min"});
            if (sec.count("B")) {
                cfg.B = get_number<i64>(sec, "B");
                cfg.sweep.B = *cfg.B;
            }
            if (sec.count("strategy")) cfg.sweep.strategy = parse_strategy(sec.get<std::string>("strategy"));
            if (sec.count("threads")) {
                const i64 t = get_number<i64>(sec, "threads");
                if (t < 0) throw InvalidArgument("config: threads must be >= 0");
                cfg.sweep.threads = static_cast<unsigned>(t);
            }
            if (sec.count("memory_budget_mib")) {
                const i64 m = get_number<i64>(sec, "memory_budget_mib");
                if (m <= 0) throw InvalidArgument("config: memory_budget_mib must be positive");
                cfg.sweep.memory_budget = static_cast<u64>(m) << 20;
            }
            if (sec.count("beta")) cfg.pipeline.beta = get_number<double>(sec, "beta");
            if (sec.count("eps0")) cfg.pipeline.eps0 = get_number<double>(sec, "eps0");
            if (sec.count("eta")) cfg.pipeline.eta = get_number<double>(sec, "eta");
            if (sec.count("w0_min")) cfg.pipeline.w0_min = static_cast<u64>(get_number<i64>(sec, "w0_min"));
        } else {
            throw InvalidArgument("config: unknown section [" + name + "]");
        }
    }
    cfg.pipeline.sweep = cfg.sweep;
    return cfg;
}

Config load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidArgument("config: cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

Config merge_config(Config base, const Config& other) {
    if (other.field) {
        base.field = other.field;
        base.negative_norms = other.negative_norms;
    }
    if (other.form) base.form = other.form;
    if (other.B) {
        base.B = other.B;
        base.sweep = other.sweep;
        base.pipeline = other.pipeline;
    }
    return base;
}

std::string field_to_string(const FieldSpec& spec) {
    std::string s = "(" + std::to_string(spec.q) + ",{";
    for (std::size_t i = 0; i < spec.H.size(); ++i) s += (i ? "," : "") + std::to_string(spec.H[i]);
    return s + "})";
}

} // namespace normcount
