#include "pam/config.hpp"

#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>

#include "pam/errors.hpp"
#include "pam/parallel.hpp"

namespace pam {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

CovarianceModel RunConfig::model() const {
    return CovarianceModel(alpha0, alpha, d, lambda, spatial_kernel_from_string(kernel));
}

int RunConfig::resolved_workers() const { return workers > 0 ? workers : default_workers(); }

namespace {

std::string join_doubles(const std::vector<double>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += ",";
        s += format_double(v[i]);
    }
    return s;
}

std::string join_pairs(const std::vector<std::pair<double, double>>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += ",";
        s += format_double(v[i].first) + ":" + format_double(v[i].second);
    }
    return s;
}

double parse_double(const std::string& key, const std::string& s) {
    try {
        std::size_t pos = 0;
        double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw config_error("invalid number for key '" + key + "': " + s);
    }
}

long parse_long(const std::string& key, const std::string& s) {
    try {
        std::size_t pos = 0;
        long v = std::stol(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw config_error("invalid integer for key '" + key + "': " + s);
    }
}

} // namespace

std::vector<double> parse_double_list(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        out.push_back(parse_double("list", item));
    }
    return out;
}

std::vector<std::pair<double, double>> parse_pair_list(const std::string& s) {
    std::vector<std::pair<double, double>> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        auto colon = item.find(':');
        if (colon == std::string::npos)
            throw config_error("pair list entries must look like p:q, got " + item);
        out.emplace_back(parse_double("pair", item.substr(0, colon)),
                         parse_double("pair", item.substr(colon + 1)));
    }
    return out;
}

std::string RunConfig::echo(const std::string& prefix) const {
    std::ostringstream os;
    auto put = [&](const std::string& k, const std::string& v) {
        os << prefix << k << "=" << v << "\n";
    };
    put("alpha0", format_double(alpha0));
    put("alpha", format_double(alpha));
    put("d", std::to_string(d));
    put("lambda", format_double(lambda));
    put("kernel", kernel);
    put("seed", std::to_string(seed));
    put("workers", std::to_string(workers));
    put("out", out);
    put("var_M", std::to_string(var_M));
    put("var_N", std::to_string(var_N));
    put("var_L", format_double(var_L));
    put("var_step", format_double(var_step));
    put("var_tol", format_double(var_tol));
    put("var_max_iter", std::to_string(var_max_iter));
    put("lambdas", join_doubles(lambdas));
    put("fk_n", std::to_string(fk_n));
    put("fk_t", format_double(fk_t));
    put("fk_steps", std::to_string(fk_steps));
    put("fk_samples", std::to_string(fk_samples));
    put("t_list", join_doubles(t_list));
    put("ch_Mt", std::to_string(ch_Mt));
    put("ch_N", std::to_string(ch_N));
    put("ch_L", format_double(ch_L));
    put("ch_t", format_double(ch_t));
    put("ch_K", std::to_string(ch_K));
    put("ch_samples", std::to_string(ch_samples));
    put("p_list", join_doubles(p_list));
    put("hyper_pairs", join_pairs(hyper_pairs));
    return os.str();
}

KeyValueMap parse_key_values(std::istream& in) {
    KeyValueMap kv;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string s = line;
        // strip comments and whitespace
        if (auto hash = s.find('#'); hash != std::string::npos) s = s.substr(0, hash);
        auto ltrim = s.find_first_not_of(" \t\r");
        if (ltrim == std::string::npos) continue;
        auto rtrim = s.find_last_not_of(" \t\r");
        s = s.substr(ltrim, rtrim - ltrim + 1);
        if (s.empty()) continue;
        auto eq = s.find('=');
        if (eq == std::string::npos)
            throw config_error("config line " + std::to_string(lineno) +
                               " is not key=value: " + line);
        std::string key = s.substr(0, eq);
        std::string val = s.substr(eq + 1);
        auto trim = [](std::string x) {
            auto a = x.find_first_not_of(" \t");
            auto b = x.find_last_not_of(" \t");
            return a == std::string::npos ? std::string() : x.substr(a, b - a + 1);
        };
        kv[trim(key)] = trim(val);
    }
    return kv;
}

KeyValueMap parse_key_value_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot open config file: " + path);
    return parse_key_values(in);
}

void apply_key_values(RunConfig& cfg, const KeyValueMap& kv) {
    for (const auto& [key, val] : kv) {
        if (key == "alpha0") cfg.alpha0 = parse_double(key, val);
        else if (key == "alpha") cfg.alpha = parse_double(key, val);
        else if (key == "d") cfg.d = static_cast<int>(parse_long(key, val));
        else if (key == "lambda") cfg.lambda = parse_double(key, val);
        else if (key == "kernel") cfg.kernel = val;
        else if (key == "seed") cfg.seed = static_cast<std::uint64_t>(parse_long(key, val));
        else if (key == "workers") cfg.workers = static_cast<int>(parse_long(key, val));
        else if (key == "out") cfg.out = val;
        else if (key == "var_M") cfg.var_M = static_cast<int>(parse_long(key, val));
        else if (key == "var_N") cfg.var_N = static_cast<int>(parse_long(key, val));
        else if (key == "var_L") cfg.var_L = parse_double(key, val);
        else if (key == "var_step") cfg.var_step = parse_double(key, val);
        else if (key == "var_tol") cfg.var_tol = parse_double(key, val);
        else if (key == "var_max_iter") cfg.var_max_iter = static_cast<int>(parse_long(key, val));
        else if (key == "lambdas") cfg.lambdas = parse_double_list(val);
        else if (key == "fk_n") cfg.fk_n = static_cast<int>(parse_long(key, val));
        else if (key == "fk_t") cfg.fk_t = parse_double(key, val);
        else if (key == "fk_steps") cfg.fk_steps = static_cast<int>(parse_long(key, val));
        else if (key == "fk_samples") cfg.fk_samples = parse_long(key, val);
        else if (key == "t_list") cfg.t_list = parse_double_list(val);
        else if (key == "ch_Mt") cfg.ch_Mt = static_cast<int>(parse_long(key, val));
        else if (key == "ch_N") cfg.ch_N = static_cast<int>(parse_long(key, val));
        else if (key == "ch_L") cfg.ch_L = parse_double(key, val);
        else if (key == "ch_t") cfg.ch_t = parse_double(key, val);
        else if (key == "ch_K") cfg.ch_K = static_cast<int>(parse_long(key, val));
        else if (key == "ch_samples") cfg.ch_samples = parse_long(key, val);
        else if (key == "p_list") cfg.p_list = parse_double_list(val);
        else if (key == "hyper_pairs") cfg.hyper_pairs = parse_pair_list(val);
        else throw config_error("unknown config key: " + key);
    }
}

RunConfig parse_echoed_header(std::istream& in) {
    KeyValueMap kv;
    std::string line;
    while (std::getline(in, line)) {
        if (line.rfind("##", 0) == 0) continue; // derived-result lines
        if (line.rfind("# ", 0) != 0) break;
        std::istringstream one(line.substr(2));
        KeyValueMap part = parse_key_values(one);
        for (auto& [k, v] : part) kv[k] = v;
    }
    RunConfig cfg;
    apply_key_values(cfg, kv);
    return cfg;
}

} // namespace pam
