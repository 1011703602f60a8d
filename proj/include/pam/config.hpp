#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "pam/model.hpp"

namespace pam {

// Resolved run configuration. Plain key=value text on disk; every key can
// be overridden by the CLI flag of the same name. Echoed verbatim into each
// output header so a run is reproducible from its own artifacts.
struct RunConfig {
    // model
    double alpha0 = 0.5;
    double alpha = 1.0;
    int d = 1;
    double lambda = 1.0;
    std::string kernel = "riesz";

    // common
    std::uint64_t seed = 12345;
    int workers = 0; // 0 = PAMLAB_WORKERS or hardware concurrency
    std::string out = "pamlab";

    // variational grid and ascent
    int var_M = 64;
    int var_N = 64;
    double var_L = 0.75;
    double var_step = 0.05;
    double var_tol = 1e-9;
    int var_max_iter = 2000;
    std::vector<double> lambdas = {1.0, 2.0, 4.0};

    // Feynman-Kac sampling
    int fk_n = 2;
    double fk_t = 1.0;
    int fk_steps = 32;
    long fk_samples = 20000;
    std::vector<double> t_list = {0.5, 1.0, 2.0};

    // chaos grid and sampling
    int ch_Mt = 4;
    int ch_N = 24;
    double ch_L = 1.25;
    double ch_t = 0.25;
    int ch_K = 3;
    long ch_samples = 4000;
    std::vector<double> p_list = {2.0, 2.5, 3.0, 4.0};

    // hypercontractive comparisons, "p:q" pairs
    std::vector<std::pair<double, double>> hyper_pairs = {{2, 3}, {2, 4}, {3, 5}};

    CovarianceModel model() const;
    int resolved_workers() const;

    // All keys in declaration order as key=value lines.
    std::string echo(const std::string& line_prefix = "") const;
};

using KeyValueMap = std::map<std::string, std::string>;

KeyValueMap parse_key_values(std::istream& in);
KeyValueMap parse_key_value_file(const std::string& path);

// Applies kv entries onto cfg; unknown keys raise config_error.
void apply_key_values(RunConfig& cfg, const KeyValueMap& kv);

// Parses the "# key=value" header lines of an output file back into a config.
RunConfig parse_echoed_header(std::istream& in);

std::vector<double> parse_double_list(const std::string& s);
std::vector<std::pair<double, double>> parse_pair_list(const std::string& s);

std::string format_double(double v); // %.17g, round-trip exact

} // namespace pam
