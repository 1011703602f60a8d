#include <CLI11.hpp>
#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <string>

#include "pam/chaos.hpp"
#include "pam/config.hpp"
#include "pam/errors.hpp"
#include "pam/feynman_kac.hpp"
#include "pam/model.hpp"
#include "pam/report.hpp"
#include "pam/variational.hpp"

namespace {

struct FlagOverrides {
    // per subcommand: flag spelling -> (config key, captured value)
    std::map<const CLI::App*, std::map<std::string, std::pair<std::string, std::string>>>
        per_cmd;

    void add(CLI::App* cmd, const std::string& flag, const std::string& key,
             const std::string& help) {
        auto& slot = per_cmd[cmd][flag];
        slot.first = key;
        cmd->add_option(flag, slot.second, help);
    }

    void apply(const CLI::App* cmd, pam::RunConfig& cfg) const {
        pam::KeyValueMap kv;
        auto it = per_cmd.find(cmd);
        if (it == per_cmd.end()) return;
        for (const auto& [flag, entry] : it->second) {
            const CLI::Option* opt = cmd->get_option_no_throw(flag);
            if (opt && opt->count() > 0) kv[entry.first] = entry.second;
        }
        pam::apply_key_values(cfg, kv);
    }
};

void add_model_flags(CLI::App* cmd, FlagOverrides& ov) {
    cmd->fallthrough(); // let --config (a parent option) appear after the subcommand
    ov.add(cmd, "--alpha0", "alpha0", "temporal exponent in (0,1)");
    ov.add(cmd, "--alpha", "alpha", "spatial exponent in (0,2)");
    ov.add(cmd, "--d", "d", "spatial dimension");
    ov.add(cmd, "--lambda", "lambda", "noise intensity");
    ov.add(cmd, "--kernel", "kernel", "spatial kernel tag (riesz)");
    ov.add(cmd, "--seed", "seed", "base RNG seed");
    ov.add(cmd, "--workers", "workers", "worker count (0 = PAMLAB_WORKERS or hardware)");
    ov.add(cmd, "--out", "out", "output path prefix");
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw pam::engine_error("cannot write output file: " + path);
    out << content;
}

std::string d2s(double v) { return pam::format_double(v); }

int run_variational(const pam::RunConfig& cfg, const std::string& dump_maximizer) {
    pam::AscendConfig acfg{cfg.var_step, cfg.var_max_iter, cfg.var_tol};
    pam::ScalingCheckResult res = pam::scaling_check(
        cfg.model(), cfg.lambdas, cfg.var_M, cfg.var_N, cfg.var_L, acfg);

    std::string csv = cfg.echo("# ");
    csv += "## E1=" + d2s(res.value_at_unit) + "\n";
    csv += "lambda,value,iterations,residual\n";
    for (std::size_t i = 0; i < res.lambdas.size(); ++i)
        csv += d2s(res.lambdas[i]) + "," + d2s(res.values[i]) + "," +
               std::to_string(res.iterations[i]) + "," + d2s(res.residuals[i]) + "\n";
    write_file(cfg.out + "_variational.csv", csv);
    std::cout << "E(1) = " << d2s(res.value_at_unit) << "\n";
    for (std::size_t i = 0; i < res.lambdas.size(); ++i) {
        std::cout << "lambda=" << d2s(res.lambdas[i]) << " value=" << d2s(res.values[i])
                  << " residual=" << d2s(res.residuals[i]) << "\n";
        if (res.box_warnings[i])
            std::cout << "warning: maximizer mass within the box fell below 0.999 at "
                         "lambda=" << d2s(res.lambdas[i]) << "; increase L\n";
    }

    if (!dump_maximizer.empty()) {
        pam::CovarianceModel unit = cfg.model().with_lambda(1.0);
        pam::TrialOptimum trial = pam::best_trial(unit, cfg.var_M, cfg.var_N, cfg.var_L);
        pam::GridFunction init = pam::gaussian_profile(cfg.var_M, cfg.var_N, unit.d,
                                                       cfg.var_L, trial.sigma);
        pam::VariationalResult r = pam::ascend(init, unit, acfg);
        std::string flat = cfg.echo("# ");
        flat += "slice,cell,value\n";
        for (int m = 0; m < r.maximizer.time_slices; ++m)
            for (int i = 0; i < r.maximizer.cell_count(); ++i)
                flat += std::to_string(m) + "," + std::to_string(i) + "," +
                        d2s(r.maximizer.at(m, i)) + "\n";
        write_file(dump_maximizer, flat);
    }
    return 0;
}

int run_fk(const pam::RunConfig& cfg) {
    pam::FkOptions opts;
    opts.workers = cfg.resolved_workers();
    pam::MomentEstimate est = pam::estimate_moment(cfg.fk_n, cfg.fk_t, cfg.model(),
                                                   cfg.fk_samples, cfg.fk_steps,
                                                   cfg.seed, opts);
    std::string csv = cfg.echo("# ");
    csv += "n,t,lambda,value,log_value,stderr,samples,heavy_tail_flag\n";
    csv += std::to_string(cfg.fk_n) + "," + d2s(cfg.fk_t) + "," + d2s(cfg.lambda) + "," +
           d2s(est.value) + "," + d2s(est.log_value) + "," + d2s(est.stderr_of_mean) +
           "," + std::to_string(est.samples) + "," + std::to_string(est.heavy_tail ? 1 : 0) +
           "\n";
    write_file(cfg.out + "_fk.csv", csv);
    std::cout << "E u^" << cfg.fk_n << "(t=" << d2s(cfg.fk_t) << ") = " << d2s(est.value)
              << " +- " << d2s(est.stderr_of_mean) << " (log " << d2s(est.log_value)
              << ")" << (est.heavy_tail ? " [heavy tail]" : "") << "\n";
    return 0;
}

int run_simulate(const pam::RunConfig& cfg) {
    pam::CovarianceModel model = cfg.model();
    pam::SpaceTimeGrid grid =
        pam::SpaceTimeGrid::make(cfg.ch_Mt, cfg.ch_N, model.d, cfg.ch_L, cfg.ch_t);
    pam::NoiseField noise = pam::build_noise(grid, model);
    pam::ChaosSolution sol = pam::build_kernels(grid, model, cfg.ch_K);
    pam::SecondMoment sm = pam::second_moment_exact(sol, noise, cfg.resolved_workers());

    std::string csv = cfg.echo("# ");
    csv += "## second_moment_exact=" + d2s(sm.total) + "\n";
    csv += "engine,p,lambda,norm,stderr,samples,K,tail_proxy\n";
    for (double p : cfg.p_list) {
        pam::LpEstimate lp = pam::estimate_Lp(sol, noise, p, cfg.ch_samples, cfg.seed,
                                              cfg.resolved_workers());
        csv += "chaos," + d2s(p) + "," + d2s(cfg.lambda) + "," + d2s(lp.norm) + "," +
               d2s(lp.norm_stderr) + "," + std::to_string(lp.samples) + "," +
               std::to_string(cfg.ch_K) + "," + d2s(sm.tail_proxy) + "\n";
        std::cout << "||u||_" << d2s(p) << " = " << d2s(lp.norm) << " +- "
                  << d2s(lp.norm_stderr) << "\n";
    }
    write_file(cfg.out + "_simulate.csv", csv);
    std::cout << "exact E u^2 = " << d2s(sm.total) << " (tail proxy " << d2s(sm.tail_proxy)
              << ")\n";
    return 0;
}

int run_hyper(const pam::RunConfig& cfg, double p, double q) {
    pam::CovarianceModel model = cfg.model();
    pam::SpaceTimeGrid grid =
        pam::SpaceTimeGrid::make(cfg.ch_Mt, cfg.ch_N, model.d, cfg.ch_L, cfg.ch_t);
    pam::HyperComparison hc = pam::hypercontractivity_test(
        grid, model, p, q, cfg.ch_samples, cfg.seed, cfg.resolved_workers());

    std::string csv = cfg.echo("# ");
    csv += "## margin=" + d2s(hc.rhs + 2.0 * hc.combined_stderr - hc.lhs) + "\n";
    csv += "engine,p,lambda,norm,stderr,samples,K,tail_proxy\n";
    csv += "hyper_lhs," + d2s(q) + "," + d2s(hc.lambda_reduced) + "," + d2s(hc.lhs) + "," +
           d2s(hc.lhs_stderr) + "," + std::to_string(cfg.ch_samples) + ",3,\n";
    csv += "hyper_rhs," + d2s(p) + "," + d2s(hc.lambda) + "," + d2s(hc.rhs) + "," +
           d2s(hc.rhs_stderr) + "," + std::to_string(cfg.ch_samples) + ",3,\n";
    write_file(cfg.out + "_hyper.csv", csv);
    std::cout << "lhs ||u_{(p-1)l/(q-1)}||_q = " << d2s(hc.lhs) << " +- "
              << d2s(hc.lhs_stderr) << "\n"
              << "rhs ||u_l||_p = " << d2s(hc.rhs) << " +- " << d2s(hc.rhs_stderr) << "\n"
              << (hc.pass ? "pass" : "FAIL") << " (2 se band)\n";
    return 0;
}

int run_rates(const pam::RunConfig& cfg, double E1, const std::string& n_list_s,
              double q) {
    pam::CovarianceModel model = cfg.model();
    std::string csv = cfg.echo("# ");
    csv += "kind,param1,param2,value\n";
    csv += "time_exponent,,," + d2s(pam::time_rate_exponent(model)) + "\n";
    for (double p : cfg.p_list) {
        pam::RatePrediction pred = pam::lyapunov_prediction(model, p, E1);
        csv += "lyapunov_coefficient," + d2s(p) + ",," + d2s(pred.coefficient) + "\n";
    }
    for (double nd : pam::parse_double_list(n_list_s)) {
        int n = static_cast<int>(nd);
        csv += "white_noise_rate," + std::to_string(n) + "," + d2s(cfg.lambda) + "," +
               d2s(pam::white_noise_rate(n, cfg.lambda)) + "\n";
    }
    for (double p : cfg.p_list) {
        if (!(p > 1.0) || q < p) continue;
        pam::HyperMap hm = pam::hypercontract_map(p, q);
        csv += "hyper_factor," + d2s(p) + "," + d2s(q) + "," + d2s(hm.lambda_factor) + "\n";
        csv += "hyper_tau," + d2s(p) + "," + d2s(q) + "," + d2s(hm.tau) + "\n";
    }
    write_file(cfg.out + "_rates.csv", csv);
    std::cout << csv;
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"numerical laboratory for moment growth in the parabolic Anderson "
                 "model with fractional-in-time, scale-invariant-in-space noise"};
    app.require_subcommand(1);

    std::string config_path;
    app.add_option("--config", config_path, "key=value configuration file")
        ->expected(1);

    FlagOverrides ov;

    CLI::App* var = app.add_subcommand("variational", "variational constant solver");
    add_model_flags(var, ov);
    ov.add(var, "--M", "var_M", "time slices");
    ov.add(var, "--N", "var_N", "cells per dimension");
    ov.add(var, "--L", "var_L", "box halfwidth");
    ov.add(var, "--step", "var_step", "initial ascent step");
    ov.add(var, "--tol", "var_tol", "relative improvement tolerance");
    ov.add(var, "--max-iter", "var_max_iter", "iteration cap");
    ov.add(var, "--lambda-list", "lambdas", "comma-separated intensities");
    std::string dump_maximizer;
    var->add_option("--dump-maximizer", dump_maximizer, "write the maximizer grid CSV");

    CLI::App* fk = app.add_subcommand("fk", "Feynman-Kac moment estimator");
    add_model_flags(fk, ov);
    ov.add(fk, "--n", "fk_n", "moment order (integer)");
    ov.add(fk, "--t", "fk_t", "time horizon");
    ov.add(fk, "--steps", "fk_steps", "path steps");
    ov.add(fk, "--samples", "fk_samples", "Monte Carlo samples");

    CLI::App* sim = app.add_subcommand("simulate", "truncated chaos solution norms");
    add_model_flags(sim, ov);
    ov.add(sim, "--Mt", "ch_Mt", "time slices");
    ov.add(sim, "--N", "ch_N", "cells per dimension");
    ov.add(sim, "--L", "ch_L", "box halfwidth");
    ov.add(sim, "--t", "ch_t", "time horizon");
    ov.add(sim, "--K", "ch_K", "chaos truncation");
    ov.add(sim, "--p-list", "p_list", "comma-separated orders");
    ov.add(sim, "--samples", "ch_samples", "Monte Carlo samples");

    CLI::App* hyp = app.add_subcommand("hyper", "hypercontractive norm comparison");
    add_model_flags(hyp, ov);
    ov.add(hyp, "--Mt", "ch_Mt", "time slices");
    ov.add(hyp, "--N", "ch_N", "cells per dimension");
    ov.add(hyp, "--L", "ch_L", "box halfwidth");
    ov.add(hyp, "--t", "ch_t", "time horizon");
    ov.add(hyp, "--samples", "ch_samples", "Monte Carlo samples");
    double hp_p = 2.0, hp_q = 4.0;
    hyp->add_option("--p", hp_p, "lower order p > 1");
    hyp->add_option("--q", hp_q, "upper order q >= p");

    CLI::App* rep = app.add_subcommand("report", "full cross-engine pipeline");
    add_model_flags(rep, ov);
    ov.add(rep, "--p-list", "p_list", "comma-separated orders");
    ov.add(rep, "--t-list", "t_list", "comma-separated horizons for fk rows");
    ov.add(rep, "--fk-samples", "fk_samples", "fk Monte Carlo samples");
    ov.add(rep, "--fk-steps", "fk_steps", "fk path steps at the largest horizon");
    ov.add(rep, "--ch-samples", "ch_samples", "chaos Monte Carlo samples");
    ov.add(rep, "--ch-N", "ch_N", "chaos cells per dimension");
    ov.add(rep, "--ch-Mt", "ch_Mt", "chaos time slices");
    ov.add(rep, "--ch-t", "ch_t", "chaos horizon");
    ov.add(rep, "--var-M", "var_M", "variational time slices");
    ov.add(rep, "--var-N", "var_N", "variational cells per dimension");
    ov.add(rep, "--var-L", "var_L", "variational box halfwidth");
    ov.add(rep, "--hyper-pairs", "hyper_pairs", "p:q pairs");

    CLI::App* rates = app.add_subcommand("rates", "closed-form rate calculators");
    add_model_flags(rates, ov);
    ov.add(rates, "--p-list", "p_list", "comma-separated orders");
    double rates_E1 = 1.0, rates_q = 4.0;
    std::string rates_n_list = "1,2,3";
    rates->add_option("--E1", rates_E1, "variational constant estimate at lambda=1");
    rates->add_option("--n-list", rates_n_list, "integer orders for the white-noise rate");
    rates->add_option("--q", rates_q, "upper order for the hypercontractive map");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        pam::RunConfig cfg;
        if (!config_path.empty())
            pam::apply_key_values(cfg, pam::parse_key_value_file(config_path));
        CLI::App* active = app.get_subcommands().front();
        ov.apply(active, cfg);
        cfg.model(); // validate model parameters up front

        if (active == var) return run_variational(cfg, dump_maximizer);
        if (active == fk) return run_fk(cfg);
        if (active == sim) return run_simulate(cfg);
        if (active == hyp) return run_hyper(cfg, hp_p, hp_q);
        if (active == rates) return run_rates(cfg, rates_E1, rates_n_list, rates_q);
        if (active == rep) {
            pam::Report report = pam::run_report(cfg);
            pam::write_report_files(report);
            std::cout << pam::report_summary(report);
            return report.any_error ? 3 : 0;
        }
        return 2;
    } catch (const pam::config_error& e) {
        std::cerr << "error kind=config msg=\"" << e.what() << "\"\n";
        return 2;
    } catch (const pam::resource_cap_error& e) {
        std::cerr << "error kind=resource_cap msg=\"" << e.what() << "\"\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error kind=engine msg=\"" << e.what() << "\"\n";
        return 3;
    }
}
