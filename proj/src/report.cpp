#include "pam/report.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "pam/chaos.hpp"
#include "pam/errors.hpp"
#include "pam/feynman_kac.hpp"
#include "pam/variational.hpp"

namespace pam {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string cell(double v) { return std::isnan(v) ? std::string() : format_double(v); }

ReportRow blank_row(const std::string& engine) {
    ReportRow r;
    r.engine = engine;
    r.p = r.q = r.lambda = r.t = r.value = r.log_value = r.stderr_of_mean =
        r.norm_log_moment = r.prediction = r.margin = r.tail_proxy = kNaN;
    return r;
}

} // namespace

Report run_report(const RunConfig& cfg) {
    Report rep;
    rep.config = cfg;
    const CovarianceModel model = cfg.model();
    const int workers = cfg.resolved_workers();

    // 1. Variational constant at unit intensity on the configured grid.
    {
        ReportRow row = blank_row("variational");
        row.lambda = 1.0;
        try {
            CovarianceModel unit = model.with_lambda(1.0);
            TrialOptimum trial = best_trial(unit, cfg.var_M, cfg.var_N, cfg.var_L);
            GridFunction init =
                gaussian_profile(cfg.var_M, cfg.var_N, unit.d, cfg.var_L, trial.sigma);
            AscendConfig acfg{cfg.var_step, cfg.var_max_iter, cfg.var_tol};
            VariationalResult res = ascend(init, unit, acfg);
            rep.E1 = res.value;
            row.value = res.value;
        } catch (const std::exception& e) {
            row.error = e.what();
            rep.any_error = true;
        }
        rep.rows.push_back(row);
    }

    // 2. Lyapunov predictions for every requested order.
    for (double p : cfg.p_list) {
        ReportRow row = blank_row("prediction");
        row.p = p;
        row.lambda = model.lambda;
        try {
            RatePrediction pred = lyapunov_prediction(model, p, rep.E1);
            row.prediction = pred.coefficient;
            row.value = pred.time_exponent;
        } catch (const std::exception& e) {
            row.error = e.what();
            rep.any_error = true;
        }
        rep.rows.push_back(row);
    }

    // 3. Feynman-Kac moments for the integer orders, shared dt across the
    // horizon list so longer horizons extend the same paths.
    const double t_ref = *std::max_element(cfg.t_list.begin(), cfg.t_list.end());
    for (double p : cfg.p_list) {
        if (p != std::floor(p)) continue;
        const int n = static_cast<int>(p);
        for (double t : cfg.t_list) {
            ReportRow row = blank_row("fk");
            row.p = p;
            row.lambda = model.lambda;
            row.t = t;
            try {
                int steps = std::max(1, static_cast<int>(std::lround(cfg.fk_steps * t / t_ref)));
                FkOptions opts;
                opts.workers = workers;
                NormalizedLogMoment nlm = normalized_log_moment(
                    n, t, model, cfg.fk_samples, steps, cfg.seed, opts);
                row.value = nlm.estimate.value;
                row.log_value = nlm.estimate.log_value;
                row.stderr_of_mean = nlm.estimate.stderr_of_mean;
                row.norm_log_moment = nlm.value;
                row.prediction = lyapunov_prediction(model, p, rep.E1).coefficient;
                row.heavy_tail = nlm.estimate.heavy_tail ? 1 : 0;
            } catch (const std::exception& e) {
                row.error = e.what();
                rep.any_error = true;
            }
            rep.rows.push_back(row);
        }
    }

    // 4. Chaos L^p norms at the chaos horizon (real orders included).
    try {
        SpaceTimeGrid grid =
            SpaceTimeGrid::make(cfg.ch_Mt, cfg.ch_N, model.d, cfg.ch_L, cfg.ch_t);
        NoiseField noise = build_noise(grid, model);
        ChaosSolution sol = build_kernels(grid, model, cfg.ch_K);
        SecondMoment sm = second_moment_exact(sol, noise, workers);
        for (double p : cfg.p_list) {
            ReportRow row = blank_row("chaos");
            row.p = p;
            row.lambda = model.lambda;
            row.t = cfg.ch_t;
            try {
                LpEstimate lp = estimate_Lp(sol, noise, p, cfg.ch_samples, cfg.seed, workers);
                row.value = lp.norm;
                row.log_value = p * std::log(lp.norm);
                row.stderr_of_mean = lp.norm_stderr;
                row.norm_log_moment =
                    row.log_value / std::pow(cfg.ch_t, time_rate_exponent(model));
                row.prediction = lyapunov_prediction(model, p, rep.E1).coefficient;
                row.tail_proxy = sm.tail_proxy;
            } catch (const std::exception& e) {
                row.error = e.what();
                rep.any_error = true;
            }
            rep.rows.push_back(row);
        }
    } catch (const std::exception& e) {
        ReportRow row = blank_row("chaos");
        row.error = e.what();
        rep.any_error = true;
        rep.rows.push_back(row);
    }

    // 5. Hypercontractive comparison margins.
    for (auto [p, q] : cfg.hyper_pairs) {
        ReportRow row = blank_row("hyper");
        row.p = p;
        row.q = q;
        row.lambda = model.lambda;
        row.t = cfg.ch_t;
        try {
            SpaceTimeGrid grid =
                SpaceTimeGrid::make(cfg.ch_Mt, cfg.ch_N, model.d, cfg.ch_L, cfg.ch_t);
            HyperComparison hc = hypercontractivity_test(grid, model, p, q,
                                                         cfg.ch_samples, cfg.seed, workers);
            row.value = hc.lhs;
            row.log_value = hc.rhs;
            row.stderr_of_mean = hc.combined_stderr;
            row.margin = hc.rhs + 2.0 * hc.combined_stderr - hc.lhs;
        } catch (const std::exception& e) {
            row.error = e.what();
            rep.any_error = true;
        }
        rep.rows.push_back(row);
    }
    return rep;
}

std::string report_csv(const Report& rep) {
    std::ostringstream os;
    os << rep.config.echo("# ");
    os << "## E1=" << format_double(rep.E1) << "\n";
    os << "engine,p,q,lambda,t,value,log_value,stderr,norm_log_moment,prediction,"
          "margin,heavy_tail,tail_proxy,error\n";
    for (const ReportRow& r : rep.rows) {
        os << r.engine << ',' << cell(r.p) << ',' << cell(r.q) << ',' << cell(r.lambda)
           << ',' << cell(r.t) << ',' << cell(r.value) << ',' << cell(r.log_value) << ','
           << cell(r.stderr_of_mean) << ',' << cell(r.norm_log_moment) << ','
           << cell(r.prediction) << ',' << cell(r.margin) << ',' << r.heavy_tail << ','
           << cell(r.tail_proxy) << ',' << r.error << "\n";
    }
    return os.str();
}

std::string report_summary(const Report& rep) {
    std::ostringstream os;
    os << "moment growth report\n";
    os << "model: alpha0=" << format_double(rep.config.alpha0)
       << " alpha=" << format_double(rep.config.alpha) << " d=" << rep.config.d
       << " lambda=" << format_double(rep.config.lambda) << " kernel=" << rep.config.kernel
       << "\n";
    os << "variational constant E(1) = " << format_double(rep.E1) << " (grid M="
       << rep.config.var_M << " N=" << rep.config.var_N << " L="
       << format_double(rep.config.var_L) << ")\n";
    os << "time exponent = " << format_double(time_rate_exponent(rep.config.model()))
       << "\n\n";
    os << "normalized log-moments t^{-exponent} log E u^p (finite-t diagnostics; the\n"
          "predicted coefficients apply in the large-time limit):\n";
    for (const ReportRow& r : rep.rows) {
        if (r.engine != "fk" && r.engine != "chaos") continue;
        if (!r.error.empty()) {
            os << "  " << r.engine << " p=" << cell(r.p) << " t=" << cell(r.t)
               << " ERROR: " << r.error << "\n";
            continue;
        }
        os << "  " << r.engine << " p=" << cell(r.p) << " t=" << cell(r.t)
           << " normalized=" << cell(r.norm_log_moment)
           << " prediction=" << cell(r.prediction)
           << (r.heavy_tail ? " [heavy tail]" : "") << "\n";
    }
    os << "\nhypercontractive comparison ||u_{(p-1)l/(q-1)}||_q <= ||u_l||_p "
          "(margin = rhs + 2 se - lhs, nonnegative means pass):\n";
    for (const ReportRow& r : rep.rows) {
        if (r.engine != "hyper") continue;
        if (!r.error.empty()) {
            os << "  p=" << cell(r.p) << " q=" << cell(r.q) << " ERROR: " << r.error << "\n";
            continue;
        }
        os << "  p=" << cell(r.p) << " q=" << cell(r.q) << " lhs=" << cell(r.value)
           << " rhs=" << cell(r.log_value) << " margin=" << cell(r.margin)
           << (r.margin >= 0.0 ? " pass" : " FAIL") << "\n";
    }
    return os.str();
}

std::string report_plotdata(const Report& rep) {
    std::ostringstream os;
    os << "series,group,x,y\n";
    for (const ReportRow& r : rep.rows) {
        if (!r.error.empty()) continue;
        if (r.engine == "fk" || r.engine == "chaos") {
            if (!std::isnan(r.norm_log_moment))
                os << "norm_log_moment," << r.engine << ":p=" << cell(r.p) << ":lambda="
                   << cell(r.lambda) << ',' << cell(r.t) << ',' << cell(r.norm_log_moment)
                   << "\n";
        } else if (r.engine == "hyper") {
            if (!std::isnan(r.margin))
                os << "hyper_margin,p=" << cell(r.p) << ',' << cell(r.q) << ','
                   << cell(r.margin) << "\n";
        }
    }
    return os.str();
}

void write_report_files(const Report& rep) {
    auto write = [](const std::string& path, const std::string& content) {
        std::ofstream out(path, std::ios::binary);
        if (!out) throw engine_error("cannot write output file: " + path);
        out << content;
    };
    write(rep.config.out + "_report.csv", report_csv(rep));
    write(rep.config.out + "_summary.txt", report_summary(rep));
    write(rep.config.out + "_plot.csv", report_plotdata(rep));
}

} // namespace pam
