// Experiment runner for the density-integration library: analytic bounds,
// the ratio-bounded benchmark, the adaptivity-gap benchmark, and the discrete
// spectral laboratory, emitting machine-readable CSV/JSON.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "mcdens/mcdens.hpp"

#ifndef MCDENS_VERSION
#define MCDENS_VERSION "v0.0.0"
#endif

namespace {

constexpr int kExitOk = 0;
constexpr int kExitPropertyViolation = 1;
constexpr int kExitUsage = 2;
constexpr int kExitInfeasible = 3;

struct CommonOpts {
    std::uint64_t seed = 0;
    bool seed_set = false;
    int reps = 50;
    std::string out;  // empty = stdout
    std::string format = "csv";
    std::string config_path;
};

nlohmann::json load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    nlohmann::json j;
    in >> j;
    return j;
}

void apply_common_config(const nlohmann::json& j, CommonOpts& opts) {
    if (j.contains("seed")) {
        opts.seed = j.at("seed").get<std::uint64_t>();
        opts.seed_set = true;
    }
    if (j.contains("reps")) opts.reps = j.at("reps").get<int>();
    if (j.contains("out")) opts.out = j.at("out").get<std::string>();
    if (j.contains("format")) opts.format = j.at("format").get<std::string>();
}

void validate_common(const CommonOpts& opts) {
    if (!opts.seed_set) throw std::invalid_argument("a seed is mandatory (--seed or config)");
    if (opts.format != "csv" && opts.format != "json")
        throw std::invalid_argument("format must be csv or json");
    if (opts.reps < 2) throw std::invalid_argument("reps must be at least 2");
}

void validate_schedule(const std::vector<std::int64_t>& ns) {
    if (ns.empty()) throw std::invalid_argument("n schedule must be non-empty");
    for (std::size_t i = 0; i < ns.size(); ++i) {
        if (ns[i] < 1) throw std::invalid_argument("n must be >= 1");
        if (i > 0 && ns[i] <= ns[i - 1])
            throw std::invalid_argument("n schedule must be strictly increasing");
    }
}

void write_output(const std::string& out_path, const std::string& text) {
    if (out_path.empty()) {
        std::fwrite(text.data(), 1, text.size(), stdout);
        return;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file: " + out_path);
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
}

// ---------------------------------------------------------------------------
// bench-fc
// ---------------------------------------------------------------------------

struct FcOpts {
    CommonOpts common;
    std::vector<double> Cs = {4.0, 8.0, 32.0};
    std::vector<std::int64_t> ns = {256, 1024};
    int prior_draws = 200;
};

std::string fc_config_echo(const FcOpts& o) {
    mcdens::JsonWriter w;
    w.begin_object();
    w.key("command").value("bench-fc");
    w.key("seed").value(o.common.seed);
    w.key("reps").value(o.common.reps);
    w.key("format").value(o.common.format);
    w.key("C").begin_array();
    for (double c : o.Cs) w.value(c);
    w.end_array();
    w.key("n").begin_array();
    for (std::int64_t n : o.ns) w.value(n);
    w.end_array();
    w.key("prior_draws").value(o.prior_draws);
    w.end_object();
    return w.str();
}

int run_bench_fc(const FcOpts& opts) {
    const std::string config = fc_config_echo(opts);
    const auto rows = mcdens::bench_fc(opts.Cs, opts.ns, opts.prior_draws,
                                       opts.common.reps, opts.common.seed);
    bool all_inside = true;
    std::string text;
    if (opts.common.format == "csv") {
        text += mcdens::csv_row({"C", "n", "empirical_rmse", "lower_bound", "upper_bound",
                                 "inside_sandwich", "version", "config"});
        for (const auto& r : rows) {
            all_inside = all_inside && r.inside_sandwich;
            text += mcdens::csv_row({mcdens::format_real(r.C), std::to_string(r.n),
                                     mcdens::format_real(r.empirical_rmse),
                                     mcdens::format_real(r.lower_bound),
                                     mcdens::format_real(r.upper_bound),
                                     r.inside_sandwich ? "true" : "false", MCDENS_VERSION,
                                     config});
        }
    } else {
        std::string doc = "{\"version\":\"" MCDENS_VERSION "\",\"config\":" + config +
                          ",\"rows\":[";
        for (std::size_t i = 0; i < rows.size(); ++i) {
            const auto& r = rows[i];
            all_inside = all_inside && r.inside_sandwich;
            mcdens::JsonWriter rw;
            rw.begin_object();
            rw.key("C").value(r.C);
            rw.key("n").value(r.n);
            rw.key("empirical_rmse").value(r.empirical_rmse);
            rw.key("lower_bound").value(r.lower_bound);
            rw.key("upper_bound").value(r.upper_bound);
            rw.key("inside_sandwich").value(r.inside_sandwich);
            rw.end_object();
            doc += (i ? "," : "") + rw.str();
        }
        doc += "]}\n";
        text = doc;
    }
    write_output(opts.common.out, text);
    return all_inside ? kExitOk : kExitPropertyViolation;
}

// ---------------------------------------------------------------------------
// bench-gap
// ---------------------------------------------------------------------------

struct GapOpts {
    CommonOpts common;
    int d = 2;
    double alpha = 6.0;
    int m = 8;
    std::vector<std::int64_t> ns = {256};
    std::optional<double> delta;
};

std::string gap_config_echo(const GapOpts& o) {
    mcdens::JsonWriter w;
    w.begin_object();
    w.key("command").value("bench-gap");
    w.key("seed").value(o.common.seed);
    w.key("reps").value(o.common.reps);
    w.key("format").value(o.common.format);
    w.key("d").value(o.d);
    w.key("alpha").value(o.alpha);
    w.key("m").value(o.m);
    w.key("n").begin_array();
    for (std::int64_t n : o.ns) w.value(n);
    w.end_array();
    w.key("delta");
    if (o.delta) w.value(*o.delta);
    else w.null();
    w.end_object();
    return w.str();
}

int run_bench_gap(const GapOpts& opts) {
    const std::string config = gap_config_echo(opts);
    std::vector<mcdens::GapResult> results;
    for (std::size_t i = 0; i < opts.ns.size(); ++i)
        results.push_back(mcdens::bench_gap(opts.d, opts.alpha, opts.m, opts.ns[i],
                                            opts.common.reps,
                                            opts.common.seed + 2 * i, opts.delta));
    std::string text;
    if (opts.common.format == "csv") {
        text += mcdens::csv_row(
            {"estimator", "instance", "sign", "n", "rmse", "version", "config"});
        for (const auto& res : results) {
            for (const auto& row : res.rows)
                text += mcdens::csv_row({row.estimator, std::to_string(row.center_index),
                                         std::to_string(row.sign), std::to_string(row.n),
                                         mcdens::format_real(row.rmse), MCDENS_VERSION,
                                         config});
            text += mcdens::csv_row({"worst-simple", "-1", "0",
                                     std::to_string(res.rows.front().n),
                                     mcdens::format_real(res.worst_simple), MCDENS_VERSION,
                                     config});
            text += mcdens::csv_row({"worst-metropolis", "-1", "0",
                                     std::to_string(res.rows.front().n),
                                     mcdens::format_real(res.worst_metropolis),
                                     MCDENS_VERSION, config});
            text += mcdens::csv_row({"ratio-simple-over-metropolis", "-1", "0",
                                     std::to_string(res.rows.front().n),
                                     mcdens::format_real(res.ratio), MCDENS_VERSION,
                                     config});
        }
    } else {
        std::string doc =
            "{\"version\":\"" MCDENS_VERSION "\",\"config\":" + config + ",\"results\":[";
        for (std::size_t i = 0; i < results.size(); ++i) {
            const auto& res = results[i];
            mcdens::JsonWriter w;
            w.begin_object();
            w.key("n").value(res.rows.front().n);
            w.key("delta").value(res.delta);
            w.key("lower_bound_nonadaptive").value(res.lower_bound_nonadaptive_value);
            w.key("rows").begin_array();
            for (const auto& row : res.rows) {
                w.begin_object();
                w.key("estimator").value(row.estimator);
                w.key("instance").value(row.center_index);
                w.key("sign").value(row.sign);
                w.key("rmse").value(row.rmse);
                w.end_object();
            }
            w.end_array();
            w.key("worst_simple").value(res.worst_simple);
            w.key("worst_metropolis").value(res.worst_metropolis);
            w.key("ratio").value(res.ratio);
            w.end_object();
            doc += (i ? "," : "") + w.str();
        }
        doc += "]}\n";
        text = doc;
    }
    write_output(opts.common.out, text);
    return kExitOk;
}

// ---------------------------------------------------------------------------
// spectral
// ---------------------------------------------------------------------------

struct SpectralOpts {
    CommonOpts common;
    std::vector<double> alphas = {0.0, 1.0, 2.0, 4.0};
    std::vector<double> deltas = {0.25, 0.5};
    std::vector<int> Ns = {8, 16};
};

std::string spectral_config_echo(const SpectralOpts& o) {
    mcdens::JsonWriter w;
    w.begin_object();
    w.key("command").value("spectral");
    w.key("seed").value(o.common.seed);
    w.key("format").value(o.common.format);
    w.key("alpha").begin_array();
    for (double a : o.alphas) w.value(a);
    w.end_array();
    w.key("delta").begin_array();
    for (double d : o.deltas) w.value(d);
    w.end_array();
    w.key("N").begin_array();
    for (int n : o.Ns) w.value(n);
    w.end_array();
    w.end_object();
    return w.str();
}

int run_spectral(const SpectralOpts& opts) {
    const std::string config = spectral_config_echo(opts);
    const auto cases = mcdens::spectral_suite(opts.alphas, opts.deltas, opts.Ns);
    bool all_ok = true;
    std::string text;
    if (opts.common.format == "csv") {
        text += mcdens::csv_row({"rho", "alpha", "delta", "N", "beta", "lambda",
                                 "conductance", "cheeger_ok", "met_cond_reference",
                                 "local_floor", "reversibility_defect", "version",
                                 "config"});
        for (const auto& c : cases) {
            all_ok = all_ok && c.report.cheeger_ok;
            text += mcdens::csv_row(
                {c.rho_id, mcdens::format_real(c.alpha), mcdens::format_real(c.delta),
                 std::to_string(c.states), mcdens::format_real(c.report.beta),
                 mcdens::format_real(c.report.lambda),
                 mcdens::format_real(c.report.conductance),
                 c.report.cheeger_ok ? "true" : "false",
                 mcdens::format_real(c.met_cond_reference),
                 mcdens::format_real(c.local_floor),
                 mcdens::format_real(c.reversibility_defect), MCDENS_VERSION, config});
        }
    } else {
        std::string doc =
            "{\"version\":\"" MCDENS_VERSION "\",\"config\":" + config + ",\"reports\":[";
        for (std::size_t i = 0; i < cases.size(); ++i) {
            const auto& c = cases[i];
            all_ok = all_ok && c.report.cheeger_ok;
            mcdens::JsonWriter w;
            w.begin_object();
            w.key("rho").value(c.rho_id);
            w.key("alpha").value(c.alpha);
            w.key("delta").value(c.delta);
            w.key("N").value(c.states);
            w.key("beta").value(c.report.beta);
            w.key("lambda").value(c.report.lambda);
            w.key("conductance").value(c.report.conductance);
            w.key("conductance_exhaustive").value(c.report.conductance_exhaustive);
            w.key("cheeger_ok").value(c.report.cheeger_ok);
            w.key("met_cond_reference").value(c.met_cond_reference);
            w.key("local_floor").value(c.local_floor);
            w.key("reversibility_defect").value(c.reversibility_defect);
            w.end_object();
            doc += (i ? "," : "") + w.str();
        }
        doc += "]}\n";
        text = doc;
    }
    write_output(opts.common.out, text);
    return all_ok ? kExitOk : kExitPropertyViolation;
}

// ---------------------------------------------------------------------------
// bounds
// ---------------------------------------------------------------------------

struct BoundsOpts {
    CommonOpts common;
    std::string name;
    std::int64_t n = 0;
    int d = 1;
    double C = 1.0;
    double alpha = 0.0;
    double delta = 0.0;
    double l = 0.3;
    double D = 2.0;
    double vol_ratio = 1.0;
};

mcdens::BoundValue evaluate_bound(const BoundsOpts& o) {
    using namespace mcdens;
    if (o.name == "lower-bound-fc")
        return {o.name, lower_bound_fc(o.n, o.C), lower_bound_fc_regime(o.n, o.C)};
    if (o.name == "upper-bound-simple")
        return {o.name, upper_bound_simple(o.n, o.C), upper_bound_simple_regime(o.n, o.C)};
    if (o.name == "lower-bound-nonadaptive")
        return {o.name, lower_bound_nonadaptive(o.n, o.d, o.alpha, o.vol_ratio),
                lower_bound_nonadaptive_valid(o.n, o.d, o.alpha, o.vol_ratio)
                    ? "valid"
                    : "sample-size-condition-unmet"};
    if (o.name == "conductance-lb-metropolis")
        return {o.name, conductance_lb_metropolis(o.l, o.delta, o.D, o.d, o.alpha),
                conductance_lb_metropolis_regime(o.l, o.delta, o.D, o.d, o.alpha)};
    if (o.name == "conductance-lb-ball")
        return {o.name, conductance_lb_ball(o.delta, o.d, o.alpha), "ball"};
    if (o.name == "error-const-metropolis")
        return {o.name, error_const_metropolis(o.d, o.delta, o.alpha), "-"};
    if (o.name == "error-const-tract")
        return {o.name, error_const_metropolis_tract(o.d, o.alpha),
                o.alpha * o.alpha >= o.d + 1 ? "alpha^2" : "d+1"};
    if (o.name == "delta-star")
        return {o.name, delta_star(o.d, o.alpha),
                o.alpha > std::sqrt(o.d + 1.0) ? "1/alpha" : "1/sqrt(d+1)"};
    if (o.name == "classic-f1") return {o.name, classic_f1_error(o.n), "-"};
    throw std::invalid_argument("unknown bound name: " + o.name);
}

int run_bounds(const BoundsOpts& opts) {
    const mcdens::BoundValue v = evaluate_bound(opts);
    std::string text;
    if (opts.common.format == "csv") {
        text += mcdens::csv_row({"name", "value", "regime", "version"});
        text += mcdens::csv_row({v.name, mcdens::format_real(v.value), v.regime,
                                 MCDENS_VERSION});
    } else {
        mcdens::JsonWriter w;
        w.begin_object();
        w.key("version").value(MCDENS_VERSION);
        w.key("name").value(v.name);
        w.key("value").value(v.value);
        w.key("regime").value(v.regime);
        w.end_object();
        text = w.str() + "\n";
    }
    write_output(opts.common.out, text);
    return kExitOk;
}

void add_common_flags(CLI::App* cmd, CommonOpts& common) {
    cmd->add_option("--seed", common.seed, "random seed (mandatory)")
        ->each([&common](const std::string&) { common.seed_set = true; });
    cmd->add_option("--reps", common.reps, "replications per configuration");
    cmd->add_option("--out", common.out, "output path (default stdout)");
    cmd->add_option("--format", common.format, "csv or json");
    cmd->add_option("--config", common.config_path, "JSON config file (overrides flags)");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Monte Carlo integration against unnormalized densities"};
    app.set_version_flag("--version", std::string(MCDENS_VERSION));
    app.require_subcommand(1);

    FcOpts fc;
    CLI::App* fc_cmd = app.add_subcommand("bench-fc",
                                          "simple MC on the ratio-bounded hard family "
                                          "against the analytic sandwich");
    add_common_flags(fc_cmd, fc.common);
    fc_cmd->add_option("--C", fc.Cs, "density ratio bounds");
    fc_cmd->add_option("--n", fc.ns, "sample sizes (strictly increasing)");
    fc_cmd->add_option("--prior-draws", fc.prior_draws, "instances drawn from the prior");

    GapOpts gap;
    CLI::App* gap_cmd = app.add_subcommand("bench-gap",
                                           "worst-case simple MC vs tuned Metropolis on "
                                           "the ball hard family");
    add_common_flags(gap_cmd, gap.common);
    gap_cmd->add_option("--d", gap.d, "dimension");
    gap_cmd->add_option("--alpha", gap.alpha, "log-density Lipschitz constant");
    gap_cmd->add_option("--m", gap.m, "packing size");
    gap_cmd->add_option("--n", gap.ns, "sample sizes (strictly increasing)");
    double gap_delta = -1.0;
    gap_cmd->add_option("--delta", gap_delta, "ball-walk width (default: delta*)");

    SpectralOpts spec;
    CLI::App* spec_cmd = app.add_subcommand("spectral",
                                            "discretized-chain eigenvalue, conductance "
                                            "and Cheeger reports");
    add_common_flags(spec_cmd, spec.common);
    spec_cmd->add_option("--alpha", spec.alphas, "Lipschitz constants");
    spec_cmd->add_option("--delta", spec.deltas, "ball-walk widths");
    spec_cmd->add_option("--N", spec.Ns, "cell counts");

    BoundsOpts bounds;
    CLI::App* bounds_cmd =
        app.add_subcommand("bounds", "evaluate a named analytic bound");
    add_common_flags(bounds_cmd, bounds.common);
    bounds_cmd->add_option("--name", bounds.name, "bound identifier");
    bounds_cmd->add_option("--n", bounds.n, "sample size");
    bounds_cmd->add_option("--d", bounds.d, "dimension");
    bounds_cmd->add_option("--C", bounds.C, "density ratio bound");
    bounds_cmd->add_option("--alpha", bounds.alpha, "Lipschitz constant");
    bounds_cmd->add_option("--delta", bounds.delta, "ball-walk width");
    bounds_cmd->add_option("--l", bounds.l, "local conductance floor");
    bounds_cmd->add_option("--D", bounds.D, "body diameter");
    bounds_cmd->add_option("--vol-ratio", bounds.vol_ratio, "vol(Omega)/vol(B^d)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (fc_cmd->parsed()) {
            if (!fc.common.config_path.empty()) {
                const nlohmann::json j = load_config(fc.common.config_path);
                apply_common_config(j, fc.common);
                if (j.contains("C")) fc.Cs = j.at("C").get<std::vector<double>>();
                if (j.contains("n")) fc.ns = j.at("n").get<std::vector<std::int64_t>>();
                if (j.contains("prior_draws")) fc.prior_draws = j.at("prior_draws").get<int>();
            }
            validate_common(fc.common);
            validate_schedule(fc.ns);
            if (fc.prior_draws < 1) throw std::invalid_argument("prior_draws >= 1");
            return run_bench_fc(fc);
        }
        if (gap_cmd->parsed()) {
            if (gap_delta > 0.0) gap.delta = gap_delta;
            if (!gap.common.config_path.empty()) {
                const nlohmann::json j = load_config(gap.common.config_path);
                apply_common_config(j, gap.common);
                if (j.contains("d")) gap.d = j.at("d").get<int>();
                if (j.contains("alpha")) gap.alpha = j.at("alpha").get<double>();
                if (j.contains("m")) gap.m = j.at("m").get<int>();
                if (j.contains("n")) gap.ns = j.at("n").get<std::vector<std::int64_t>>();
                if (j.contains("delta") && !j.at("delta").is_null())
                    gap.delta = j.at("delta").get<double>();
            }
            validate_common(gap.common);
            validate_schedule(gap.ns);
            try {
                return run_bench_gap(gap);
            } catch (const mcdens::PackingError& e) {
                std::cerr << "infeasible experiment: " << e.what() << "\n";
                return kExitInfeasible;
            }
        }
        if (spec_cmd->parsed()) {
            if (!spec.common.config_path.empty()) {
                const nlohmann::json j = load_config(spec.common.config_path);
                apply_common_config(j, spec.common);
                if (j.contains("alpha")) spec.alphas = j.at("alpha").get<std::vector<double>>();
                if (j.contains("delta")) spec.deltas = j.at("delta").get<std::vector<double>>();
                if (j.contains("N")) spec.Ns = j.at("N").get<std::vector<int>>();
            }
            validate_common(spec.common);
            return run_spectral(spec);
        }
        if (bounds_cmd->parsed()) {
            if (!bounds.common.config_path.empty()) {
                const nlohmann::json j = load_config(bounds.common.config_path);
                apply_common_config(j, bounds.common);
                if (j.contains("name")) bounds.name = j.at("name").get<std::string>();
                if (j.contains("n")) bounds.n = j.at("n").get<std::int64_t>();
                if (j.contains("d")) bounds.d = j.at("d").get<int>();
                if (j.contains("C")) bounds.C = j.at("C").get<double>();
                if (j.contains("alpha")) bounds.alpha = j.at("alpha").get<double>();
                if (j.contains("delta")) bounds.delta = j.at("delta").get<double>();
                if (j.contains("l")) bounds.l = j.at("l").get<double>();
                if (j.contains("D")) bounds.D = j.at("D").get<double>();
                if (j.contains("vol_ratio")) bounds.vol_ratio = j.at("vol_ratio").get<double>();
            }
            validate_common(bounds.common);
            return run_bounds(bounds);
        }
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitPropertyViolation;
    }
    return kExitUsage;
}
