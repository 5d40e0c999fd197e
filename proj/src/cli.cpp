#include "trigdens/cli.hpp"

#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>

#include "trigdens/harness.hpp"
#include "trigdens/io.hpp"
#include "trigdens/parallel.hpp"
#include "trigdens/posterior.hpp"

namespace trigdens {

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitIo = 3;

std::string sidecar_path(const std::string& out, const char* ext) {
    if (out.size() > 4 && out.substr(out.size() - 4) == ".csv")
        return out.substr(0, out.size() - 4) + ext;
    return out + ext;
}

std::vector<double> parse_double_list(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        char* end = nullptr;
        const double v = std::strtod(item.c_str(), &end);
        if (end == item.c_str() || *end != '\0')
            throw std::invalid_argument("bad numeric list entry: '" + item + "'");
        out.push_back(v);
    }
    if (out.empty()) throw std::invalid_argument("empty numeric list");
    return out;
}

std::vector<int> parse_int_list(const std::string& s) {
    std::vector<int> out;
    for (double v : parse_double_list(s)) {
        const int i = static_cast<int>(v);
        if (static_cast<double>(i) != v)
            throw std::invalid_argument("expected integer list, got: " + s);
        out.push_back(i);
    }
    return out;
}

void check_keys(const json& obj, const std::string& ctx, std::initializer_list<const char*> allowed) {
    if (!obj.is_object()) throw std::invalid_argument(ctx + ": expected a JSON object");
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool known = false;
        for (const char* k : allowed)
            if (it.key() == k) {
                known = true;
                break;
            }
        if (!known) throw std::invalid_argument(ctx + ": unknown key '" + it.key() + "'");
    }
}

void check_schema(const json& cfg) {
    if (!cfg.is_object() || !cfg.contains("schema"))
        throw std::invalid_argument("config: missing 'schema'");
    if (!cfg.at("schema").is_number_integer() || cfg.at("schema").get<int>() != 1)
        throw std::invalid_argument("config: unsupported schema version");
}

json load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    json cfg;
    try {
        in >> cfg;
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(std::string("config parse error: ") + e.what());
    }
    check_schema(cfg);
    return cfg;
}

TargetDensity parse_target(const json& t) {
    check_keys(t, "target", {"kind", "coeffs"});
    const std::string kind = t.at("kind").get<std::string>();
    if (kind == "logsine") {
        if (t.contains("coeffs")) throw std::invalid_argument("target: logsine takes no coeffs");
        return TargetDensity::logsine();
    }
    if (kind == "uniform") {
        if (t.contains("coeffs")) throw std::invalid_argument("target: uniform takes no coeffs");
        return TargetDensity::finite(CoefficientVector{{0.0}});
    }
    if (kind == "theta") {
        if (!t.contains("coeffs")) throw std::invalid_argument("target: theta requires coeffs");
        return TargetDensity::finite(CoefficientVector{t.at("coeffs").get<std::vector<double>>()});
    }
    throw std::invalid_argument("target: unknown kind '" + kind + "'");
}

json target_json(const TargetDensity& t) {
    json j;
    if (t.kind == TargetDensity::Kind::LogSine) {
        j["kind"] = "logsine";
    } else {
        j["kind"] = "theta";
        j["coeffs"] = t.theta.coeffs;
    }
    return j;
}

void emit(const std::string& out, const std::string& content) {
    if (out == "-")
        std::fwrite(content.data(), 1, content.size(), stdout);
    else
        io::write_text_file(out, content);
}

// ---- simulate ------------------------------------------------------------

struct SimulateOpts {
    std::string target = "logsine";
    std::string theta_list;
    long n = 0;
    std::uint64_t seed = 1;
    std::string out;
    int quad_points = kDefaultQuadPoints;
};

int run_simulate(const SimulateOpts& o) {
    if (o.n < 1) throw std::invalid_argument("simulate: --n must be >= 1");
    TargetDensity target;
    if (o.target == "logsine") {
        target = TargetDensity::logsine();
    } else if (o.target == "uniform") {
        target = TargetDensity::finite(CoefficientVector{{0.0}});
    } else if (o.target == "theta") {
        if (o.theta_list.empty())
            throw std::invalid_argument("simulate: --target theta requires --theta");
        target = TargetDensity::finite(CoefficientVector{parse_double_list(o.theta_list)});
    } else {
        throw std::invalid_argument("simulate: unknown target '" + o.target + "'");
    }
    const Dataset data = target.draw(o.n, o.seed, o.quad_points);
    std::ostringstream csv;
    io::write_dataset_csv(csv, data);
    emit(o.out, csv.str());
    if (o.out != "-") {
        json meta;
        meta["schema"] = 1;
        meta["command"] = "simulate";
        meta["target"] = target_json(target);
        meta["n"] = o.n;
        meta["seed"] = o.seed;
        meta["quad_points"] = o.quad_points;
        io::write_text_file(sidecar_path(o.out, ".json"), meta.dump(2) + "\n");
    }
    return kExitOk;
}

// ---- fit -----------------------------------------------------------------

struct FitOpts {
    std::string data_path;
    std::string estimator = "fixed";
    int p = 2;
    double q = 1.0;
    double gamma = 0.1;
    std::string grid_list;
    std::string weights_list;
    std::uint64_t seed = 1;
    std::string out;
    std::string chain_out;
    int quad_points = kDefaultQuadPoints;
    long mcmc_burn_in = 10'000;
    int mcmc_thinning = 10;
    long mcmc_draws = 1'000;
    double mcmc_step = 0.0;  // 0 = auto
    int mcmc_psi_points = 1024;
};

void write_chain_csv(const std::string& path, const Chain& chain) {
    std::ostringstream buf;
    for (int j = 1; j <= chain.N; ++j) buf << (j > 1 ? "," : "") << "theta" << j;
    buf << "\n";
    for (const CoefficientVector& draw : chain.draws) {
        for (int j = 1; j <= chain.N; ++j)
            buf << (j > 1 ? "," : "") << io::format_double(draw.at(j));
        buf << "\n";
    }
    io::write_text_file(path, buf.str());
}

int run_fit(const FitOpts& o) {
    if (o.p < 1) throw std::invalid_argument("fit: --p must be >= 1");
    if (o.q <= 0.0) throw std::invalid_argument("fit: --q must be > 0");
    const Dataset data = io::read_dataset_csv(o.data_path);
    const ModelConfig cfg = ModelConfig::make(o.p, o.q, o.quad_points);

    EstimateResult est;
    json extra;
    if (o.estimator == "fixed") {
        est = estimate_fixed(data, o.p, o.q, cfg);
    } else if (o.estimator == "sieve") {
        est = estimate_sieve(data, o.p, o.q, o.gamma, cfg);
        extra["gamma"] = o.gamma;
    } else if (o.estimator == "adaptive") {
        if (o.grid_list.empty()) throw std::invalid_argument("fit: adaptive requires --grid");
        const std::vector<int> grid = parse_int_list(o.grid_list);
        std::vector<double> weights(grid.size(), 1.0);
        if (!o.weights_list.empty()) {
            weights = parse_double_list(o.weights_list);
            if (weights.size() != grid.size())
                throw std::invalid_argument("fit: --weights length must match --grid");
        }
        est = estimate_adaptive(data, grid, weights, o.q, cfg);
        extra["grid"] = grid;
        extra["prior_weights"] = weights;
    } else if (o.estimator == "mcmc") {
        const double B1_sq = basis::tail_constants(o.p, o.q).B1_sq;
        const int N = dimension_N(PriorVariant::TruncatedFixed, o.p, o.q, data.n(), B1_sq);
        McmcParams params;
        params.burn_in = o.mcmc_burn_in;
        params.thinning = o.mcmc_thinning;
        params.n_draws = o.mcmc_draws;
        if (o.mcmc_step > 0.0) params.step_scale = o.mcmc_step;
        params.psi_quad_points = o.mcmc_psi_points;
        const Chain chain = rw_metropolis(data, o.p, o.q, N, cfg, params, o.seed);
        est.density = posterior_mean_density(chain, cfg);
        est.variant = EstimatorKind::McmcMean;
        est.N_used = N;
        est.normalizer = 1.0;
        extra["acceptance_rate"] = chain.acceptance_rate;
        extra["mcmc"] = {{"burn_in", params.burn_in},
                         {"thinning", params.thinning},
                         {"n_draws", params.n_draws},
                         {"step_scale", o.mcmc_step},
                         {"psi_quad_points", params.psi_quad_points}};
        if (!o.chain_out.empty()) {
            write_chain_csv(o.chain_out, chain);
            json cmeta;
            cmeta["schema"] = 1;
            cmeta["command"] = "fit";
            cmeta["N"] = chain.N;
            cmeta["p"] = chain.p;
            cmeta["q"] = chain.Q;
            cmeta["seed"] = chain.seed;
            cmeta["acceptance_rate"] = chain.acceptance_rate;
            cmeta["draws"] = static_cast<long>(chain.draws.size());
            io::write_text_file(sidecar_path(o.chain_out, ".json"), cmeta.dump(2) + "\n");
        }
    } else {
        throw std::invalid_argument("fit: unknown estimator '" + o.estimator + "'");
    }

    std::ostringstream csv;
    io::write_density_csv(csv, est.density);
    emit(o.out, csv.str());
    if (o.out != "-") {
        json meta;
        meta["schema"] = 1;
        meta["command"] = "fit";
        meta["data"] = o.data_path;
        meta["estimator"] = o.estimator;
        meta["variant"] = to_string(est.variant);
        meta["p"] = o.p;
        meta["q"] = o.q;
        meta["n"] = data.n();
        meta["seed"] = o.seed;
        meta["quad_points"] = o.quad_points;
        meta["N_used"] = est.N_used;
        meta["normalizer"] = est.normalizer;
        if (!est.model_weights.empty()) meta["model_weights"] = est.model_weights;
        for (auto it = extra.begin(); it != extra.end(); ++it) meta[it.key()] = it.value();
        io::write_text_file(sidecar_path(o.out, ".json"), meta.dump(2) + "\n");
    }
    return kExitOk;
}

// ---- rate-study ----------------------------------------------------------

int run_rate_study(const std::string& config_path, const std::string& out, int threads_flag) {
    const json jcfg = load_config(config_path);
    check_keys(jcfg, "rate-study config",
               {"schema", "target", "p", "q", "estimator", "gamma", "n_grid", "replications",
                "seed", "quad_points", "threads"});

    RateStudyConfig sc;
    sc.target = parse_target(jcfg.at("target"));
    sc.p = jcfg.value("p", 2);
    sc.Q = jcfg.value("q", 1.0);
    const std::string est = jcfg.value("estimator", std::string("fixed"));
    if (est == "fixed") sc.estimator = EstimatorKind::Fixed;
    else if (est == "sieve") sc.estimator = EstimatorKind::Sieve;
    else throw std::invalid_argument("rate-study: estimator must be 'fixed' or 'sieve'");
    sc.gamma = jcfg.value("gamma", 0.1);
    sc.n_grid = jcfg.at("n_grid").get<std::vector<long>>();
    sc.replications = jcfg.value("replications", 100);
    sc.seed = jcfg.value("seed", 1ULL);
    sc.threads = threads_flag > 0 ? threads_flag : jcfg.value("threads", 0);
    const int quad_points = jcfg.value("quad_points", kDefaultQuadPoints);
    const ModelConfig cfg = ModelConfig::make(sc.p, sc.Q, quad_points);

    const RateStudyReport report = rate_study(sc, cfg);

    json jr;
    jr["schema"] = 1;
    jr["command"] = "rate-study";
    jr["config"] = {{"target", target_json(sc.target)},
                    {"p", sc.p},
                    {"q", sc.Q},
                    {"estimator", est},
                    {"gamma", sc.gamma},
                    {"n_grid", sc.n_grid},
                    {"replications", sc.replications},
                    {"seed", sc.seed},
                    {"quad_points", quad_points}};
    jr["n_grid"] = report.n_grid;
    jr["mean_h2"] = report.mean_h2;
    jr["se_h2"] = report.se_h2;
    jr["mean_kl"] = report.mean_kl;
    jr["mean_l2_sq"] = report.mean_l2_sq;
    jr["slope"] = report.slope;
    jr["slope_se"] = report.slope_se;
    jr["intercept"] = report.intercept;
    jr["reference_slope"] = report.reference_slope;
    jr["residuals"] = report.residuals;
    jr["replications"] = report.replications;
    jr["seed"] = report.seed;
    emit(out, jr.dump(2) + "\n");

    if (out != "-") {
        std::ostringstream csv;
        csv << "n,mean_h2,se_h2,mean_kl,mean_l2_sq\n";
        for (std::size_t i = 0; i < report.n_grid.size(); ++i)
            csv << report.n_grid[i] << "," << io::format_double(report.mean_h2[i]) << ","
                << io::format_double(report.se_h2[i]) << ","
                << io::format_double(report.mean_kl[i]) << ","
                << io::format_double(report.mean_l2_sq[i]) << "\n";
        io::write_text_file(sidecar_path(out, ".csv"), csv.str());
    }
    return kExitOk;
}

// ---- contraction ---------------------------------------------------------

int run_contraction(const std::string& config_path, const std::string& out, int threads_flag) {
    const json jcfg = load_config(config_path);
    check_keys(jcfg, "contraction config",
               {"schema", "target", "p", "q", "n_grid", "chains", "seed", "quad_points",
                "threads", "radius_multiplier", "radius_fixed", "mcmc"});

    const TargetDensity target = parse_target(jcfg.at("target"));
    const int p = jcfg.value("p", 2);
    const double Q = jcfg.value("q", 1.0);
    const std::vector<long> n_grid = jcfg.at("n_grid").get<std::vector<long>>();
    if (n_grid.empty()) throw std::invalid_argument("contraction: empty n_grid");
    const int chains = jcfg.value("chains", 8);
    if (chains < 1) throw std::invalid_argument("contraction: chains must be >= 1");
    const std::uint64_t seed = jcfg.value("seed", 1ULL);
    const int threads = threads_flag > 0 ? threads_flag : jcfg.value("threads", 0);
    const int quad_points = jcfg.value("quad_points", 1024);
    const bool has_mult = jcfg.contains("radius_multiplier");
    const bool has_fixed = jcfg.contains("radius_fixed");
    if (has_mult == has_fixed)
        throw std::invalid_argument(
            "contraction: give exactly one of radius_multiplier / radius_fixed");

    McmcParams params;
    if (jcfg.contains("mcmc")) {
        const json& jm = jcfg.at("mcmc");
        check_keys(jm, "mcmc",
                   {"burn_in", "thinning", "n_draws", "step_scale", "adapt", "psi_quad_points"});
        params.burn_in = jm.value("burn_in", params.burn_in);
        params.thinning = jm.value("thinning", params.thinning);
        params.n_draws = jm.value("n_draws", params.n_draws);
        if (jm.value("step_scale", 0.0) > 0.0) params.step_scale = jm.at("step_scale").get<double>();
        params.adapt_during_burn_in = jm.value("adapt", true);
        params.psi_quad_points = jm.value("psi_quad_points", params.psi_quad_points);
    }

    const ModelConfig cfg = ModelConfig::make(p, Q, quad_points);
    const GridDensity truth = target.density(quad_points);
    const double B1_sq = cfg.tail.B1_sq;

    const std::size_t levels = n_grid.size();
    std::vector<double> fractions(levels * chains, 0.0);
    std::vector<double> radii(levels, 0.0);
    std::vector<int> dims(levels, 0);
    for (std::size_t level = 0; level < levels; ++level) {
        const double n = static_cast<double>(n_grid[level]);
        radii[level] = has_mult ? jcfg.at("radius_multiplier").get<double>() *
                                      std::pow(n, -p / (2.0 * p + 1.0))
                                : jcfg.at("radius_fixed").get<double>();
        dims[level] = dimension_N(PriorVariant::TruncatedFixed, p, Q, n_grid[level], B1_sq);
    }

    parallel_for(static_cast<long>(levels * chains), threads, [&](long idx) {
        const std::size_t level = idx / chains;
        const Dataset data =
            target.draw(n_grid[level], mix_seed(seed, 2 * idx), quad_points);
        const Chain chain = rw_metropolis(data, p, Q, dims[level], cfg, params,
                                          mix_seed(seed, 2 * idx + 1));
        fractions[idx] = contraction_diagnostic(chain, truth, radii[level], cfg);
    });

    json jr;
    jr["schema"] = 1;
    jr["command"] = "contraction";
    jr["config"] = jcfg;
    json results = json::array();
    for (std::size_t level = 0; level < levels; ++level) {
        json r;
        r["n"] = n_grid[level];
        r["N"] = dims[level];
        r["radius"] = radii[level];
        std::vector<double> fr(fractions.begin() + level * chains,
                               fractions.begin() + (level + 1) * chains);
        r["fractions"] = fr;
        double mean = 0.0;
        for (double f : fr) mean += f;
        mean /= chains;
        double var = 0.0;
        for (double f : fr) var += (f - mean) * (f - mean);
        var /= (chains > 1 ? chains - 1 : 1);
        r["mean_fraction"] = mean;
        r["se_fraction"] = std::sqrt(var / chains);
        results.push_back(r);
    }
    jr["results"] = results;
    emit(out, jr.dump(2) + "\n");
    return kExitOk;
}

}  // namespace

int cli_main(const std::vector<std::string>& args) {
    CLI::App app{"Bayesian density estimation for trigonometric-series exponential families"};
    app.require_subcommand(1);

    SimulateOpts sim;
    CLI::App* c_sim = app.add_subcommand("simulate", "Draw an i.i.d. sample from a target density");
    c_sim->add_option("--target", sim.target, "logsine | uniform | theta");
    c_sim->add_option("--theta", sim.theta_list, "comma-separated coefficients (theta target)");
    c_sim->add_option("--n", sim.n, "sample size")->required();
    c_sim->add_option("--seed", sim.seed, "RNG seed");
    c_sim->add_option("--out", sim.out, "output CSV path or '-'")->required();
    c_sim->add_option("--quad-points", sim.quad_points, "quadrature grid size");

    FitOpts fit;
    CLI::App* c_fit = app.add_subcommand("fit", "Estimate a density from a dataset CSV");
    c_fit->add_option("--data", fit.data_path, "dataset CSV")->required();
    c_fit->add_option("--estimator", fit.estimator, "fixed | sieve | adaptive | mcmc");
    c_fit->add_option("--p", fit.p, "smoothness");
    c_fit->add_option("--q", fit.q, "ellipsoid radius Q");
    c_fit->add_option("--gamma", fit.gamma, "sieve decay");
    c_fit->add_option("--grid", fit.grid_list, "adaptive smoothness grid, e.g. 1,2,3");
    c_fit->add_option("--weights", fit.weights_list, "adaptive prior weights");
    c_fit->add_option("--seed", fit.seed, "RNG seed (mcmc)");
    c_fit->add_option("--out", fit.out, "output CSV path or '-'")->required();
    c_fit->add_option("--chain-out", fit.chain_out, "chain CSV path (mcmc)");
    c_fit->add_option("--quad-points", fit.quad_points, "quadrature grid size");
    c_fit->add_option("--mcmc-burnin", fit.mcmc_burn_in, "MCMC burn-in iterations");
    c_fit->add_option("--mcmc-thinning", fit.mcmc_thinning, "MCMC thinning");
    c_fit->add_option("--mcmc-draws", fit.mcmc_draws, "MCMC kept draws");
    c_fit->add_option("--mcmc-step", fit.mcmc_step, "MCMC step scale (0 = auto)");
    c_fit->add_option("--mcmc-psi-points", fit.mcmc_psi_points, "psi quadrature inside MCMC");

    std::string rs_config, rs_out = "-";
    int rs_threads = 0;
    CLI::App* c_rs = app.add_subcommand("rate-study", "Monte Carlo convergence-rate study");
    c_rs->add_option("--config", rs_config, "JSON config")->required();
    c_rs->add_option("--out", rs_out, "report JSON path or '-'");
    c_rs->add_option("--threads", rs_threads, "worker threads");

    std::string ct_config, ct_out = "-";
    int ct_threads = 0;
    CLI::App* c_ct = app.add_subcommand("contraction", "Posterior contraction diagnostics");
    c_ct->add_option("--config", ct_config, "JSON config")->required();
    c_ct->add_option("--out", ct_out, "diagnostics JSON path or '-'");
    c_ct->add_option("--threads", ct_threads, "worker threads");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        std::cout << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        std::cerr << "trigdens: " << e.what() << "\n";
        return kExitConfig;
    }

    try {
        if (c_sim->parsed()) return run_simulate(sim);
        if (c_fit->parsed()) return run_fit(fit);
        if (c_rs->parsed()) return run_rate_study(rs_config, rs_out, rs_threads);
        if (c_ct->parsed()) return run_contraction(ct_config, ct_out, ct_threads);
        std::cerr << "trigdens: no subcommand\n";
        return kExitConfig;
    } catch (const std::invalid_argument& e) {
        std::cerr << "trigdens: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::runtime_error& e) {
        std::cerr << "trigdens: " << e.what() << "\n";
        return kExitIo;
    }
}

int cli_main(int argc, char** argv) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return cli_main(args);
}

}  // namespace trigdens
