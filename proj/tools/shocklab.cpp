// Command-line entry point. Every run echoes its effective configuration and
// writes machine-readable artifacts; identical invocations with the same seed
// reproduce identical sample files regardless of the worker count.
//
// Exit codes: 0 all executed checks passed, 1 a check failed, 2 usage or
// parameter error, 3 internal invariant violation.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "shocklab/acceptance.hpp"
#include "shocklab/harness.hpp"
#include "shocklab/lpp.hpp"
#include "shocklab/scaling.hpp"
#include "shocklab/stationary.hpp"
#include "shocklab/stats.hpp"
#include "shocklab/tw.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace shocklab;

namespace {

std::vector<std::string> g_written;

void note_artifact(const std::string& path) { g_written.push_back(path); }

void remove_partial_artifacts() {
    for (const auto& p : g_written) {
        std::error_code ec;
        std::filesystem::remove(p, ec);
    }
}

std::string out_path(const std::string& name) {
    if (const char* dir = std::getenv("SHOCKLAB_OUT_DIR");
        dir != nullptr && *dir != '\0' && !name.empty() && name[0] != '/') {
        std::filesystem::create_directories(dir);
        return std::string(dir) + "/" + name;
    }
    return name;
}

int effective_workers(int flag_value) {
    if (flag_value > 0) return flag_value;
    if (const char* env = std::getenv("SHOCKLAB_WORKERS"); env != nullptr && *env != '\0')
        return std::max(1, std::atoi(env));
    return 0;
}

void write_artifact(const std::string& path, const std::string& content) {
    note_artifact(path);
    mc::write_file(path, content);
}

std::string fmt17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string table_csv(const tw::DistTable& t) {
    std::string csv = "s,cdf\n";
    for (size_t i = 0; i < t.s_grid.size(); ++i)
        csv += fmt17(t.s_grid[i]) + "," + fmt17(t.cdf[i]) + "\n";
    return csv;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"shocklab -- TASEP shock and last-passage fluctuation laboratory"};
    app.name("shocklab");
    app.set_help_all_flag("--help-all", "Print help for every subcommand");
    app.require_subcommand(1);

    // shared option storage
    double lambda = 0.25, rho = 0.75, t = 1000.0, varrho = 0.4, c_off = 1.0;
    i64 n_scale = 1000, replicas = 4000, instances = 1000;
    u64 seed = 20240809;
    int workers = 0, order = 64;
    double r_param = 1.0;
    std::string out = "", format = "csv", mode = "pp", engine = "direct", dist = "gue",
                which = "x";
    bool quick = false;
    std::vector<int> only;

    int exit_code = 0;
    std::function<void()> run;

    auto add_seed = [&](CLI::App* cmd) {
        cmd->add_option("--seed", seed, "Master seed (decimal)")->capture_default_str();
    };
    auto add_workers = [&](CLI::App* cmd) {
        cmd->add_option("--workers", workers, "Worker threads (0 = all available)")
            ->capture_default_str();
    };
    auto add_densities = [&](CLI::App* cmd) {
        cmd->add_option("--lambda", lambda, "Density left of the origin")->capture_default_str();
        cmd->add_option("--rho", rho, "Density right of the origin")->capture_default_str();
    };

    // ---- constants ----
    {
        auto* cmd = app.add_subcommand("constants", "Print the shock constants for (lambda, rho)");
        add_densities(cmd);
        cmd->callback([&]() {
            run = [&]() {
                const ShockConstants sc = shock_constants(lambda, rho);
                nlohmann::ordered_json j;
                j["lambda"] = sc.lambda;
                j["rho"] = sc.rho;
                j["v"] = sc.v;
                j["gamma"] = sc.gamma;
                j["mu0"] = sc.mu0;
                j["upsilon"] = sc.upsilon;
                j["sigma1"] = sc.sigma1;
                j["sigma2"] = sc.sigma2;
                j["xi_lambda"] = sc.xi_lambda;
                j["xi_rho"] = sc.xi_rho;
                std::cout << j.dump(2) << "\n";
            };
        });
    }

    // ---- simulate ----
    {
        auto* cmd = app.add_subcommand("simulate", "Run the shock experiment and persist samples");
        add_densities(cmd);
        cmd->add_option("--t", t, "Time horizon")->capture_default_str();
        cmd->add_option("--replicas", replicas, "Number of replicas")->capture_default_str();
        cmd->add_option("--engine", engine, "direct or interface")->capture_default_str();
        cmd->add_option("--out", out, "Output base path (default: shock-<t>)");
        cmd->add_option("--format", format, "Sample output format: csv or json")
            ->capture_default_str();
        add_seed(cmd);
        add_workers(cmd);
        cmd->callback([&]() {
            run = [&]() {
                mc::ExperimentConfig cfg;
                cfg.lambda = lambda;
                cfg.rho = rho;
                cfg.t = t;
                cfg.replicas = replicas;
                cfg.master_seed = seed;
                cfg.engine = engine;
                cfg.workers = effective_workers(workers);
                const mc::SampleSet set = mc::run_shock_experiment(cfg);
                const std::string base =
                    out_path(out.empty() ? "shock-" + std::to_string(static_cast<i64>(t)) : out);
                if (format == "json") {
                    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
                    for (size_t i = 0; i < set.samples.size(); ++i)
                        rows.push_back({{"replica", i},
                                        {"x_t", set.samples[i].x_t},
                                        {"n_t", set.samples[i].n_t},
                                        {"x_rescaled", set.samples[i].x_rescaled},
                                        {"n_rescaled", set.samples[i].n_rescaled}});
                    write_artifact(base + "-samples.json", rows.dump(2) + "\n");
                } else if (format == "csv") {
                    write_artifact(base + ".csv", mc::samples_to_csv(set));
                } else {
                    throw InvalidParameter("simulate: --format must be csv or json");
                }
                const std::string summary = mc::summary_json(set, {});
                write_artifact(base + ".json", summary);
                std::cout << summary;
            };
        });
    }

    // ---- lpp-sample ----
    {
        auto* cmd = app.add_subcommand(
            "lpp-sample", "Sample one-point passage-time laws and test them against the limit");
        cmd->add_option("--mode", mode, "pp (point-to-point) or line (the two shock half lines)")
            ->capture_default_str();
        cmd->add_option("--n", n_scale, "Linear scale N")->capture_default_str();
        cmd->add_option("--replicas", replicas, "Replicas")->capture_default_str();
        add_densities(cmd);
        cmd->add_option("--out", out, "Optional CSV path for the rescaled samples");
        add_seed(cmd);
        add_workers(cmd);
        cmd->callback([&]() {
            run = [&]() {
                std::vector<mc::KsReport> reports;
                std::string csv = "sample\n";
                if (mode == "pp") {
                    const tw::DistTable gue = tw::tabulate_gue(order);
                    const PtPointScaling ps = pt_point_scaling(1.0);
                    const double n13 = std::cbrt(static_cast<double>(n_scale));
                    std::vector<double> xs(replicas);
#pragma omp parallel for schedule(dynamic)
                    for (i64 rep = 0; rep < replicas; ++rep) {
                        WeightField f;
                        f.seed = SeedSpec{seed, 0}.for_replica(rep);
                        const auto o = lpp::lpp_point_to_point(f, {0, 0}, {n_scale, n_scale});
                        xs[rep] =
                            (o.value - ps.mu_pp * static_cast<double>(n_scale)) /
                            (ps.sigma_eta * n13);
                    }
                    for (double x : xs) csv += fmt17(x) + "\n";
                    reports.push_back(mc::make_ks_report(
                        "gue", xs, [&](double s) { return gue.cdf_at(s); }, 0.05));
                } else if (mode == "line") {
                    const tw::DistTable goe = tw::tabulate_goe(order);
                    const ShockConstants sc = shock_constants(lambda, rho);
                    const auto pairs =
                        one_point_samples(n_scale, replicas, sc, SeedSpec{seed, 0});
                    const double two23 = std::pow(2.0, 2.0 / 3.0);
                    std::vector<double> a, b;
                    for (const auto& p : pairs) {
                        a.push_back(p.chi_lambda);
                        b.push_back(p.chi_rho);
                        csv += fmt17(p.chi_lambda) + "," + fmt17(p.chi_rho) + "\n";
                    }
                    reports.push_back(mc::make_ks_report(
                        "goe-lambda", a,
                        [&](double s) { return goe.cdf_at(two23 * s / sc.sigma1); }, 0.05));
                    reports.push_back(mc::make_ks_report(
                        "goe-rho", b,
                        [&](double s) { return goe.cdf_at(two23 * s / sc.sigma2); }, 0.05));
                } else {
                    throw InvalidParameter("lpp-sample: --mode must be pp or line");
                }
                if (!out.empty()) write_artifact(out_path(out), csv);
                nlohmann::ordered_json j = nlohmann::ordered_json::array();
                for (const auto& r : reports) {
                    j.push_back({{"reference", r.reference},
                                 {"ks", r.ks},
                                 {"n", r.n_samples},
                                 {"threshold", r.threshold},
                                 {"pass", r.pass}});
                    if (!r.pass) exit_code = 1;
                }
                std::cout << j.dump(2) << "\n";
            };
        });
    }

    // ---- stationary-check ----
    {
        auto* cmd = app.add_subcommand(
            "stationary-check", "Stationarity of boundary-driven increments and exit translation");
        cmd->add_option("--n", n_scale, "Linear scale N")->capture_default_str();
        cmd->add_option("--lambda", lambda, "Line density")->capture_default_str();
        cmd->add_option("--varrho", varrho, "Boundary parameter")->capture_default_str();
        cmd->add_option("--replicas", replicas, "Replicas")->capture_default_str();
        add_seed(cmd);
        add_workers(cmd);
        cmd->callback([&]() {
            run = [&]() {
                std::vector<double> incs, lag_a, lag_b;
                const i64 per_rep = 50;
                for (i64 rep = 0; rep < replicas; ++rep) {
                    const SeedSpec rs = SeedSpec{seed, 0}.for_replica(rep);
                    WeightField bulk;
                    bulk.seed = rs;
                    stat::StationaryModel model{lambda, varrho, rs};
                    std::vector<Point> targets;
                    for (i64 i = 0; i <= per_rep; ++i) targets.push_back({n_scale + i, n_scale});
                    const auto o = model.solve(bulk, targets);
                    for (i64 i = 1; i <= per_rep; ++i) {
                        incs.push_back(o[i].value - o[i - 1].value);
                        if (i >= 2) {
                            lag_a.push_back(o[i - 1].value - o[i - 2].value);
                            lag_b.push_back(o[i].value - o[i - 1].value);
                        }
                    }
                }
                const auto ks = mc::make_ks_report(
                    "exp(1-varrho)", incs,
                    [&](double x) {
                        return x <= 0.0 ? 0.0 : 1.0 - std::exp(-(1.0 - varrho) * x);
                    },
                    0.02);
                const double lag1 = mc::pearson(lag_a, lag_b);
                nlohmann::ordered_json j;
                j["ks_increments"] = ks.ks;
                j["ks_pass"] = ks.pass;
                j["lag1"] = lag1;
                j["lag1_pass"] = std::fabs(lag1) <= 0.03;
                std::cout << j.dump(2) << "\n";
                if (!ks.pass || std::fabs(lag1) > 0.03) exit_code = 1;
            };
        });
    }

    // ---- exit-tails ----
    {
        auto* cmd =
            app.add_subcommand("exit-tails", "Tail profile of the stationary exit point");
        cmd->add_option("--n", n_scale, "Linear scale N")->capture_default_str();
        cmd->add_option("--lambda", lambda, "Line density")->capture_default_str();
        cmd->add_option("--varrho", varrho, "Boundary parameter")->capture_default_str();
        cmd->add_option("--c", c_off, "Antidiagonal offset in units of N^(1/3)")
            ->capture_default_str();
        cmd->add_option("--replicas", replicas, "Replicas")->capture_default_str();
        cmd->add_option("--out", out, "Optional CSV path");
        add_seed(cmd);
        cmd->callback([&]() {
            run = [&]() {
                const std::vector<double> m_grid = {0.4, 0.6, 0.8, 1.0, 1.25, 1.5, 2.0};
                const auto prof = stat::exit_tail_profile(n_scale, lambda, varrho, c_off,
                                                          m_grid, replicas, SeedSpec{seed, 0});
                std::string csv = "m,probability,beyond_window\n";
                bool monotone = true;
                for (size_t i = 0; i < prof.size(); ++i) {
                    csv += fmt17(prof[i].m) + "," + fmt17(prof[i].probability) + "," +
                           (prof[i].beyond_window ? "1" : "0") + "\n";
                    if (i > 0 && prof[i].probability > prof[i - 1].probability + 1e-12)
                        monotone = false;
                }
                if (!out.empty()) write_artifact(out_path(out), csv);
                std::cout << csv;
                if (!monotone) exit_code = 1;
            };
        });
    }

    // ---- coupling-check ----
    {
        auto* cmd = app.add_subcommand(
            "coupling-check", "Deterministic comparison inequalities against the stationary model");
        cmd->add_option("--n", n_scale, "Linear scale N")->capture_default_str();
        cmd->add_option("--lambda", lambda, "Line density")->capture_default_str();
        cmd->add_option("--r", r_param, "Boundary perturbation in units of N^(-1/3)")
            ->capture_default_str();
        cmd->add_option("--instances", instances, "Random instances")->capture_default_str();
        add_seed(cmd);
        cmd->callback([&]() {
            run = [&]() {
                const double n13 = std::cbrt(static_cast<double>(n_scale));
                i64 premises = 0, violations = 0;
                for (i64 inst = 0; inst < instances; ++inst) {
                    const SeedSpec rs = SeedSpec{seed, 0}.for_replica(inst);
                    WeightField bulk;
                    bulk.seed = rs;
                    const double sign = inst % 2 == 0 ? 1.0 : -1.0;
                    stat::StationaryModel model{lambda, lambda + sign * r_param / n13, rs};
                    const i64 x1 =
                        1 + static_cast<i64>(rs.block(0).first % static_cast<u64>(2 * n13));
                    const i64 x2 =
                        x1 + 1 + static_cast<i64>(rs.block(1).first % static_cast<u64>(2 * n13));
                    const auto c = stat::coupling_inequality_check(bulk, model, n_scale, x1, x2);
                    if (c.premise_up) {
                        ++premises;
                        violations += c.holds_up ? 0 : 1;
                    }
                    if (c.premise_down) {
                        ++premises;
                        violations += c.holds_down ? 0 : 1;
                    }
                }
                nlohmann::ordered_json j;
                j["instances"] = instances;
                j["held_premises"] = premises;
                j["violations"] = violations;
                std::cout << j.dump(2) << "\n";
                if (violations != 0 || premises == 0) exit_code = 1;
            };
        });
    }

    // ---- good-event ----
    {
        auto* cmd = app.add_subcommand(
            "good-event", "Complement probability of the exit-ordering event over an r-grid");
        cmd->add_option("--n", n_scale, "Linear scale N")->capture_default_str();
        add_densities(cmd);
        cmd->add_option("--replicas", replicas, "Replicas per r")->capture_default_str();
        add_seed(cmd);
        cmd->callback([&]() {
            run = [&]() {
                nlohmann::ordered_json j = nlohmann::ordered_json::array();
                double prev = 1.0;
                bool monotone = true;
                for (double rr : {1.0, 2.0, 4.0, 8.0}) {
                    const double comp = stat::good_event_complement(n_scale, rr, 2.0, lambda,
                                                                    rho, replicas,
                                                                    SeedSpec{seed, 0});
                    j.push_back({{"r", rr}, {"complement", comp}});
                    if (comp > prev + 1e-12) monotone = false;
                    prev = comp;
                }
                std::cout << j.dump(2) << "\n";
                if (!monotone || prev > 0.05) exit_code = 1;
            };
        });
    }

    // ---- tw-table ----
    {
        auto* cmd = app.add_subcommand("tw-table", "Emit a Tracy-Widom CDF table as CSV");
        cmd->add_option("--dist", dist, "gue or goe")->capture_default_str();
        cmd->add_option("--order", order, "Quadrature order")->capture_default_str();
        cmd->add_option("--out", out, "CSV path (default: tw-<dist>.csv)");
        cmd->callback([&]() {
            run = [&]() {
                tw::DistTable tab;
                if (dist == "gue")
                    tab = tw::tabulate_gue(order);
                else if (dist == "goe")
                    tab = tw::tabulate_goe(order);
                else
                    throw InvalidParameter("tw-table: --dist must be gue or goe");
                const std::string path = out_path(out.empty() ? "tw-" + dist + ".csv" : out);
                write_artifact(path, table_csv(tab));
                std::cout << "wrote " << path << " (" << tab.s_grid.size() << " rows)\n";
            };
        });
    }

    // ---- limit-law ----
    {
        auto* cmd = app.add_subcommand(
            "limit-law", "Emit the limit CDF of the position (x) or jump count (n)");
        cmd->add_option("--which", which, "x or n")->capture_default_str();
        add_densities(cmd);
        cmd->add_option("--order", order, "Quadrature order")->capture_default_str();
        cmd->add_option("--out", out, "CSV path (default: limit-law-<which>.csv)");
        cmd->callback([&]() {
            run = [&]() {
                const ShockConstants sc = shock_constants(lambda, rho);
                const tw::DistTable goe = tw::tabulate_goe(order);
                tw::DistTable law;
                if (which == "x")
                    law = tw::limit_law_cdf(tw::LimitLaw::kPosition, sc, goe);
                else if (which == "n")
                    law = tw::limit_law_cdf(tw::LimitLaw::kJumpCount, sc, goe);
                else
                    throw InvalidParameter("limit-law: --which must be x or n");
                const std::string path =
                    out_path(out.empty() ? "limit-law-" + which + ".csv" : out);
                write_artifact(path, table_csv(law));
                std::cout << "wrote " << path << " (" << law.s_grid.size() << " rows)\n";
            };
        });
    }

    // ---- verify ----
    {
        auto* cmd = app.add_subcommand("verify", "Run the acceptance suite");
        cmd->add_flag("--quick", quick, "Reduced problem sizes (smoke run, not the gate)");
        cmd->add_option("--only", only, "Run only these criteria (1-13)");
        add_seed(cmd);
        add_workers(cmd);
        cmd->callback([&]() {
            run = [&]() {
                accept::Options o;
                o.quick = quick;
                o.master_seed = seed;
                o.workers = effective_workers(workers);
                o.only = only;
                const auto results = accept::run_acceptance(o, std::cout);
                std::cout << (accept::all_pass(results) ? "ALL PASS" : "FAILURES PRESENT")
                          << "\n";
                if (!accept::all_pass(results)) exit_code = 1;
            };
        });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

#ifdef _OPENMP
    if (const int w = effective_workers(workers); w > 0) omp_set_num_threads(w);
#endif

    try {
        run();
    } catch (const InvalidParameter& e) {
        remove_partial_artifacts();
        std::cerr << "parameter error: " << e.what() << "\n";
        return 2;
    } catch (const ContractViolation& e) {
        remove_partial_artifacts();
        std::cerr << "internal invariant violation: " << e.what() << "\n";
        return 3;
    } catch (const DegenerateTie& e) {
        remove_partial_artifacts();
        std::cerr << "degenerate tie: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        remove_partial_artifacts();
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return exit_code;
}
