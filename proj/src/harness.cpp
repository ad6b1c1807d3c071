#include "shocklab/harness.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>

#include <json.hpp>

#include "shocklab/interface.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace shocklab::mc {

namespace {

constexpr const char* kVersion = "0.1.0";

std::string fmt_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

tasep::ShockSample run_one_replica(const ExperimentConfig& cfg, i64 replica, i64& retries) {
    const SeedSpec base = SeedSpec{cfg.master_seed, 0}.for_replica(static_cast<u64>(replica));
    for (u64 attempt = 0;; ++attempt) {
        const SeedSpec seed = base.with_retry(attempt);
        try {
            if (cfg.engine == "interface") {
                WeightField field;
                field.seed = seed;
                const auto path =
                    compint::competition_interface_until(field, cfg.lambda, cfg.rho, cfg.t);
                return tasep::make_shock_sample(path.position_at(cfg.t),
                                                path.step_count_until(cfg.t), cfg.t, cfg.lambda,
                                                cfg.rho);
            }
            tasep::TasepConfig tc;
            tc.lambda = cfg.lambda;
            tc.rho = cfg.rho;
            tc.horizon = cfg.t;
            tc.window_halfwidth = tasep::default_halfwidth(cfg.t) * (1 + static_cast<i64>(attempt));
            tasep::TasepState state(tc);
            return state.run_until(cfg.t, seed);
        } catch (const WindowOverflow&) {
            if (attempt >= 4) throw;
            ++retries;
        }
    }
}

}  // namespace

void ExperimentConfig::validate() const {
    if (replicas < 1) throw InvalidParameter("ExperimentConfig: replicas must be >= 1");
    if (!(t > 0.0)) throw InvalidParameter("ExperimentConfig: t must be positive");
    if (engine != "direct" && engine != "interface")
        throw InvalidParameter("ExperimentConfig: engine must be direct or interface");
    tasep::TasepConfig tc;
    tc.lambda = lambda;
    tc.rho = rho;
    tc.horizon = t;
    tc.validate();
}

std::vector<double> SampleSet::x_rescaled() const {
    std::vector<double> v;
    v.reserve(samples.size());
    for (const auto& s : samples) v.push_back(s.x_rescaled);
    return v;
}

std::vector<double> SampleSet::n_rescaled() const {
    std::vector<double> v;
    v.reserve(samples.size());
    for (const auto& s : samples) v.push_back(s.n_rescaled);
    return v;
}

SampleSet run_shock_experiment(const ExperimentConfig& cfg) {
    cfg.validate();
    const auto t0 = std::chrono::steady_clock::now();
    SampleSet set;
    set.cfg = cfg;
    set.samples.resize(cfg.replicas);
    std::vector<i64> retries(cfg.replicas, 0);

    const int workers = cfg.workers > 0 ? cfg.workers : 0;
#ifdef _OPENMP
    if (workers > 0) {
#pragma omp parallel for schedule(dynamic) num_threads(workers)
        for (i64 rep = 0; rep < cfg.replicas; ++rep)
            set.samples[rep] = run_one_replica(cfg, rep, retries[rep]);
    } else {
#pragma omp parallel for schedule(dynamic)
        for (i64 rep = 0; rep < cfg.replicas; ++rep)
            set.samples[rep] = run_one_replica(cfg, rep, retries[rep]);
    }
#else
    for (i64 rep = 0; rep < cfg.replicas; ++rep)
        set.samples[rep] = run_one_replica(cfg, rep, retries[rep]);
#endif
    for (i64 r : retries) set.overflow_retries += r;
    set.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return set;
}

std::string samples_to_csv(const SampleSet& set) {
    std::string out = "replica,t,lambda,rho,x_t,n_t,x_rescaled,n_rescaled\n";
    for (size_t i = 0; i < set.samples.size(); ++i) {
        const auto& s = set.samples[i];
        out += std::to_string(i) + ',' + fmt_double(set.cfg.t) + ',' +
               fmt_double(set.cfg.lambda) + ',' + fmt_double(set.cfg.rho) + ',' +
               std::to_string(s.x_t) + ',' + std::to_string(s.n_t) + ',' +
               fmt_double(s.x_rescaled) + ',' + fmt_double(s.n_rescaled) + '\n';
    }
    return out;
}

std::string summary_json(const SampleSet& set, const std::vector<KsReport>& reports) {
    nlohmann::ordered_json j;
    j["version"] = kVersion;
    j["config"] = {{"id", set.cfg.id},           {"lambda", set.cfg.lambda},
                   {"rho", set.cfg.rho},         {"t", set.cfg.t},
                   {"replicas", set.cfg.replicas}, {"master_seed", set.cfg.master_seed},
                   {"engine", set.cfg.engine},   {"workers", set.cfg.workers}};
    const auto xr = set.x_rescaled();
    const auto nr = set.n_rescaled();
    std::vector<double> x;
    for (const auto& s : set.samples) x.push_back(static_cast<double>(s.x_t));
    if (!x.empty())
        j["moments"] = {{"mean_x", mean_of(x)},
                        {"var_x", x.size() > 1 ? variance_of(x) : 0.0},
                        {"mean_x_rescaled", mean_of(xr)},
                        {"var_x_rescaled", xr.size() > 1 ? variance_of(xr) : 0.0},
                        {"mean_n_rescaled", mean_of(nr)},
                        {"var_n_rescaled", nr.size() > 1 ? variance_of(nr) : 0.0}};
    j["overflow_retries"] = set.overflow_retries;
    j["runtime_seconds"] = set.wall_seconds;
    nlohmann::ordered_json ks = nlohmann::ordered_json::array();
    for (const auto& r : reports)
        ks.push_back({{"reference", r.reference},
                      {"ks", r.ks},
                      {"n", r.n_samples},
                      {"threshold", r.threshold},
                      {"pass", r.pass}});
    j["ks_reports"] = ks;
    return j.dump(2) + "\n";
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << content;
    if (!out) throw std::runtime_error("write failed: " + path);
}

void persist(const SampleSet& set, const std::vector<KsReport>& reports,
             const std::string& out_base) {
    write_file(out_base + ".csv", samples_to_csv(set));
    write_file(out_base + ".json", summary_json(set, reports));
}

}  // namespace shocklab::mc
