#pragma once

// Replica orchestration and persistence. Results are a pure function of
// (config, master seed): replicas own disjoint seed streams, outputs are
// merged by replica index, and overflowed replicas rerun on a retry stream
// with an enlarged window instead of being dropped.

#include <string>
#include <vector>

#include "shocklab/stats.hpp"
#include "shocklab/tasep.hpp"

namespace shocklab::mc {

struct ExperimentConfig {
    std::string id = "shock";
    double lambda = 0.25;
    double rho = 0.75;
    double t = 1000.0;
    i64 replicas = 4000;
    u64 master_seed = 1;
    std::string engine = "direct";  // "direct" (site clocks) or "interface"
    int workers = 0;                // 0 = runtime default

    void validate() const;
};

struct SampleSet {
    ExperimentConfig cfg;
    std::vector<tasep::ShockSample> samples;  // ordered by replica
    i64 overflow_retries = 0;
    double wall_seconds = 0.0;

    std::vector<double> x_rescaled() const;
    std::vector<double> n_rescaled() const;
};

SampleSet run_shock_experiment(const ExperimentConfig& cfg);

std::string samples_to_csv(const SampleSet& set);
std::string summary_json(const SampleSet& set, const std::vector<KsReport>& reports);

void write_file(const std::string& path, const std::string& content);

// writes <out_base>.csv and <out_base>.json
void persist(const SampleSet& set, const std::vector<KsReport>& reports,
             const std::string& out_base);

}  // namespace shocklab::mc
