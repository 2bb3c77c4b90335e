#ifndef MORREYLAB_EXPERIMENTS_HPP
#define MORREYLAB_EXPERIMENTS_HPP

// Named, reproducible experiments turning the boundedness and sharp-maximal
// theorems into desk-scale numerical evidence. Every experiment is a
// deterministic function of its config; re-runs produce byte-identical CSV.

#include <string>

#include "morreylab/core.hpp"

namespace morreylab {

struct ExperimentConfig {
    std::string experiment;
    int dim = 1;
    int J = 2;
    std::vector<int> levels{8, 10, 12};
    std::vector<double> alphas{-0.75, -0.5, -0.25, 0.0, 0.5, 1.4, 1.6};
    double p = 4.0;
    double q = 2.0;
    double s = 1.0;
    double eta = 1.0;
    double lambda = 0.125;
    std::vector<std::string> families{"indicators", "power_cusps", "random_signs",
                                      "bmo_logs", "spikes"};
    std::uint64_t seed = 1;
    int count = 2;  // members per family
    std::string out_dir = "out";
    bool plot = false;
    std::string weight_csv;  // optional, overrides the power weights

    void validate() const;
    std::string canonical_text() const;
    std::uint64_t hash() const;
};

ExperimentConfig parse_config_file(const std::string& path);
ExperimentConfig parse_config_text(const std::string& text);

struct CsvRow {
    double alpha;
    int L;
    std::string metric;
    double value;
};

struct ExperimentResult {
    std::string experiment;
    std::vector<CsvRow> rows;
    std::vector<std::string> summary;  // one line per (alpha, L)
};

// deterministic seeded corpus; families: indicators, power_cusps,
// random_signs, bmo_logs, spikes
struct CorpusItem {
    std::string label;
    GridFunction f;
};
std::vector<CorpusItem> make_corpus(const DyadicGrid& g, const std::vector<std::string>& families,
                                    std::uint64_t seed, int count, double p);

// growth classification per the calibrated thresholds
enum class GrowthClass { Bounded = 0, Inconclusive = 1, Growing = 2 };
GrowthClass classify_growth(const std::vector<double>& step_factors);

ExperimentResult maximal_boundedness_sweep(const ExperimentConfig& cfg);
ExperimentResult sio_boundedness_sweep(const ExperimentConfig& cfg);
ExperimentResult sharp_maximal_equivalence(const ExperimentConfig& cfg);
ExperimentResult sharp_failure_demo(const ExperimentConfig& cfg);
ExperimentResult weak_type_with_candidates(const ExperimentConfig& cfg);
ExperimentResult bmo_equivalence(const ExperimentConfig& cfg);
ExperimentResult median_decay_check(const ExperimentConfig& cfg);

ExperimentResult run_experiment(const ExperimentConfig& cfg);

// CSV with header alpha,L,metric,value; values in shortest round-trip form
std::string csv_text(const ExperimentResult& res);
void write_outputs(const ExperimentConfig& cfg, const ExperimentResult& res);

// parallelism helper: honors MORREYLAB_THREADS, deterministic slot assembly
int experiment_thread_cap();

}  // namespace morreylab

#endif
