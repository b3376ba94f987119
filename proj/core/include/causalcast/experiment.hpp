#ifndef CAUSALCAST_EXPERIMENT_HPP
#define CAUSALCAST_EXPERIMENT_HPP

#include <cstdint>
#include <optional>

#include "causalcast/model_search.hpp"
#include "causalcast/synth.hpp"
#include "causalcast/vc_bounds.hpp"

namespace causalcast {

enum class LabelSource { stat_test, oracle };
enum class SearchMode { exhaustive, local };
enum class SampleMode { with_replacement, without_replacement };

/// End-to-end experiment: per seed, generate a ground-truth model, sample
/// data, label k_train queries, fit a model of the class, evaluate on
/// k_test held-out queries, and compare the generalization gap against the
/// bound computed from the class's VC dimension.
struct ExperimentConfig {
    static constexpr const char* kSchema = "causalcast-experiment/1";

    ModelClass model_class = ModelClass::polytree;
    int n = 8;
    long l = 10000;                  // rows per dataset (stat_test labels)
    std::size_t k_train = 200;
    std::size_t k_test = 200;
    double eta = 0.1;
    TestConfig test_config;
    QueryKind query_kind = QueryKind::cond_indep;
    LabelSource label_source = LabelSource::stat_test;
    SampleMode sample_mode = SampleMode::with_replacement;
    RowMode row_mode = RowMode::shared;
    BoundVariant bound_variant = BoundVariant::full;
    GeneratorParams generator;
    SearchMode search_mode = SearchMode::local;
    int budget = 200;
    int restarts = 4;
    std::vector<std::uint64_t> seeds = {1};

    void validate() const;
};

struct SeedResult {
    std::uint64_t seed = 0;
    double train_error = 0.0;
    std::optional<double> test_error;
    double bound_epsilon = 0.0;
    std::optional<bool> bound_satisfied;  // test_error <= train_error + epsilon
};

struct ExperimentReport {
    ExperimentConfig config;
    std::vector<SeedResult> seeds;  // ordered by position in config.seeds
    int satisfied_count = 0;
    double satisfaction_rate = 0.0;
};

ExperimentReport run_experiment(const ExperimentConfig& cfg);

}  // namespace causalcast

#endif
