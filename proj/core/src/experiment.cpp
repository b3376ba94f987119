#include "causalcast/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>
#include <unordered_set>

#include "causalcast/errors.hpp"
#include "causalcast/rng.hpp"
#include "causalcast/stat_tests.hpp"

namespace causalcast {

namespace {

// Per-seed sub-streams of the experiment.
enum Stream : std::uint64_t {
    kGraphStream = 1,
    kSemStream = 2,
    kDataStream = 3,
    kTrainStream = 4,
    kTestStream = 5,
    kFitStream = 6,
    kTrainSliceStream = 7,
    kTestSliceStream = 8,
};

bool class_answers_kind(ModelClass c, QueryKind kind) {
    switch (c) {
        case ModelClass::dag:
        case ModelClass::polytree:
            return kind == QueryKind::cond_indep;
        case ModelClass::path:
            return kind == QueryKind::corr_value || kind == QueryKind::sign_corr;
        case ModelClass::path_sign:
            return kind == QueryKind::sign_corr;
    }
    return false;
}

const Dag& truth_graph(const CausalModel& truth) {
    if (const auto* d = std::get_if<Dag>(&truth)) return *d;
    return std::get<Polytree>(truth).dag();
}

Outcome label_query(const ExperimentConfig& cfg, const CausalModel& truth, const Dataset* data,
                    const Query& q) {
    if (cfg.label_source == LabelSource::oracle) return model_predict(truth, q);
    switch (cfg.query_kind) {
        case QueryKind::cond_indep:
            return ci_test(*data, q, cfg.test_config);
        case QueryKind::sign_corr:
            return sign_test(*data, q.vars[0], q.vars[1], cfg.test_config);
        case QueryKind::corr_value:
            return Outcome::real(pearson_corr(*data, q.vars[0], q.vars[1]));
        default:
            throw ConfigError("experiment cannot label " + to_string(cfg.query_kind) + " queries");
    }
}

// Labels a batch of queries. Shared row mode projects the full sample per
// query; disjoint mode partitions the rows so every distinct query is
// tested on its own sample (the separate-source regime), with duplicate
// draws of a query reusing its slice.
std::vector<LabeledQuery> label_queries(const ExperimentConfig& cfg, const CausalModel& truth,
                                        const Dataset* data, const std::vector<Query>& queries,
                                        std::uint64_t slice_seed) {
    std::vector<LabeledQuery> out;
    out.reserve(queries.size());
    if (cfg.label_source == LabelSource::oracle || cfg.row_mode == RowMode::shared) {
        for (const auto& q : queries) out.push_back({q, label_query(cfg, truth, data, q)});
        return out;
    }

    std::vector<Query> distinct;
    std::unordered_map<std::string, std::size_t> slice_of;
    for (const auto& q : queries) {
        if (slice_of.try_emplace(q.key(), distinct.size()).second) distinct.push_back(q);
    }
    std::vector<VariableTuple> tuples;
    tuples.reserve(distinct.size());
    for (const auto& q : distinct) {
        VariableTuple t = q.vars;
        t.insert(t.end(), q.cond.begin(), q.cond.end());
        tuples.push_back(std::move(t));
    }
    const std::vector<Dataset> slices = slice_overlapping(*data, tuples, RowMode::disjoint, slice_seed);
    std::vector<Outcome> labels;
    labels.reserve(distinct.size());
    for (std::size_t i = 0; i < distinct.size(); ++i) {
        labels.push_back(label_query(cfg, truth, &slices[i], distinct[i]));
    }
    for (const auto& q : queries) out.push_back({q, labels[slice_of.at(q.key())]});
    return out;
}

}  // namespace

void ExperimentConfig::validate() const {
    generator.validate();
    test_config.validate();
    if (n < 2) throw ConfigError("experiment needs n >= 2");
    if (l < 1) throw ConfigError("experiment needs l >= 1");
    if (!(eta > 0.0 && eta < 1.0)) throw ConfigError("eta must lie in (0, 1)");
    if (k_train < 1) throw ConfigError("k_train must be >= 1");
    if (seeds.empty()) throw ConfigError("at least one seed required");
    if (budget < 1 || restarts < 1) throw ConfigError("budget and restarts must be >= 1");
    if (!class_answers_kind(model_class, query_kind)) {
        throw ConfigError("class " + to_string(model_class) + " cannot answer " +
                          to_string(query_kind) + " queries");
    }
    const std::size_t universe = query_universe(query_kind, n).size();
    if (sample_mode == SampleMode::without_replacement && k_train + k_test > universe) {
        throw ConfigError("k_train + k_test exceeds the query universe of size " +
                          std::to_string(universe));
    }
    if (search_mode == SearchMode::exhaustive) {
        const ModelClass c = model_class;
        if (n > enumeration_cap(c)) {
            throw ConfigError("exhaustive search exceeds the enumeration cap of class " +
                              to_string(c));
        }
    }
}

ExperimentReport run_experiment(const ExperimentConfig& cfg) {
    cfg.validate();
    ExperimentReport report;
    report.config = cfg;

    const ClassSpec::Kind bound_kind = [&] {
        switch (cfg.model_class) {
            case ModelClass::dag: return ClassSpec::Kind::dag;
            case ModelClass::polytree: return ClassSpec::Kind::polytree;
            case ModelClass::path: return ClassSpec::Kind::path_corr;
            case ModelClass::path_sign: return ClassSpec::Kind::path_sign;
        }
        return ClassSpec::Kind::dag;
    }();
    const double h = vc_upper(ClassSpec{bound_kind, cfg.n, std::nullopt});

    for (const std::uint64_t seed : cfg.seeds) {
        SeedResult result;
        result.seed = seed;

        const CausalModel truth =
            sample_graph(cfg.model_class, cfg.n, derive_seed(seed, kGraphStream), cfg.generator);

        std::optional<Dataset> data;
        if (cfg.label_source == LabelSource::stat_test) {
            LinearSem sem;
            if (cfg.model_class == ModelClass::path) {
                sem = path_sem(std::get<PathModel>(truth));
            } else if (cfg.model_class == ModelClass::path_sign) {
                throw ConfigError("path_sign experiments support oracle labels only");
            } else {
                sem = sample_sem(truth_graph(truth), derive_seed(seed, kSemStream), cfg.generator);
            }
            data = sample_data(sem, cfg.l, derive_seed(seed, kDataStream));
        }

        const auto draw = [&](std::size_t count, std::uint64_t stream,
                              const std::vector<Query>& exclusions) {
            const std::uint64_t s = derive_seed(seed, stream);
            return cfg.sample_mode == SampleMode::with_replacement
                       ? sample_queries_iid(cfg.query_kind, cfg.n, count, s, exclusions)
                       : sample_queries(cfg.query_kind, cfg.n, count, s, exclusions);
        };

        const std::vector<Query> train_queries = draw(cfg.k_train, kTrainStream, {});
        const std::vector<LabeledQuery> train =
            label_queries(cfg, truth, data ? &*data : nullptr, train_queries,
                          derive_seed(seed, kTrainSliceStream));

        const FitResult fit =
            cfg.search_mode == SearchMode::exhaustive
                ? fit_exhaustive(cfg.model_class, cfg.n, train)
                : fit_local(cfg.model_class, cfg.n, train, cfg.budget, cfg.restarts,
                            derive_seed(seed, kFitStream));
        result.train_error = fit.train_error;

        if (cfg.k_test > 0) {
            // Held out: test queries never coincide with a trained query.
            std::vector<Query> exclusions;
            {
                std::unordered_set<std::string> seen;
                for (const auto& q : train_queries) {
                    if (seen.insert(q.key()).second) exclusions.push_back(q);
                }
            }
            const std::vector<Query> test_queries = draw(cfg.k_test, kTestStream, exclusions);
            const std::vector<LabeledQuery> test =
                label_queries(cfg, truth, data ? &*data : nullptr, test_queries,
                              derive_seed(seed, kTestSliceStream));
            result.test_error = empirical_error(fit.model, test);
        }

        BoundSpec bs;
        bs.k = cfg.k_train;
        bs.h = h;
        bs.eta = cfg.eta;
        bs.variant = cfg.bound_variant;
        if (cfg.query_kind == QueryKind::corr_value) {
            bs.range_lo = -1.0;
            bs.range_hi = 1.0;
            result.bound_epsilon = real_bound(bs);
        } else {
            result.bound_epsilon = binary_bound(bs);
        }
        if (result.test_error) {
            result.bound_satisfied =
                *result.test_error <= result.train_error + result.bound_epsilon;
            if (*result.bound_satisfied) ++report.satisfied_count;
        }
        report.seeds.push_back(std::move(result));
    }
    const std::size_t with_test =
        static_cast<std::size_t>(std::count_if(report.seeds.begin(), report.seeds.end(),
                                               [](const SeedResult& r) { return r.bound_satisfied.has_value(); }));
    report.satisfaction_rate =
        with_test == 0 ? 0.0 : static_cast<double>(report.satisfied_count) / with_test;
    return report;
}

}  // namespace causalcast
