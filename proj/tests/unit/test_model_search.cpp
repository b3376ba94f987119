#include <doctest.h>

#include <cmath>

#include "causalcast/errors.hpp"
#include "causalcast/model_search.hpp"
#include "causalcast/rng.hpp"
#include "causalcast/synth.hpp"
#include "helpers.hpp"

using namespace causalcast;
using namespace causalcast::testutil;

namespace {

// Oracle labels for every single-conditioner CI triple plus every marginal
// pair of the graph.
std::vector<LabeledQuery> ci_labels_from(const Dag& truth) {
    std::vector<LabeledQuery> out;
    for (const auto& q : query_universe(QueryKind::cond_indep, truth.n())) {
        out.push_back({q, predict_ci(truth, q)});
    }
    for (int a = 0; a < truth.n(); ++a) {
        for (int b = a + 1; b < truth.n(); ++b) {
            const Query q{QueryKind::cond_indep, {a, b}, {}};
            out.push_back({q, predict_ci(truth, q)});
        }
    }
    return out;
}

}  // namespace

TEST_SUITE_BEGIN("model_search");

TEST_CASE("outcome deviation and empirical error") {
    const Dag chain = chain3();
    std::vector<LabeledQuery> qs = {
        {{QueryKind::cond_indep, {0, 2}, {1}}, Outcome::binary(0)},  // match
        {{QueryKind::cond_indep, {0, 1}, {}}, Outcome::binary(0)},   // mismatch
        {{QueryKind::cond_indep, {1, 2}, {}}, Outcome::binary(1)},   // match
    };
    CHECK(empirical_error(CausalModel(chain), qs) == doctest::Approx(1.0 / 3));

    // Perfect fit when the model itself produced the labels.
    CHECK(empirical_error(CausalModel(chain), ci_labels_from(chain)) == 0.0);

    // Sign mismatches count 1 each.
    const PathSignModel psm({0, 1}, {1});
    std::vector<LabeledQuery> sign_qs = {
        {{QueryKind::sign_corr, {0, 1}, {}}, Outcome::sign(1)},
        {{QueryKind::sign_corr, {0, 1}, {}}, Outcome::sign(-1)},
    };
    CHECK(empirical_error(CausalModel(psm), sign_qs) == doctest::Approx(0.5));

    CHECK_THROWS_AS(empirical_error(CausalModel(chain), {}), UndefinedMeanError);
}

TEST_CASE("empirical_error agrees with a plain model_predict loop") {
    Rng rng(4242);
    const GeneratorParams params{};
    for (int t = 0; t < 30; ++t) {
        const auto model = sample_graph(ModelClass::dag, 6, rng.next_u64(), params);
        std::vector<LabeledQuery> qs;
        for (const auto& q : sample_queries(QueryKind::cond_indep, 6, 40, rng.next_u64(), {})) {
            qs.push_back({q, Outcome::binary(rng.coin() ? 1 : 0)});
        }
        double sum = 0.0;
        for (const auto& lq : qs) {
            sum += outcome_deviation(model_predict(model, lq.query), lq.outcome);
        }
        CHECK(empirical_error(model, qs) == doctest::Approx(sum / qs.size()).epsilon(1e-15));
    }
}

TEST_CASE("empirical error ranges") {
    Rng rng(8);
    for (int t = 0; t < 20; ++t) {
        const PathModel pm =
std::get<PathModel>(sample_graph(ModelClass::path, 5, rng.next_u64(), GeneratorParams{}));
        std::vector<LabeledQuery> qs;
        for (const auto& q : query_universe(QueryKind::corr_value, 5)) {
            qs.push_back({q, Outcome::real(rng.uniform(-1.0, 1.0))});
        }
        const double err = empirical_error(CausalModel(pm), qs);
        CHECK(err >= 0.0);
        CHECK(err <= 2.0);
    }
}

TEST_CASE("fit_exhaustive recovers the chain's equivalence class representative") {
    const Dag chain = chain3();
    const auto labels = ci_labels_from(chain);
    const FitResult fit = fit_exhaustive(ModelClass::dag, 3, labels);
    CHECK(fit.train_error == 0.0);
    CHECK(fit.evaluations == 25);
    // Three Markov-equivalent DAGs fit perfectly; canonical order picks the
    // chain itself (lexicographically smallest edge list).
    CHECK(std::get<Dag>(fit.model) == chain);

    int perfect = 0;
    DagEnumerator e(3);
    while (auto d = e.next()) {
        if (empirical_error(CausalModel(*d), labels) == 0.0) ++perfect;
    }
    CHECK(perfect == 3);
}

TEST_CASE("fit_exhaustive with no queries returns the first canonical model") {
    const FitResult fit = fit_exhaustive(ModelClass::dag, 3, {});
    CHECK(std::get<Dag>(fit.model).edges().empty());
    CHECK(std::isnan(fit.train_error));
}

TEST_CASE("fit_exhaustive with contradictory duplicate labels") {
    const Query q{QueryKind::cond_indep, {0, 1}, {}};
    const std::vector<LabeledQuery> qs = {{q, Outcome::binary(0)}, {q, Outcome::binary(1)}};
    const FitResult fit = fit_exhaustive(ModelClass::dag, 2, qs);
    CHECK(fit.train_error == doctest::Approx(0.5));
}

TEST_CASE("round trip: exhaustive fit reaches zero error on self-labeled queries") {
    Rng rng(12);
    const GeneratorParams params{};
    for (int t = 0; t < 5; ++t) {
        const auto truth = sample_graph(ModelClass::polytree, 4, rng.next_u64(), params);
        std::vector<LabeledQuery> qs;
        for (const auto& q : query_universe(QueryKind::cond_indep, 4)) {
            qs.push_back({q, model_predict(truth, q)});
        }
        CHECK(fit_exhaustive(ModelClass::polytree, 4, qs).train_error == 0.0);
    }
    for (int t = 0; t < 5; ++t) {
        const auto truth = sample_graph(ModelClass::path_sign, 4, rng.next_u64(), params);
        std::vector<LabeledQuery> qs;
        for (const auto& q : query_universe(QueryKind::sign_corr, 4)) {
            qs.push_back({q, model_predict(truth, q)});
        }
        CHECK(fit_exhaustive(ModelClass::path_sign, 4, qs).train_error == 0.0);
    }
    for (int t = 0; t < 5; ++t) {
        const auto truth = sample_graph(ModelClass::path, 5, rng.next_u64(), params);
        std::vector<LabeledQuery> qs;
        for (const auto& q : query_universe(QueryKind::corr_value, 5)) {
            qs.push_back({q, model_predict(truth, q)});
        }
        CHECK(fit_exhaustive(ModelClass::path, 5, qs).train_error <= 1e-9);
    }
}

TEST_CASE("fit_local: chain labels reach zero error in most seeds") {
    const auto labels = ci_labels_from(chain3());
    int zero = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const FitResult fit = fit_local(ModelClass::dag, 3, labels, 200, 3, seed);
        if (fit.train_error == 0.0) ++zero;
    }
    CHECK(zero >= 95);
}

TEST_CASE("fit_local with budget 1 equals one steepest step from the seeded start") {
    const auto labels = ci_labels_from(chain3());
    const std::uint64_t seed = 424242;
    const FitResult one = fit_local(ModelClass::dag, 3, labels, 1, 1, seed);
    // Restart 0 starts from sample_graph with the derived child seed.
    const CausalModel init =
        sample_graph(ModelClass::dag, 3, derive_seed(seed, 0), GeneratorParams{});
    const FitResult step = fit_local_step(init, labels);
    CHECK(canonical_key(one.model) == canonical_key(step.model));
    CHECK(one.train_error == step.train_error);
}

TEST_CASE("fit_local is deterministic and never beats fit_exhaustive") {
    Rng rng(77);
    const GeneratorParams params{};
    for (int t = 0; t < 5; ++t) {
        const auto truth = sample_graph(ModelClass::dag, 4, rng.next_u64(), params);
        std::vector<LabeledQuery> qs;
        for (const auto& q : sample_queries(QueryKind::cond_indep, 4, 8, rng.next_u64(), {})) {
            qs.push_back({q, model_predict(truth, q)});
        }
        const FitResult local_a = fit_local(ModelClass::dag, 4, qs, 50, 3, 5);
        const FitResult local_b = fit_local(ModelClass::dag, 4, qs, 50, 3, 5);
        CHECK(local_a.train_error == local_b.train_error);
        CHECK(canonical_key(local_a.model) == canonical_key(local_b.model));
        CHECK(fit_exhaustive(ModelClass::dag, 4, qs).train_error <= local_a.train_error);
    }
}

TEST_CASE("fit_local polytree benchmark: oracle triples at n=10") {
    const GeneratorParams params{};
    int good = 0;
    const int trials = 100;
    for (std::uint64_t seed = 0; seed < trials; ++seed) {
        const auto truth = sample_graph(ModelClass::polytree, 10, derive_seed(900, seed), params);
        std::vector<LabeledQuery> qs;
        for (const auto& q :
             sample_queries_iid(QueryKind::cond_indep, 10, 500, derive_seed(901, seed), {})) {
            qs.push_back({q, model_predict(truth, q)});
        }
        const FitResult fit = fit_local(ModelClass::polytree, 10, qs, 5000, 10, seed);
        if (fit.train_error <= 0.05) ++good;
    }
    CHECK(good >= 90);
}

TEST_CASE("fit_path_params round trips exact product-rule observations") {
    const PathModel truth({0, 1, 2, 3}, {0.5, -0.5, 0.8});
    std::vector<CorrObservation> obs;
    for (int i = 0; i < 4; ++i) {
        for (int j = i + 1; j < 4; ++j) {
            obs.push_back({i, j, predict_corr(truth, i, j).value});
        }
    }
    const PathParamsFit fit = fit_path_params(truth.perm(), obs);
    REQUIRE(fit.adj_corr.size() == 3);
    CHECK(fit.adj_corr[0] == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(fit.adj_corr[1] == doctest::Approx(-0.5).epsilon(1e-9));
    CHECK(fit.adj_corr[2] == doctest::Approx(0.8).epsilon(1e-9));
    CHECK_FALSE(fit.sign_conflict);
    CHECK(fit.uncovered_edges.empty());
}

TEST_CASE("fit_path_params single pair, conflicts, and defaults") {
    const PathParamsFit single = fit_path_params({0, 1}, {{0, 1, 0.7}});
    REQUIRE(single.adj_corr.size() == 1);
    CHECK(single.adj_corr[0] == doctest::Approx(0.7).epsilon(1e-12));

    // Two observations of the same edge with opposite signs: majority is
    // tied, +1 wins, conflict flagged.
    const PathParamsFit conflicted = fit_path_params({0, 1, 2}, {{0, 1, 0.6}, {0, 1, -0.6}, {1, 2, 0.5}});
    CHECK(conflicted.sign_conflict);
    CHECK(conflicted.adj_corr[0] > 0.0);

    const PathParamsFit uncovered = fit_path_params({0, 1, 2}, {{0, 1, 0.6}});
    CHECK(uncovered.uncovered_edges == std::vector<int>{1});
    CHECK(uncovered.adj_corr[1] == doctest::Approx(0.5));

    const PathParamsFit clamped = fit_path_params({0, 1}, {{0, 1, 0.0}});
    CHECK(clamped.zero_corr_clamped);
    CHECK(clamped.adj_corr[0] != 0.0);

    CHECK_THROWS_AS(fit_path_params({0, 1}, {}), InputError);
}

TEST_SUITE_END();
