#include <doctest.h>

#include <cmath>
#include <set>

#include "causalcast/errors.hpp"
#include "causalcast/stat_tests.hpp"
#include "causalcast/synth.hpp"

using namespace causalcast;

TEST_SUITE_BEGIN("synth");

TEST_CASE("sample_graph class membership and determinism") {
    const GeneratorParams params{};
    const auto a = sample_graph(ModelClass::path, 3, 42, params);
    const auto b = sample_graph(ModelClass::path, 3, 42, params);
    CHECK(canonical_key(a) == canonical_key(b));
    const PathModel& pm = std::get<PathModel>(a);
    CHECK(pm.n() == 3);
    CHECK(pm.adj_corr().size() == 2);

    GeneratorParams saturated;
    saturated.edge_prob = 1.0;
    const Dag dag =
std::get<Dag>(sample_graph(ModelClass::dag, 5, 7, saturated));
    CHECK(dag.edges().size() == 10);  // complete DAG on the sampled order

    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto pt = sample_graph(ModelClass::polytree, 7, seed, params);
        CHECK(is_polytree(std::get<Polytree>(pt).dag()));
        CHECK(std::get<Polytree>(pt).dag().edges().size() == 6);  // spanning tree
    }
}

TEST_CASE("sem_covariance closed forms") {
    LinearSem empty;
    empty.graph = Dag(3, {});
    empty.noise.assign(3, NoiseSpec{NoiseSpec::Kind::gaussian, 1.0});
    CHECK(sem_covariance(empty).isApprox(Eigen::MatrixXd::Identity(3, 3), 1e-14));

    LinearSem chain;
    chain.graph = Dag(2, {{0, 1}});
    chain.coeffs[{0, 1}] = 0.7;
    chain.noise.assign(2, NoiseSpec{NoiseSpec::Kind::gaussian, 1.0});
    const Eigen::MatrixXd cov = sem_covariance(chain);
    CHECK(cov(0, 1) == doctest::Approx(0.7).epsilon(1e-14));
    CHECK(cov(1, 1) == doctest::Approx(1.0 + 0.49).epsilon(1e-14));
}

TEST_CASE("sample covariance approaches the population covariance") {
    GeneratorParams params{};
    const Dag dag =
std::get<Dag>(sample_graph(ModelClass::dag, 4, 11, GeneratorParams{1.0, 0.5, 0.9}));
    const LinearSem sem = sample_sem(dag, 12, params);
    const Eigen::MatrixXd pop = sem_covariance(sem);
    const Dataset d = sample_data(sem, 1000000, 13);
    Eigen::MatrixXd centered = d.rows.rowwise() - d.rows.colwise().mean();
    const Eigen::MatrixXd sample = centered.transpose() * centered / double(d.l());
    CHECK((sample - pop).cwiseAbs().maxCoeff() < 0.01);
}

TEST_CASE("path SEM reproduces the product rule exactly") {
    const GeneratorParams params{};
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const PathModel pm =
std::get<PathModel>(sample_graph(ModelClass::path, 6, seed, params));
        const Eigen::MatrixXd cov = sem_covariance(path_sem(pm));
        for (int i = 0; i < 6; ++i) {
            CHECK(cov(i, i) == doctest::Approx(1.0).epsilon(1e-12));
            for (int j = i + 1; j < 6; ++j) {
                const double corr = cov(i, j) / std::sqrt(cov(i, i) * cov(j, j));
                CHECK(corr == doctest::Approx(predict_corr(pm, i, j).value).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("sample_data is deterministic and has CLT-scale means") {
    LinearSem sem;
    sem.graph = Dag(2, {{0, 1}});
    sem.coeffs[{0, 1}] = 0.8;
    sem.noise.assign(2, NoiseSpec{NoiseSpec::Kind::gaussian, 1.0});
    const Dataset a = sample_data(sem, 5000, 99);
    const Dataset b = sample_data(sem, 5000, 99);
    CHECK(a.rows == b.rows);
    const Dataset single = sample_data(sem, 1, 5);
    CHECK(single.l() == 1);
    for (int c = 0; c < 2; ++c) {
        const double scale = std::sqrt(sem_covariance(sem)(c, c));
        CHECK(std::abs(a.rows.col(c).mean()) < 4.0 * scale / std::sqrt(5000.0));
    }
}

TEST_CASE("slice_overlapping shared and disjoint") {
    LinearSem sem;
    sem.graph = Dag(3, {{0, 1}, {1, 2}});
    sem.coeffs[{0, 1}] = 0.8;
    sem.coeffs[{1, 2}] = 0.7;
    sem.noise.assign(3, NoiseSpec{NoiseSpec::Kind::gaussian, 1.0});
    const Dataset d = sample_data(sem, 1000, 1);

    const auto identity = slice_overlapping(d, {{0, 1, 2}}, RowMode::shared, 1);
    CHECK(identity.size() == 1);
    CHECK(identity[0].rows == d.rows);

    const auto halves = slice_overlapping(d, {{0, 1}, {1, 2}}, RowMode::disjoint, 7);
    CHECK(halves.size() == 2);
    CHECK(halves[0].l() == 500);
    CHECK(halves[1].l() == 500);
    // Sample-disjointness: no source row serves two slices, which shows as
    // disjoint multisets of the shared column's values here.
    std::multiset<double> left(halves[0].rows.col(1).data(),
                               halves[0].rows.col(1).data() + 500);
    for (long r = 0; r < 500; ++r) {
        const auto it = left.find(halves[1].rows(r, 0));
        CHECK(it == left.end());
    }
    CHECK_THROWS_AS(slice_overlapping(d, {{0, 5}}, RowMode::shared, 1), InputError);

    const Dataset tiny(Eigen::MatrixXd::Zero(1, 3), VariableTuple{0, 1, 2});
    CHECK_THROWS_AS(slice_overlapping(tiny, {{0}, {1}}, RowMode::disjoint, 1), InputError);
}

TEST_CASE("query universes and sampling") {
    CHECK(query_universe(QueryKind::cond_indep, 5).size() == 30);
    CHECK(query_universe(QueryKind::sign_corr, 5).size() == 10);
    CHECK(query_universe(QueryKind::direction, 5).size() == 20);

    const auto all = sample_queries(QueryKind::cond_indep, 5, 30, 3, {});
    CHECK(all.size() == 30);
    std::set<std::string> keys;
    for (const auto& q : all) keys.insert(q.key());
    CHECK(keys.size() == 30);

    const auto train = sample_queries(QueryKind::cond_indep, 5, 12, 3, {});
    const auto test = sample_queries(QueryKind::cond_indep, 5, 18, 4, train);
    std::set<std::string> train_keys;
    for (const auto& q : train) train_keys.insert(q.key());
    for (const auto& q : test) CHECK(train_keys.count(q.key()) == 0);

    CHECK_THROWS_AS(sample_queries(QueryKind::cond_indep, 5, 31, 1, {}), InputError);
    CHECK_THROWS_AS(sample_queries(QueryKind::anm_admissible, 5, 1, 1, {}), InputError);

    const auto iid = sample_queries_iid(QueryKind::cond_indep, 5, 100, 9, {});
    CHECK(iid.size() == 100);
}

TEST_CASE("ci_test agrees with d-separation predictions on polytree data at large l") {
    const GeneratorParams params{};  // |coeffs| in [0.5, 0.9]
    const TestConfig cfg{};
    int agree = 0, total = 0;
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
        const Polytree pt =
std::get<Polytree>(sample_graph(ModelClass::polytree, 8, seed, params));
        const LinearSem sem = sample_sem(pt.dag(), seed + 100, params);
        const Dataset d = sample_data(sem, 100000, seed + 200);
        for (const auto& q : query_universe(QueryKind::cond_indep, 8)) {
            const Outcome predicted = predict_ci(pt.dag(), q);
            const Outcome tested = ci_test(d, q, cfg);
            ++total;
            if (predicted == tested) ++agree;
        }
    }
    CHECK(total == 3 * 168);
    CHECK(static_cast<double>(agree) / total >= 0.95);
}

TEST_SUITE_END();
