#include <doctest.h>

#include <set>

#include "causalcast/enumerate.hpp"
#include "causalcast/errors.hpp"
#include "causalcast/graph.hpp"
#include "../oracles/dsep_oracles.hpp"
#include "helpers.hpp"

using namespace causalcast;
using namespace causalcast::testutil;

TEST_SUITE_BEGIN("graph");

TEST_CASE("is_acyclic basics") {
    CHECK(is_acyclic(3, {}));
    CHECK(is_acyclic(3, {{0, 1}, {1, 2}}));
    CHECK_FALSE(is_acyclic(3, {{0, 1}, {1, 2}, {2, 0}}));
    CHECK_THROWS_AS(is_acyclic(3, {{0, 3}}), InputError);
    CHECK_THROWS_AS(is_acyclic(3, {{1, 1}}), InputError);
}

TEST_CASE("Dag construction validates") {
    CHECK_THROWS_AS(Dag(3, {{0, 1}, {1, 2}, {2, 0}}), InputError);
    const Dag d(3, {{1, 2}, {0, 1}, {0, 1}});  // deduplicated and sorted
    CHECK(d.edges() == std::vector<Edge>{{0, 1}, {1, 2}});
    CHECK(d.has_edge(0, 1));
    CHECK_FALSE(d.has_edge(1, 0));
}

TEST_CASE("is_polytree") {
    CHECK(is_polytree(chain3()));
    CHECK(is_polytree(collider3()));
    CHECK_FALSE(is_polytree(Dag(3, {{0, 1}, {1, 2}, {0, 2}})));
    CHECK_THROWS_AS(Polytree(Dag(3, {{0, 1}, {1, 2}, {0, 2}})), InputError);
}

TEST_CASE("ancestors and descendants") {
    const Dag chain = chain3();
    CHECK(ancestors(chain, 2) == std::vector<int>{0, 1});
    CHECK(ancestors(chain, 0).empty());
    CHECK(ancestors(collider3(), 1) == std::vector<int>{0, 2});
    CHECK(descendants(chain, 0) == std::vector<int>{1, 2});
    CHECK_THROWS_AS(ancestors(chain, 5), InputError);
}

TEST_CASE("d_separated on the chain and collider") {
    const Dag chain = chain3();
    CHECK(d_separated(chain, 0, 2, {1}));
    CHECK_FALSE(d_separated(chain, 0, 2, {}));
    const Dag coll = collider3();
    CHECK(d_separated(coll, 0, 2, {}));
    CHECK_FALSE(d_separated(coll, 0, 2, {1}));
}

TEST_CASE("d_separated input contract") {
    const Dag chain = chain3();
    CHECK_THROWS_AS(d_separated(chain, 1, 1, {}), InputError);
    CHECK_THROWS_AS(d_separated(chain, 0, 2, {0}), InputError);
    CHECK_THROWS_AS(d_separated(chain, 0, 2, {7}), InputError);
}

TEST_CASE("d_separated is symmetric and matches both oracles on all DAGs up to n=4") {
    for (int n = 2; n <= 4; ++n) {
        DagEnumerator e(n);
        while (auto dag = e.next()) {
            for (int i = 0; i < n; ++i) {
                for (int j = i + 1; j < n; ++j) {
                    for (const auto& z : conditioning_sets(n, i, j)) {
                        const bool got = d_separated(*dag, i, j, z);
                        CHECK(got == d_separated(*dag, j, i, z));
                        CHECK(got == oracles::d_separated_moral(*dag, i, j, z));
                        CHECK(got == oracles::d_separated_paths(*dag, i, j, z));
                    }
                }
            }
        }
    }
}

TEST_CASE("common_cause_free") {
    CHECK(common_cause_free(chain3(), 0, 1));
    CHECK_FALSE(common_cause_free(fork3(), 1, 2));
    // Relabeled chain 0->2->1: 0 is an ancestor of both members.
    const Dag relabeled(3, {{0, 2}, {2, 1}});
    CHECK_FALSE(common_cause_free(relabeled, 2, 1));

    // Ancestor-set-intersection oracle over every small DAG.
    for (int n = 2; n <= 4; ++n) {
        DagEnumerator e(n);
        while (auto dag = e.next()) {
            for (int i = 0; i < n; ++i) {
                for (int j = 0; j < n; ++j) {
                    if (i == j) continue;
                    const auto ai = ancestors(*dag, i);
                    const auto aj = ancestors(*dag, j);
                    bool expected = true;
                    for (int c : ai) {
                        if (c != i && c != j &&
                            std::find(aj.begin(), aj.end(), c) != aj.end()) {
                            expected = false;
                        }
                    }
                    CHECK(common_cause_free(*dag, i, j) == expected);
                }
            }
        }
    }
}

TEST_CASE("has_directed_path and topological order") {
    const Dag chain = chain3();
    CHECK(has_directed_path(chain, 0, 2));
    CHECK_FALSE(has_directed_path(chain, 2, 0));
    const auto order = chain.topological_order();
    CHECK(order == std::vector<int>{0, 1, 2});
}

TEST_CASE("variable tuple validation") {
    CHECK_NOTHROW(validate_variable_tuple(4, {0, 3, 1}));
    CHECK_THROWS_AS(validate_variable_tuple(4, {0, 0}), InputError);
    CHECK_THROWS_AS(validate_variable_tuple(4, {4}), InputError);
}

TEST_SUITE_END();
