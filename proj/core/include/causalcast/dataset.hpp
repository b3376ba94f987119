#ifndef CAUSALCAST_DATASET_HPP
#define CAUSALCAST_DATASET_HPP

#include <Eigen/Dense>

#include "causalcast/graph.hpp"

namespace causalcast {

/// An l x k observation matrix together with the global variable indices
/// its columns refer to.
struct Dataset {
    Eigen::MatrixXd rows;  // l x k
    VariableTuple vars;    // size k, global indices

    Dataset() = default;
    Dataset(Eigen::MatrixXd rows_, VariableTuple vars_);

    long l() const { return rows.rows(); }
    int k() const { return static_cast<int>(vars.size()); }

    /// Column position of global variable `v`; throws InputError if absent.
    int column_of(int v) const;

    /// Projection onto a sub-tuple of the dataset's variables.
    Dataset project(const VariableTuple& subset) const;
};

struct TestConfig {
    double alpha = 0.05;         // significance level for the CI test
    double min_abs_corr = 0.02;  // degeneracy floor for the sign test

    void validate() const;
};

}  // namespace causalcast

#endif
