#pragma once

// Exact eigenvalue counting by matrix inertia, eigenvalue extraction by
// inertia bisection, moment sums over the negative spectrum, the rank-one
// bound-state root equation, oscillation counting for the continuum 1D
// operator, and the disk-well matching problem.

#include <functional>
#include <map>
#include <optional>
#include <vector>

#include "clrlab/operators.hpp"

namespace clr::spectra {

struct TruncationInfo {
    int half_width = 0;
    double grid_step = 0.0;
};

struct SpectralReport {
    int n0 = 0;
    std::map<double, int> n_below;
    std::optional<std::vector<double>> eigenvalues;
    std::map<double, double> lt_sums;
    TruncationInfo truncation;
    bool convergence_flag = false;
};

// Number of eigenvalues of A at or below -E (zero modes included via a
// +1e-12*||A||_inf threshold shift). Sturm sequences for tridiagonal
// storage, sparse LDL^T with a shift-perturbation retry budget for sparse,
// Bunch-Kaufman LDL^T for dense.
int count_nonpositive(const SymmetricOperatorMatrix& A, double E = 0.0);

// Eigenvalues strictly below sigma, via Sturm/inertia counting only.
int count_below(const SymmetricOperatorMatrix& A, double sigma);

// All eigenvalues < threshold, each to relative accuracy 1e-10, by interval
// bisection on count_below. Throws if more than `cap` are found.
std::vector<double> eigenvalues_below(const SymmetricOperatorMatrix& A,
                                      double threshold, int cap = 100000);

// sum |lambda_i|^gamma over the supplied non-positive eigenvalues.
double lieb_thirring_sum(const std::vector<double>& eigenvalues, double gamma);

// Solves -alpha * R_lambda(y,y) = 1 for lambda > 0 given the diagonal
// resolvent map; the bound state of the rank-one problem sits at -lambda.
// Throws if no root is bracketed (transient generator, weak coupling).
double rank_one_eigenvalue(const std::function<double(double)>& resolvent_diag,
                           double alpha);

// Zeros in (-L, L) of the solution of u'' = -V u with u(-L)=0, u'(-L)=1,
// integrated as a Pruefer phase with per-step phase change below pi/8.
// Equals the number of negative Dirichlet eigenvalues on [-L, L].
int oscillation_count_1d(const std::function<double(double)>& V, double L,
                         double max_step = 0.05);

// Bound states of the radial well q = 1 on the unit disk: counts roots of
// the interior/exterior log-derivative match at r = 1 for angular mode m,
// lambda in (-1, 0). Returns the count and the root (if one exists).
struct DiskWellResult {
    int count = 0;
    std::optional<double> lambda;
};
DiskWellResult disk_well_eigencount(int m = 0);

// Eigenpairs of a tridiagonal matrix with eigenvalue < lambda_max, by Sturm
// bisection plus inverse iteration on the symmetrized form. Vectors are
// unit-norm eigenvectors of the symmetrized matrix.
struct EigenPair {
    double lambda;
    Eigen::VectorXd vec;
};
std::vector<EigenPair> tridiagonal_eigenpairs_below(
    const SymmetricOperatorMatrix& A, double lambda_max);

// Dense symmetric eigensolve oracle (used by tests for cross-checking the
// inertia backends; not used by the counting paths themselves).
std::vector<double> dense_eigenvalues(const Eigen::MatrixXd& A);

}  // namespace clr::spectra
