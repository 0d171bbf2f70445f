#pragma once

// Constructive lower bounds on the negative-eigenvalue count. Each witness
// is a finitely supported test function with a negative Rayleigh quotient
// for -Delta - V; pairwise disjoint supports lift the count of witnesses to
// a lower bound on the number of negative eigenvalues by the variational
// principle.

#include <string>
#include <utility>
#include <vector>

#include "clrlab/operators.hpp"

namespace clr::witnesses {

// Finitely supported test function on Z^d.
struct TestFunction {
    int dimension = 1;
    std::vector<std::pair<Site, double>> values;
};

struct Witness {
    std::string support;  // human-readable descriptor
    std::string family;   // "sine-block" | "square-layer" | "resolvent-peak"
    double quotient = 0.0;
    // closed bounding box of the nonzero support (exact integer coordinates,
    // used for the pairwise disjointness verification); annular supports
    // also record the max-norm radius of the centered hole (-1: no hole),
    // so nested layers are recognized as disjoint
    Site lo, hi;
    int hole = -1;
    std::vector<std::pair<std::string, double>> extras;
};

struct WitnessCertificate {
    std::vector<Witness> witnesses;
    int certified_count = 0;
    bool disjointness_checked = false;
};

// (H psi, psi) / (psi, psi) for H = -Delta - V on Z^d, evaluated matrix-free
// over the support and its boundary edges. Throws std::invalid_argument if
// psi vanishes identically.
double rayleigh_quotient(const Potential& V, const TestFunction& psi);

// Sine bump sin(pi (x - a) / (b - a)) on the enlarged dyadic block
// [a, b] = [2^{k-1}, 2^{k+2}] for each k in [k_min, k_max]. Blocks with a
// negative quotient are kept; a disjoint subfamily is selected greedily by
// increasing k with spacing >= 3 (adjacent enlarged blocks overlap up to
// spacing 2). Extras per witness: k, the raw potential sum over the core
// block [2^k, 2^{k+1}], and the kinetic/potential form values.
WitnessCertificate dyadic_witnesses_1d(const Potential& V, int k_min,
                                       int k_max);

// Square-layer test functions on Z^2 for candidate scales (k, l), k < l:
// psi = 1 on Q_l \ Q_k (max-norm boxes), linear taper (2l - m)/l across
// Q_{2l} \ Q_l, zero on Q_k and outside Q_{2l}. The kinetic cost is O(k)
// from the unit jump across the inner boundary plus O(1) from the taper
// (the taper is linear on each of the four trapezoids between the
// diagonals, where the discrete Laplacian of a linear function vanishes).
// Extras per witness: k, l, the interior potential sum over Q_l \ Q_k and
// the kinetic form cost, so the sufficient condition
// interior_sum > form_cost can be read off the certificate.
WitnessCertificate layer_witnesses_2d(
    const Potential& V, const std::vector<std::pair<int, int>>& scales);

// Geometric candidate ladder (1, 8), then k = twice the previous outer
// radius with l = 5k/2, while the outer radius 2l stays within
// max_half_width. Consecutive layers are disjoint by construction, and the
// ratio l/k > 2 keeps the interior potential sum of a slowly decaying V
// ahead of the O(k) inner-boundary cost.
std::vector<std::pair<int, int>> default_layer_scales(int max_half_width);

// Sparse sum of deltas alpha_n placed on the nonnegative axis of Z with
// spacing d(x_m, x_n) > r(alpha_m) + r(alpha_n). The witness for each delta
// is the truncated resolvent peak psi(x) = mu^{|x - x_n|} (|x - x_n| <=
// r(alpha_n)), mu the decaying root at the single-delta ground energy
// lambda0(alpha) = sqrt(4 + alpha^2) - 2; r(alpha) is found by radius
// doubling until the single-delta quotient drops below -lambda0(alpha)/2.
// Recorded quotients are re-evaluated against the full assembled potential.
// Throws std::runtime_error if the placement exceeds max_half_width.
struct SparseDeltaResult {
    Potential potential;
    WitnessCertificate certificate;
    double gamma_sum = 0.0;       // sum alpha_n^gamma
    std::vector<int> centers;     // x_n
    std::vector<int> radii;       // r(alpha_n)
};
SparseDeltaResult sparse_delta_construction(const std::vector<double>& alphas,
                                            double gamma, int max_half_width);

}  // namespace clr::witnesses
