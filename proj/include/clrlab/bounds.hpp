#pragma once

// Upper bounds on the number of non-positive eigenvalues (and on
// Lieb-Thirring sums) of H = H0 - V. Bounds are split into certified ones,
// where every constant is computable, and structural ones that contain an
// unspecified constant and are reported as components (optionally with
// fitted constants from a train/validate sweep).

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "clrlab/operators.hpp"

namespace clr::bounds {

struct Comparison {
    double exact_count = 0.0;
    double ratio = 0.0;  // value / max(exact_count, 1)
};

struct BoundReport {
    std::string name;
    std::optional<double> sigma;
    std::vector<std::pair<std::string, double>> components;
    double value = 0.0;  // +inf allowed, with a divergence witness component
    bool certified = false;
    std::optional<Comparison> comparison;
};

// Continuum potential on [-support_radius, support_radius] (1D) or
// [0, support_radius] (radial); breakpoints list discontinuities so
// quadrature panels never straddle a jump.
struct ContinuumPotential {
    std::function<double(double)> f;
    double support_radius = 0.0;
    std::vector<double> breakpoints;
    std::optional<double> sup_bound;
};

// N0 <= sum |x| V(x) + 1 (lattice) / int |x| V dx + 1 (continuum).
// Certified. Divergent family sums are detected by dyadic-block growth and
// reported as +inf with the witness block index.
BoundReport bargmann_1d(const Potential& V);
BoundReport bargmann_1d(const ContinuumPotential& V);

// N0 <= (1/c(sigma)) sum V(x) * T(x, sigma/V(x)) + 1 where T(x, g) is the
// exact killed-kernel tail integral (|x| F(g/x^2) in the continuum, the
// Bessel-sum tail on the lattice). Certified; this is the sharp form whose
// two-term split display is also reported as components.
BoundReport refined_bargmann_1d(const Potential& V, double sigma);
BoundReport refined_bargmann_1d(const ContinuumPotential& V, double sigma);

// N0 <= sum V(x) Rt(x, x0) + 1 (weighted by the regularized resolvent) and
// the variant #{V >= 1} + sum_{V<1} V Rt + 1; minimum over the supplied
// x0 candidates. Recurrent families only. Certified.
BoundReport green_weighted_bound(const Potential& V, Family family,
                                 const std::vector<Site>& x0_candidates,
                                 double alpha = 1.0);

// CLR-type bound through the diagonal heat kernel of the killed process:
// N0 <= (1/c(sigma)) sum V(x) int_{sigma/V}^inf p1(t,x,x) dt + 1.
// Certified for 1D lattice and for the fractional family with alpha < 1/2
// (exact tail identities); the 2D lattice tail uses a non-rigorous decay
// model and is flagged uncertified.
BoundReport clr_heat_kernel_bound(const Potential& V, Family family,
                                  double sigma, double alpha = 1.0);
// Continuum 1D (identical to refined_bargmann_1d) - certified.
BoundReport clr_heat_kernel_bound(const ContinuumPotential& V, double sigma);
// Radial operator of dimension parameter d: free kernel for d > 2,
// absorbing kernel for 0 < d < 2. Certified (exact tail integrals).
BoundReport clr_radial_bound(const ContinuumPotential& V, double d,
                             double sigma);

struct FittedConstants {
    double C1 = 0.0;
    double C2 = 0.0;
};

// 2D refined bound: structural components
//   sum_{V <= sigma/g(x)} V ln^2(2+|x|) / ln(sigma/V)  and
//   sum_{V > sigma/g(x)) V ln(g(x)/sigma),   g(x) = max(1, |x|^2 ln|x|),
// plus the finite-rank term #{V > sigma/g}. Without fitted constants the
// report carries components only (value = rank term + 1, uncertified);
// with fitted constants a numeric uncertified bound.
BoundReport refined_2d(const Potential& V, double sigma,
                       std::optional<FittedConstants> fitted = {});

// Fractional family, 0 < alpha <= 1. alpha >= 1/2 (recurrent): certified
// green-weighted value plus the structural c_alpha |x|^{2 alpha - 1} display
// (log weight at alpha = 1/2). alpha < 1/2 (transient): certified CLR value
// via the exact symbol-integral tail plus the structural sum V^{1/(2 alpha)}.
BoundReport fractional_bounds(double alpha, const Potential& V,
                              double sigma = 1.0);

// Radial family: structural integrals (d > 2: int V^{d/2} r^{d-1} dr;
// 0 < d < 2: the sigma-split r^{2-d} / r^{4-2d} pair), plus the certified
// CLR value of clr_radial_bound. d = 2 is rejected (use the 2D routes).
BoundReport bessel_bounds(double d, const ContinuumPotential& V, double sigma);

// Lieb-Thirring variants. Certified unless noted.
enum class LtVariant {
    HeatWeighted,     // Lambda^g + (1/c(s)) sum V^{1+g} T(x, s/V)
    TimeWeighted,     // Lambda^g + (2g Gamma(g)/c(s)) sum V int t^-g p1 dt
    WeightOnly,       // Lambda^g + sum |x| V^{1+g}
    SplitContinuum,   // Lambda^g + (1/c(s))[ |x|V^{1+g} head + x^2 V^{3/2+g} ]
    SplitSmallGamma,  // g < 1/2 variant with beta(g) and the explicit c2
    Plain2D,          // structural ln^2(2+|x|) G(V+q) component, uncertified
};

BoundReport lt_bounds(double gamma, const Potential& V, double Lambda,
                      LtVariant variant, double sigma = 1.0);
BoundReport lt_bounds(double gamma, const ContinuumPotential& V,
                      double Lambda, LtVariant variant, double sigma = 1.0);

// Golden-section minimizer over sigma in [lo, hi] to 1e-3, for sigma scans.
double best_sigma(const std::function<double(double)>& value_of_sigma,
                  double lo, double hi);

}  // namespace clr::bounds
