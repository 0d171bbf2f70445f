#pragma once

// Heat kernels, killed-walk kernels and survival probabilities, resolvent
// kernels and their lambda -> 0 regularizations. These are the quantitative
// inputs to the bound evaluators and the asymptotic checks.

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <vector>

#include "clrlab/operators.hpp"

namespace clr::kernels {

// Free lattice heat kernel, d = 1 or 2:
// e^{-2dt} * prod_i I_{|x_i-y_i|}(2t).
double p0_lattice(double t, Site x, Site y, int d);

// 1D kernel killed at the origin, method of images:
// p1(t,x,y) = p0(t,x,y) - p0(t,x,-y).
double p1_lattice_1d(double t, int x, int y);

// int_gamma^inf p1(t,x,x) dt for the 1D killed lattice kernel, computed as
// |x| minus the head integral int_0^gamma (quadrature; the full integral is
// exactly |x|).
double p1_lattice_1d_tail_integral(int x, double gamma);

// 2D kernel killed at the origin, propagated deterministically on a box by
// uniformization of the killed generator. The box half-width must cover
// x plus the diffusive range of the requested horizon; `advance` keeps the
// running distribution so time grids cost one pass.
class Killed2DPropagator {
  public:
    Killed2DPropagator(Site x0, int half_width);
    void advance(double dt);  // error per call below 1e-12 mass
    double t() const { return t_; }
    double at(Site y) const;
    double diag() const { return at(x0_); }
    double total_mass() const;  // survival probability at current t
    int half_width() const { return box_.half_width; }

  private:
    LatticeBox box_;
    Site x0_;
    double t_ = 0.0;
    Eigen::VectorXd state_;
};

// Convenience wrapper: p1(t,x,x) on a box of half-width
// max(4 sqrt(t), |x| + 4 sqrt(t)) rounded up.
double p1_lattice_2d_diag(double t, Site x);

struct SurvivalResult {
    double survival = 0.0;
    double std_error = 0.0;
    std::uint64_t walks = 0;
    std::uint64_t seed = 0;
    // first-hit times (in continuous time units) of the killed walks,
    // filled only when collect_hits is set
    std::vector<double> hit_times;
};

// Monte Carlo survival of the 2D walk killed at the origin: embedded
// discrete walk with round(4t) steps (jump rate 4). Deterministic for a
// given seed independent of scheduling: walk i uses a counter-derived
// stream.
SurvivalResult survival_probability(double t, Site x, std::uint64_t walks,
                                    std::uint64_t seed,
                                    bool collect_hits = false);

// Fractional lattice kernel
// (1/2pi) int_{-pi}^{pi} e^{-t (4 sin^2(phi/2))^alpha} cos(k phi) dphi.
double p_alpha(double t, int k, double alpha);

// Radial heat kernels on the half line (Lemma-form with scaled Bessel I):
// free form for d >= 2 uses order d/2-1; for 0 < d < 2 the Dirichlet kernel
// uses order 1-d/2 and the Neumann kernel order d/2-1.
enum class RadialBoundary { Free, Dirichlet, Neumann };
double p_bessel(double t, double a, double r, double d, RadialBoundary bc);

// Certified tail integral int_gamma^inf p^D_d(t,r,r) dt for 0 < d < 2:
// substitution u = r^2/(2t) turns it into the finite-interval integral
// (r^{2-d}/2) int_0^{r^2/(2 gamma)} e^{-u} I_{1-d/2}(u) / u du.
double p_bessel_dirichlet_tail_integral(double r, double d, double gamma);

// Continuum 1D kernel killed at the origin:
// p1(t,x,x) = (1 - e^{-x^2/4t}) / sqrt(4 pi t);
// tail integral int_gamma^inf p1 dt = |x| F(gamma/x^2).
double p1_continuum_1d(double t, double x);
double p1_continuum_1d_tail_integral(double x, double gamma);

// Diagonal heat kernel of the continuum 2D operator with soft killing by
// the unit-disk indicator, via angular-mode spectral synthesis on a
// truncated disk (Dirichlet at R_max). Eigenpairs are precomputed for a
// time horizon [t_min, inf); evaluation at smaller t raises a truncation
// error.
class Continuum2DSynthesis {
  public:
    // trusted for t >= t_min and rho + 4 sqrt(t) <= R_max
    Continuum2DSynthesis(double t_min, double R_max, double h = 0.05,
                         bool with_killing = true);
    double eval(double t, double rho) const;
    double t_min() const { return t_min_; }
    double R_max() const { return R_max_; }

  private:
    struct Mode {
        std::vector<double> lambdas;
        std::vector<Eigen::VectorXd> funcs;  // normalized in L2(r dr)
    };
    double t_min_, R_max_, h_;
    std::vector<Mode> modes_;
};

// Lattice resolvents of the positive operator, lambda > 0. 1D closed form
// R(x,y) = mu^{|x-y|} / sqrt(l^2+4l), mu = 2/(2+lambda+sqrt(l^2+4l));
// 2D by reducing one Fourier integral in closed form and quadrature of the
// remaining periodic one.
double resolvent_lattice_1d(double lambda, int x, int y);
double resolvent_lattice_2d(double lambda, Site x, Site y);

// Regularized resolvent  Rt(x,x0) = 2 lim_{l->0} [R_l(x0,x0) - R_l(x,x0)],
// non-negative, zero at x = x0. Closed form |x-x0| in 1D; quadrature in 2D
// and for the fractional family (alpha >= 1/2 required for recurrence).
double regularized_resolvent(Family family, Site x, Site x0,
                             double alpha = 1.0);

}  // namespace clr::kernels
