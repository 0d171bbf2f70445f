#include "clrlab/kernels.hpp"

#include <cmath>
#include <stdexcept>

#include "clrlab/special.hpp"
#include "clrlab/spectra.hpp"

namespace clr::kernels {

using special::integrate;
using special::pi;

double p0_lattice(double t, Site x, Site y, int d) {
    if (t < 0) throw std::invalid_argument("t must be >= 0");
    if (d != 1 && d != 2) throw std::invalid_argument("d must be 1 or 2");
    if (t == 0.0) return x == y ? 1.0 : 0.0;
    double v = special::bessel_i_scaled_int(std::abs(x.x - y.x), 2.0 * t);
    if (d == 2) v *= special::bessel_i_scaled_int(std::abs(x.y - y.y), 2.0 * t);
    return v;
}

double p1_lattice_1d(double t, int x, int y) {
    // endpoints separated by the killed site: no surviving path
    if ((x > 0) != (y > 0) || x == 0 || y == 0) return 0.0;
    return p0_lattice(t, {x, 0}, {y, 0}, 1) - p0_lattice(t, {x, 0}, {-y, 0}, 1);
}

double p1_lattice_1d_tail_integral(int x, double gamma) {
    if (gamma < 0) throw std::invalid_argument("gamma must be >= 0");
    int k = 2 * std::abs(x);
    // int_0^inf p1(t,x,x) dt = |x| exactly; subtract the head integral
    double head = gamma == 0.0
                      ? 0.0
                      : integrate(
                            [&](double t) {
                                return special::bessel_i_scaled_int(0, 2 * t) -
                                       special::bessel_i_scaled_int(k, 2 * t);
                            },
                            0.0, gamma, {1e-12, 1e-11});
    return std::abs(x) - head;
}

Killed2DPropagator::Killed2DPropagator(Site x0, int half_width)
    : box_(2, half_width), x0_(x0) {
    if (!box_.contains(x0) || (x0.x == 0 && x0.y == 0))
        throw std::invalid_argument("start site must be in the box, not 0");
    state_ = Eigen::VectorXd::Zero(box_.size());
    state_[box_.index(x0)] = 1.0;
}

void Killed2DPropagator::advance(double dt) {
    if (dt < 0) throw std::invalid_argument("dt must be >= 0");
    const double c = 8.0;  // uniformization rate, diagonal of -A is 4
    const int w = box_.width();
    const int origin = box_.index({0, 0});
    auto step = [&](const Eigen::VectorXd& in, Eigen::VectorXd& out) {
        // out = (I + A/c) in with killing at the origin
        for (int i = 0; i < in.size(); ++i) {
            double s = 0.5 * in[i];
            if (i % w > 0) s += 0.125 * in[i - 1];
            if (i % w < w - 1) s += 0.125 * in[i + 1];
            if (i >= w) s += 0.125 * in[i - w];
            if (i + w < in.size()) s += 0.125 * in[i + w];
            out[i] = s;
        }
        out[origin] = 0.0;
    };
    double remaining = dt;
    Eigen::VectorXd v(state_.size()), tmp(state_.size());
    while (remaining > 0) {
        double step_t = std::min(remaining, 200.0 / c);
        remaining -= step_t;
        double ct = c * step_t;
        int K = int(ct + 10.0 * std::sqrt(ct) + 30.0);
        double wgt = std::exp(-ct);
        v = state_;
        Eigen::VectorXd acc = wgt * v;
        for (int k = 1; k <= K; ++k) {
            step(v, tmp);
            v.swap(tmp);
            wgt *= ct / k;
            acc.noalias() += wgt * v;
        }
        state_ = acc;
    }
    t_ += dt;
}

double Killed2DPropagator::at(Site y) const {
    int i = box_.index(y);
    return i < 0 ? 0.0 : state_[i];
}

double Killed2DPropagator::total_mass() const { return state_.sum(); }

double p1_lattice_2d_diag(double t, Site x) {
    int R = int(std::ceil(max_norm(x) + 4.0 * std::sqrt(t))) + 2;
    Killed2DPropagator prop(x, R);
    prop.advance(t);
    return prop.diag();
}

namespace {

inline std::uint64_t splitmix_next(std::uint64_t& s) {
    s += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = s;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace

SurvivalResult survival_probability(double t, Site x0, std::uint64_t walks,
                                    std::uint64_t seed, bool collect_hits) {
    if (x0.x == 0 && x0.y == 0)
        throw std::invalid_argument("start site must differ from the origin");
    const std::uint64_t N = std::uint64_t(std::llround(4.0 * t));
    SurvivalResult res;
    res.walks = walks;
    res.seed = seed;
    std::uint64_t survived = 0;
    static const int dxs[4] = {1, -1, 0, 0};
    static const int dys[4] = {0, 0, 1, -1};
    for (std::uint64_t i = 0; i < walks; ++i) {
        // counter-derived stream: independent of evaluation order
        std::uint64_t s = (seed + 1) * 0x9e3779b97f4a7c15ULL + i;
        int x = x0.x, y = x0.y;
        std::uint64_t step = 0;
        bool dead = false;
        while (step < N && !dead) {
            std::uint64_t r = splitmix_next(s);
            std::uint64_t chunk = std::min<std::uint64_t>(32, N - step);
            for (std::uint64_t b = 0; b < chunk; ++b) {
                unsigned dir = unsigned(r & 3);
                r >>= 2;
                x += dxs[dir];
                y += dys[dir];
                ++step;
                if ((x | y) == 0) {
                    dead = true;
                    break;
                }
            }
        }
        if (!dead)
            ++survived;
        else if (collect_hits)
            res.hit_times.push_back(double(step) / 4.0);
    }
    double p = double(survived) / double(walks);
    res.survival = p;
    res.std_error = std::sqrt(std::max(p * (1.0 - p), 1.0 / double(walks)) /
                              double(walks));
    return res;
}

double p_alpha(double t, int k, double alpha) {
    if (alpha <= 0 || alpha > 2)
        throw std::invalid_argument("alpha outside (0,2]");
    if (t < 0) throw std::invalid_argument("t must be >= 0");
    auto f = [&](double phi) {
        double s = std::sin(0.5 * phi);
        double sym = std::pow(4.0 * s * s, alpha);
        return std::exp(-t * sym) * std::cos(k * phi);
    };
    // for large t the integrand concentrates on phi ~ t^{-1/(2 alpha)};
    // partition geometrically from that scale so the adaptive rule cannot
    // overlook the spike
    double w = t > 1.0 ? std::pow(t, -0.5 / alpha) : pi;
    double acc = 0.0, lo = 0.0;
    for (double hi = std::min(w, pi); lo < pi;
         hi = std::min(8.0 * hi, pi)) {
        acc += integrate(f, lo, hi, {1e-14, 1e-13});
        lo = hi;
    }
    return acc / pi;
}

double p_bessel(double t, double a, double r, double d, RadialBoundary bc) {
    if (t <= 0 || a <= 0 || r <= 0)
        throw std::invalid_argument("t, a, r must be > 0");
    double nu;
    switch (bc) {
        case RadialBoundary::Free:
            if (d < 2) throw std::invalid_argument("free form needs d >= 2");
            nu = 0.5 * d - 1.0;
            break;
        case RadialBoundary::Dirichlet:
            if (d <= 0 || d >= 2)
                throw std::invalid_argument("Dirichlet form needs 0 < d < 2");
            nu = 1.0 - 0.5 * d;
            break;
        case RadialBoundary::Neumann:
            if (d <= 0 || d >= 2)
                throw std::invalid_argument("Neumann form needs 0 < d < 2");
            nu = 0.5 * d - 1.0;
            break;
        default:
            throw std::invalid_argument("bad boundary");
    }
    double z = a * r / (2.0 * t);
    double diff = a - r;
    return (0.5 / t) * std::exp(-diff * diff / (4.0 * t)) *
           std::pow(a * r, 1.0 - 0.5 * d) * special::bessel_i_scaled(nu, z);
}

double p_bessel_dirichlet_tail_integral(double r, double d, double gamma) {
    if (d <= 0 || d >= 2) throw std::invalid_argument("needs 0 < d < 2");
    if (gamma <= 0) throw std::invalid_argument("gamma must be > 0");
    double nu = 1.0 - 0.5 * d;
    double U = r * r / (2.0 * gamma);
    // substitute u = v^{1/nu}: the u^{nu-1} endpoint singularity of
    // e^{-u} I_nu(u) / u becomes a bounded integrand with limit
    // (1/nu) 2^{-nu} / Gamma(nu+1) at v = 0
    double p = 1.0 / nu;
    double limit0 = p * std::pow(0.5, nu) / std::tgamma(nu + 1.0);
    double I = integrate(
        [&](double v) {
            if (v < 1e-290) return limit0;
            double u = std::pow(v, p);
            if (u < 1e-290) return limit0;
            return p * special::bessel_i_scaled(nu, u) / v;
        },
        0.0, std::pow(U, nu), {1e-13, 1e-12});
    return 0.5 * std::pow(r, 2.0 - d) * I;
}

double p1_continuum_1d(double t, double x) {
    if (t <= 0) throw std::invalid_argument("t must be > 0");
    return -std::expm1(-x * x / (4.0 * t)) / std::sqrt(4.0 * pi * t);
}

double p1_continuum_1d_tail_integral(double x, double gamma) {
    if (x == 0.0) return 0.0;
    return std::abs(x) * special::F_gamma(gamma / (x * x));
}

Continuum2DSynthesis::Continuum2DSynthesis(double t_min, double R_max,
                                           double h, bool with_killing)
    : t_min_(t_min), R_max_(R_max), h_(h) {
    if (t_min <= 0 || R_max <= 0 || h <= 0)
        throw std::invalid_argument("t_min, R_max, h must be > 0");
    const double lambda_max = 40.0 / t_min;
    const int n = int(std::round(R_max / h));
    auto q = [&](double r) {
        if (!with_killing) return 0.0;
        // unit-disk indicator, cell-averaged across r = 1
        return std::min(1.0, std::max(0.0, (1.0 + h / 2 - r) / h));
    };
    for (int m = 0;; ++m) {
        auto V = [&](double r) { return -(double(m) * m / (r * r) + q(r)); };
        auto A = assemble_bessel(2.0, h, n,
                                 m == 0 ? Boundary::Neumann : Boundary::Dirichlet,
                                 V);
        auto pairs = spectra::tridiagonal_eigenpairs_below(A, lambda_max);
        if (pairs.empty()) break;
        Mode mode;
        for (auto& p : pairs) {
            mode.lambdas.push_back(p.lambda);
            // back to radial coordinates, normalized in L2(r dr)
            Eigen::VectorXd f(n);
            for (int j = 0; j < n; ++j)
                f[j] = p.vec[j] / std::sqrt(A.weight[j]);
            mode.funcs.push_back(std::move(f));
        }
        modes_.push_back(std::move(mode));
    }
}

double Continuum2DSynthesis::eval(double t, double rho) const {
    if (t < t_min_)
        throw std::runtime_error("t below the trusted synthesis horizon");
    if (rho + 4.0 * std::sqrt(t) > R_max_)
        throw std::runtime_error("rho + 4 sqrt(t) exceeds the truncated domain");
    double total = 0.0;
    for (std::size_t m = 0; m < modes_.size(); ++m) {
        const Mode& mode = modes_[m];
        // eigenfunction value at rho by linear interpolation; r = 0 limit is
        // the first node for m = 0 and zero otherwise
        auto fval = [&](const Eigen::VectorXd& f, double r) {
            double jf = r / h_;
            int j0 = int(std::floor(jf));
            double w = jf - j0;
            auto node = [&](int j) -> double {
                if (j <= 0) return m == 0 ? f[0] : 0.0;
                if (j > f.size()) return 0.0;
                return f[j - 1];
            };
            return (1.0 - w) * node(j0) + w * node(j0 + 1);
        };
        double s = 0.0;
        for (std::size_t i = 0; i < mode.lambdas.size(); ++i) {
            double fv = fval(mode.funcs[i], rho);
            s += std::exp(-mode.lambdas[i] * t) * fv * fv;
        }
        total += (m == 0 ? 0.5 : 1.0) / pi * s;
    }
    return total;
}

double resolvent_lattice_1d(double lambda, int x, int y) {
    if (lambda <= 0) throw std::invalid_argument("lambda must be > 0");
    double disc = std::sqrt(lambda * (lambda + 4.0));
    double mu = 2.0 / (2.0 + lambda + disc);  // decaying root, in (0,1)
    return std::pow(mu, std::abs(x - y)) / disc;
}

double resolvent_lattice_2d(double lambda, Site x, Site y) {
    if (lambda <= 0) throw std::invalid_argument("lambda must be > 0");
    int n1 = x.x - y.x, n2 = std::abs(x.y - y.y);
    // one Fourier integral done in closed form: with
    // b(phi) = lambda + 2 + 4 sin^2(phi/2),
    // R(n) = (1/2pi) int cos(n1 phi) zeta^{n2} / sqrt(b^2-4) dphi,
    // zeta = 2 / (b + sqrt(b^2-4))
    return special::integrate_periodic(
               [&](double phi) {
                   double s2 = std::pow(std::sin(0.5 * phi), 2);
                   double bm2 = lambda + 4.0 * s2;  // b - 2, no cancellation
                   double root = std::sqrt(bm2 * (bm2 + 4.0));
                   double zeta = 2.0 / (bm2 + 2.0 + root);
                   return std::cos(n1 * phi) * std::pow(zeta, n2) / root;
               },
               -pi, pi, {1e-12, 1e-11}) /
           (2.0 * pi);
}

double regularized_resolvent(Family family, Site x, Site x0, double alpha) {
    switch (family) {
        case Family::Lattice1D:
            return std::abs(x.x - x0.x);
        case Family::Lattice2D: {
            int n1 = x.x - x0.x, n2 = std::abs(x.y - x0.y);
            return (2.0 / pi) *
                   integrate(
                       [&](double phi) {
                           double s = std::sin(0.5 * phi);
                           double root = 4.0 * s * std::sqrt(1.0 + s * s);
                           if (root == 0.0) return 0.5 * n2;  // phi -> 0 limit
                           double zeta =
                               1.0 / (1.0 + 2.0 * s * s +
                                      2.0 * s * std::sqrt(1.0 + s * s));
                           return (1.0 - std::cos(n1 * phi) *
                                             std::pow(zeta, n2)) /
                                  root;
                       },
                       0.0, pi, {1e-12, 1e-10});
        }
        case Family::FractionalLattice: {
            if (alpha < 0.5)
                throw std::invalid_argument(
                    "fractional family transient for alpha < 1/2");
            int k = std::abs(x.x - x0.x);
            return (4.0 / pi) *
                   integrate(
                       [&](double phi) {
                           double sk = std::sin(0.5 * k * phi);
                           double s = std::sin(0.5 * phi);
                           double sym = std::pow(4.0 * s * s, alpha);
                           if (sym == 0.0) return 0.0;
                           return sk * sk / sym;
                       },
                       0.0, pi, {1e-12, 1e-10});
        }
        default:
            throw std::invalid_argument(
                "regularized resolvent defined for recurrent lattice families");
    }
}

}  // namespace clr::kernels
