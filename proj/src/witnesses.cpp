#include "clrlab/witnesses.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace clr::witnesses {

namespace {

// true when the bounding box of `a` sits inside the centered hole of `b`
bool inside_hole(const Witness& a, const Witness& b) {
    if (b.hole < 0) return false;
    const int reach = std::max({std::abs(a.lo.x), std::abs(a.hi.x),
                                std::abs(a.lo.y), std::abs(a.hi.y)});
    return reach <= b.hole;
}

// Pairwise intersection test in exact integer arithmetic: supports are
// disjoint when the bounding boxes miss each other or one support fits
// inside the other's hole.
void verify_disjoint(WitnessCertificate& cert) {
    for (size_t i = 0; i < cert.witnesses.size(); ++i) {
        for (size_t j = i + 1; j < cert.witnesses.size(); ++j) {
            const Witness& a = cert.witnesses[i];
            const Witness& b = cert.witnesses[j];
            const bool overlap_x = a.lo.x <= b.hi.x && b.lo.x <= a.hi.x;
            const bool overlap_y = a.lo.y <= b.hi.y && b.lo.y <= a.hi.y;
            if (overlap_x && overlap_y && !inside_hole(a, b) &&
                !inside_hole(b, a))
                throw std::logic_error("witness supports overlap");
        }
    }
    cert.disjointness_checked = true;
}

}  // namespace

double rayleigh_quotient(const Potential& V, const TestFunction& psi) {
    if (psi.dimension != 1 && psi.dimension != 2)
        throw std::invalid_argument("test function dimension must be 1 or 2");
    std::map<std::pair<int, int>, double> f;
    for (const auto& [s, v] : psi.values)
        if (v != 0.0) f[{s.x, s.y}] = v;
    if (f.empty())
        throw std::invalid_argument("test function vanishes identically");

    auto val = [&f](int x, int y) {
        auto it = f.find({x, y});
        return it == f.end() ? 0.0 : it->second;
    };

    double den = 0.0, kin = 0.0, pot = 0.0;
    for (const auto& [key, v] : f) {
        const auto [x, y] = key;
        den += v * v;
        pot += V(Site{x, y}) * v * v;
        // each lattice edge once: positive-direction edges from every
        // support site, negative-direction edges only when the neighbor is
        // outside the support (psi = 0 there)
        const double dx = val(x + 1, y) - v;
        kin += dx * dx;
        if (!f.count({x - 1, y})) kin += v * v;
        if (psi.dimension == 2) {
            const double dy = val(x, y + 1) - v;
            kin += dy * dy;
            if (!f.count({x, y - 1})) kin += v * v;
        }
    }
    return (kin - pot) / den;
}

WitnessCertificate dyadic_witnesses_1d(const Potential& V, int k_min,
                                       int k_max) {
    if (k_min < 1 || k_max < k_min)
        throw std::invalid_argument("need 1 <= k_min <= k_max");
    WitnessCertificate cert;
    int last_selected = k_min - 100;
    for (int k = k_min; k <= k_max; ++k) {
        const long a = 1L << (k - 1);
        const long b = 1L << (k + 2);
        const double len = static_cast<double>(b - a);
        const double pi = 3.14159265358979323846;

        double den = 0.0, kin = 0.0, pot = 0.0;
        double prev = 0.0;  // psi(a) = 0
        for (long x = a + 1; x <= b; ++x) {
            const double cur =
                x == b ? 0.0 : std::sin(pi * static_cast<double>(x - a) / len);
            const double d = cur - prev;
            kin += d * d;
            if (x < b) {
                den += cur * cur;
                pot += V(Site{static_cast<int>(x), 0}) * cur * cur;
            }
            prev = cur;
        }
        const double q = (kin - pot) / den;
        if (q >= 0.0) continue;

        double core_sum = 0.0;
        for (long x = 1L << k; x <= 1L << (k + 1); ++x)
            core_sum += V(Site{static_cast<int>(x), 0});

        if (k - last_selected < 3) continue;
        last_selected = k;
        Witness w;
        w.support = "x in [" + std::to_string(a + 1) + ", " +
                    std::to_string(b - 1) + "]";
        w.family = "sine-block";
        w.quotient = q;
        w.lo = Site{static_cast<int>(a + 1), 0};
        w.hi = Site{static_cast<int>(b - 1), 0};
        w.extras = {{"k", static_cast<double>(k)},
                    {"core_block_sum", core_sum},
                    {"kinetic_form", kin},
                    {"potential_form", pot}};
        cert.witnesses.push_back(std::move(w));
    }
    cert.certified_count = static_cast<int>(cert.witnesses.size());
    verify_disjoint(cert);
    return cert;
}

namespace {

// square-layer profile: 0 on Q_k, 1 on Q_l \ Q_k, (2l - m)/l on the taper
double layer_psi(int k, int l, int m) {
    if (m <= k || m >= 2 * l) return 0.0;
    if (m <= l) return 1.0;
    return static_cast<double>(2 * l - m) / static_cast<double>(l);
}

}  // namespace

WitnessCertificate layer_witnesses_2d(
    const Potential& V, const std::vector<std::pair<int, int>>& scales) {
    WitnessCertificate cert;
    int last_outer = -1;
    for (const auto& [k, l] : scales) {
        if (k < 0 || l <= k)
            throw std::invalid_argument("layer scales need 0 <= k < l");
        const int R = 2 * l;
        double den = 0.0, kin = 0.0, pot = 0.0, interior = 0.0;
        for (int y = -R; y <= R; ++y) {
            for (int x = -R; x <= R; ++x) {
                const int m = std::max(std::abs(x), std::abs(y));
                const double v = layer_psi(k, l, m);
                const double dx =
                    layer_psi(k, l,
                              std::max(std::abs(x + 1), std::abs(y))) -
                    v;
                const double dy =
                    layer_psi(k, l,
                              std::max(std::abs(x), std::abs(y + 1))) -
                    v;
                kin += dx * dx + dy * dy;
                if (v != 0.0) {
                    den += v * v;
                    const double Vs = V(Site{x, y});
                    pot += Vs * v * v;
                    if (m <= l) interior += Vs;
                }
            }
        }
        const double q = (kin - pot) / den;
        if (q >= 0.0) continue;
        if (k < last_outer) continue;  // greedy disjoint selection
        last_outer = R;
        Witness w;
        w.support = "square layer " + std::to_string(k) + " < |x|_inf < " +
                    std::to_string(R);
        w.family = "square-layer";
        w.quotient = q;
        w.lo = Site{-(R - 1), -(R - 1)};
        w.hi = Site{R - 1, R - 1};
        w.hole = k;
        w.extras = {{"k", static_cast<double>(k)},
                    {"l", static_cast<double>(l)},
                    {"interior_sum", interior},
                    {"form_cost", kin}};
        cert.witnesses.push_back(std::move(w));
    }
    cert.certified_count = static_cast<int>(cert.witnesses.size());
    verify_disjoint(cert);
    return cert;
}

std::vector<std::pair<int, int>> default_layer_scales(int max_half_width) {
    std::vector<std::pair<int, int>> scales;
    int k = 1, l = 8;
    while (2 * l <= max_half_width) {
        scales.emplace_back(k, l);
        k = 2 * l;
        l = (5 * k + 1) / 2;
    }
    return scales;
}

namespace {

// quotient of the radius-r truncated resolvent peak against the single
// delta alpha at the origin
double peak_quotient(double alpha, double mu, int r) {
    double den = 1.0, kin = 0.0, p = 1.0;
    for (int j = 0; j < r; ++j) {
        const double next = p * mu;
        const double d = next - p;
        kin += 2.0 * d * d;
        den += 2.0 * next * next;
        p = next;
    }
    kin += 2.0 * p * p;  // edges out of the support at +-(r+1)
    return (kin - alpha) / den;
}

}  // namespace

SparseDeltaResult sparse_delta_construction(const std::vector<double>& alphas,
                                            double gamma, int max_half_width) {
    if (alphas.empty()) throw std::invalid_argument("empty coupling list");
    SparseDeltaResult out;

    std::vector<double> mus;
    for (double a : alphas) {
        if (a <= 0.0) throw std::invalid_argument("couplings must be positive");
        const double lambda0 = std::sqrt(4.0 + a * a) - 2.0;
        const double disc = std::sqrt(lambda0 * lambda0 + 4.0 * lambda0);
        const double mu = 2.0 / (2.0 + lambda0 + disc);
        int r = 1;
        while (peak_quotient(a, mu, r) > -0.5 * lambda0) {
            r *= 2;
            if (r > max_half_width)
                throw std::runtime_error(
                    "delta placement exceeds box capacity");
        }
        out.radii.push_back(r);
        mus.push_back(mu);
        out.gamma_sum += std::pow(a, gamma);
    }

    std::vector<std::pair<Site, double>> entries;
    int x = 0;
    for (size_t n = 0; n < alphas.size(); ++n) {
        if (n > 0) x += out.radii[n - 1] + out.radii[n] + 1;
        if (x + out.radii[n] > max_half_width)
            throw std::runtime_error("delta placement exceeds box capacity");
        out.centers.push_back(x);
        entries.push_back({Site{x, 0}, alphas[n]});
    }
    out.potential = Potential::from_entries(entries);

    for (size_t n = 0; n < alphas.size(); ++n) {
        const int c = out.centers[n];
        const int r = out.radii[n];
        TestFunction psi;
        psi.dimension = 1;
        for (int j = -r; j <= r; ++j)
            psi.values.push_back(
                {Site{c + j, 0}, std::pow(mus[n], std::abs(j))});
        const double q = rayleigh_quotient(out.potential, psi);
        Witness w;
        w.support = "x in [" + std::to_string(c - r) + ", " +
                    std::to_string(c + r) + "]";
        w.family = "resolvent-peak";
        w.quotient = q;
        w.lo = Site{c - r, 0};
        w.hi = Site{c + r, 0};
        w.extras = {{"alpha", alphas[n]},
                    {"radius", static_cast<double>(r)},
                    {"ground_energy", 2.0 - std::sqrt(4.0 + alphas[n] *
                                                                alphas[n])}};
        if (q >= 0.0) throw std::logic_error("resolvent peak lost its sign");
        out.certificate.witnesses.push_back(std::move(w));
    }
    out.certificate.certified_count =
        static_cast<int>(out.certificate.witnesses.size());
    verify_disjoint(out.certificate);
    return out;
}

}  // namespace clr::witnesses
