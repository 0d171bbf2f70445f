// Command-line surface of the laboratory: operator construction, exact
// counting, bound evaluation, verification sweeps, kernel tables, witness
// certificates and machine-readable reports. Every subcommand emits one
// JSON document on stdout with the fixed layout
//   {"schema_version":"1","command":...,"operator":{...},"result":{...},
//    "seed":...,"timestamp":...}
// Floats are printed with 17 significant digits (round-trip exact);
// non-finite values are serialized as the strings "infinity"/"-infinity".
// --canonical drops the timestamp so equal runs are byte-identical.
// Exit codes: 0 ok, 1 verification failure, 2 usage error, 3 numerical.

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "clrlab/bounds.hpp"
#include "clrlab/kernels.hpp"
#include "clrlab/operators.hpp"
#include "clrlab/spectra.hpp"
#include "clrlab/witnesses.hpp"

using json = nlohmann::ordered_json;
using namespace clr;

namespace {

// ---------------------------------------------------------------- output

void dump17(const json& j, std::string& out) {
    switch (j.type()) {
        case json::value_t::object: {
            out += '{';
            bool first = true;
            for (auto it = j.begin(); it != j.end(); ++it) {
                if (!first) out += ',';
                first = false;
                out += json(it.key()).dump();
                out += ':';
                dump17(it.value(), out);
            }
            out += '}';
            break;
        }
        case json::value_t::array: {
            out += '[';
            for (size_t i = 0; i < j.size(); ++i) {
                if (i) out += ',';
                dump17(j[i], out);
            }
            out += ']';
            break;
        }
        case json::value_t::number_float: {
            double v = j.get<double>();
            if (!std::isfinite(v)) {
                out += v > 0 ? "\"infinity\"" : "\"-infinity\"";
            } else {
                char buf[40];
                std::snprintf(buf, sizeof buf, "%.17g", v);
                out += buf;
            }
            break;
        }
        default:
            out += j.dump();
    }
}

std::string dump17(const json& j) {
    std::string s;
    dump17(j, s);
    return s;
}

std::string iso_timestamp() {
    std::time_t t = std::time(nullptr);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
    return buf;
}

// ------------------------------------------------------------- potentials

std::map<std::string, std::string> kv_pairs(const std::string& body) {
    std::map<std::string, std::string> m;
    std::stringstream ss(body);
    std::string item;
    while (std::getline(ss, item, ',')) {
        auto eq = item.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("expected key=value in '" + item +
                                        "'");
        m[item.substr(0, eq)] = item.substr(eq + 1);
    }
    return m;
}

Site parse_site(const std::string& s) {
    auto colon = s.find(':');
    if (colon == std::string::npos) return Site{std::stoi(s), 0};
    return Site{std::stoi(s.substr(0, colon)), std::stoi(s.substr(colon + 1))};
}

Potential parse_lattice_potential(const std::string& s, int dim) {
    if (s == "zero") return Potential::zero();
    if (s == "inv_linear") {
        if (dim == 1)
            return Potential::family("inv_linear", [](Site p) {
                return 1.0 / (1.0 + std::abs(p.x));
            });
        return Potential::family("inv_linear", [](Site p) {
            return 1.0 / (1.0 + std::hypot(double(p.x), double(p.y)));
        });
    }
    if (s == "inv_sq_log")
        return Potential::family("inv_sq_log", [](Site p) {
            return 1.0 /
                   ((1.0 + double(p.x) * p.x) * std::log(2.0 + std::abs(p.x)));
        });
    if (s.rfind("delta:", 0) == 0) {
        auto m = kv_pairs(s.substr(6));
        if (!m.count("site") || !m.count("amp"))
            throw std::invalid_argument("delta needs site=...,amp=...");
        return Potential::delta(parse_site(m["site"]), std::stod(m["amp"]));
    }
    if (s.rfind("deltas:", 0) == 0) {
        std::vector<std::pair<Site, double>> e;
        std::stringstream ss(s.substr(7));
        std::string item;
        while (std::getline(ss, item, ';')) {
            auto eq = item.find('=');
            if (eq == std::string::npos)
                throw std::invalid_argument("deltas needs site=amp;...");
            e.push_back({parse_site(item.substr(0, eq)),
                         std::stod(item.substr(eq + 1))});
        }
        return Potential::from_entries(std::move(e));
    }
    throw std::invalid_argument("unknown potential '" + s + "'");
}

bounds::ContinuumPotential parse_well(const std::string& s) {
    if (s == "zero") return {[](double) { return 0.0; }, 0.0, {}, 0.0};
    if (s.rfind("well:", 0) != 0)
        throw std::invalid_argument(
            "continuum potential must be zero or well:depth=,lo=,hi=");
    auto m = kv_pairs(s.substr(5));
    if (!m.count("depth") || !m.count("lo") || !m.count("hi"))
        throw std::invalid_argument("well needs depth=,lo=,hi=");
    double depth = std::stod(m["depth"]);
    double lo = std::stod(m["lo"]), hi = std::stod(m["hi"]);
    if (hi <= lo) throw std::invalid_argument("well needs lo < hi");
    bounds::ContinuumPotential V;
    V.f = [depth, lo, hi](double x) {
        return x >= lo && x <= hi ? depth : 0.0;
    };
    V.support_radius = std::max(std::abs(lo), std::abs(hi));
    V.breakpoints = {lo, hi};
    V.sup_bound = depth;
    return V;
}

bool is_continuum(const std::string& pot) {
    return pot.rfind("well:", 0) == 0;
}

// ----------------------------------------------------------- serializers

json bound_json(const bounds::BoundReport& b) {
    json r;
    r["name"] = b.name;
    r["sigma"] = b.sigma ? json(*b.sigma) : json(nullptr);
    json comps = json::array();
    for (const auto& [k, v] : b.components)
        comps.push_back(json{{"name", k}, {"value", v}});
    r["components"] = comps;
    r["value"] = b.value;
    r["certified"] = b.certified;
    if (b.comparison)
        r["comparison"] = {{"exact_count", b.comparison->exact_count},
                           {"ratio", b.comparison->ratio}};
    return r;
}

json certificate_json(const witnesses::WitnessCertificate& c) {
    json r;
    json ws = json::array();
    for (const auto& w : c.witnesses) {
        json e;
        for (const auto& [k, v] : w.extras) e[k] = v;
        ws.push_back(json{{"support", w.support},
                          {"family", w.family},
                          {"quotient", w.quotient},
                          {"extras", e}});
    }
    r["witnesses"] = ws;
    r["certified_count"] = c.certified_count;
    r["disjointness_checked"] = c.disjointness_checked;
    return r;
}

// ----------------------------------------------------------- subcommands

struct Options {
    std::string family = "lattice1d";
    std::string potential = "zero";
    std::string method = "bargmann";
    std::string suite = "bargmann1d";
    std::string variant = "heat";
    std::string alphas = "0.25,0.0625,0.015625,0.00390625";
    std::string in_path, out_path;
    int box = 0, n = 50, range = 20, kmax = 17, grid_n = 3000;
    int max_half_width = 0;
    double alpha = 1.0, d = 3.0, h = 0.01, L = 20.0, t = 1.0;
    double sigma = 1.0, gamma = 0.5, lambda_res = 0.01, Lambda = -1.0;
    std::uint64_t seed = 0;
    bool seed_set = false;
};

json cmd_count(const Options& o, json& op) {
    json result;
    op["family"] = o.family;
    op["potential"] = o.potential;
    auto count_two_scales = [&](auto&& make, int full, int half) {
        int n0 = spectra::count_nonpositive(make(full));
        int n0h = spectra::count_nonpositive(make(half));
        result["n0"] = n0;
        result["n0_half_scale"] = n0h;
        result["converged"] = n0 == n0h;
    };
    if (o.family == "lattice1d" || o.family == "lattice2d") {
        if (o.box <= 0) throw std::invalid_argument("--box is required");
        int dim = o.family == "lattice1d" ? 1 : 2;
        auto V = parse_lattice_potential(o.potential, dim);
        OperatorSpec spec;
        spec.family = dim == 1 ? Family::Lattice1D : Family::Lattice2D;
        op["box"] = o.box;
        count_two_scales(
            [&](int R) { return assemble_lattice(spec, LatticeBox(dim, R), V); },
            o.box, o.box / 2);
    } else if (o.family == "fractional") {
        if (o.box <= 0) throw std::invalid_argument("--box is required");
        auto V = parse_lattice_potential(o.potential, 1);
        op["box"] = o.box;
        op["alpha"] = o.alpha;
        count_two_scales(
            [&](int R) {
                return assemble_fractional(o.alpha, LatticeBox(1, R), V);
            },
            o.box, o.box / 2);
    } else if (o.family == "bessel") {
        auto V = parse_well(o.potential);
        op["d"] = o.d;
        op["h"] = o.h;
        op["n"] = o.grid_n;
        count_two_scales(
            [&](int n) {
                return assemble_bessel(o.d, o.h, n, Boundary::Dirichlet, V.f);
            },
            o.grid_n, o.grid_n / 2);
    } else if (o.family == "continuum1d") {
        auto V = parse_well(o.potential);
        op["h"] = o.h;
        op["L"] = o.L;
        count_two_scales(
            [&](int s) { return assemble_continuum_1d(o.h, o.L * s / 2, V.f); },
            2, 1);
    } else {
        throw std::invalid_argument("unknown family '" + o.family + "'");
    }
    return result;
}

json cmd_bound(const Options& o, json& op) {
    op["method"] = o.method;
    op["potential"] = o.potential;
    const bool cont = is_continuum(o.potential);
    bounds::BoundReport b;
    if (o.method == "bargmann") {
        b = cont ? bounds::bargmann_1d(parse_well(o.potential))
                 : bounds::bargmann_1d(parse_lattice_potential(o.potential, 1));
    } else if (o.method == "refined") {
        op["sigma"] = o.sigma;
        b = cont ? bounds::refined_bargmann_1d(parse_well(o.potential),
                                               o.sigma)
                 : bounds::refined_bargmann_1d(
                       parse_lattice_potential(o.potential, 1), o.sigma);
    } else if (o.method == "green") {
        int dim = o.family == "lattice2d" ? 2 : 1;
        Family fam = o.family == "lattice2d"    ? Family::Lattice2D
                     : o.family == "fractional" ? Family::FractionalLattice
                                                : Family::Lattice1D;
        op["family"] = o.family;
        b = bounds::green_weighted_bound(
            parse_lattice_potential(o.potential, dim), fam, {Site{0, 0}},
            o.alpha);
    } else if (o.method == "clr") {
        op["sigma"] = o.sigma;
        if (cont) {
            b = bounds::clr_heat_kernel_bound(parse_well(o.potential),
                                              o.sigma);
        } else {
            int dim = o.family == "lattice2d" ? 2 : 1;
            Family fam = o.family == "lattice2d"    ? Family::Lattice2D
                         : o.family == "fractional" ? Family::FractionalLattice
                                                    : Family::Lattice1D;
            op["family"] = o.family;
            b = bounds::clr_heat_kernel_bound(
                parse_lattice_potential(o.potential, dim), fam, o.sigma,
                o.alpha);
        }
    } else if (o.method == "radial") {
        op["d"] = o.d;
        op["sigma"] = o.sigma;
        b = bounds::clr_radial_bound(parse_well(o.potential), o.d, o.sigma);
    } else if (o.method == "fractional") {
        op["alpha"] = o.alpha;
        op["sigma"] = o.sigma;
        b = bounds::fractional_bounds(
            o.alpha, parse_lattice_potential(o.potential, 1), o.sigma);
    } else if (o.method == "bessel") {
        op["d"] = o.d;
        op["sigma"] = o.sigma;
        b = bounds::bessel_bounds(o.d, parse_well(o.potential), o.sigma);
    } else if (o.method == "refined2d") {
        op["sigma"] = o.sigma;
        b = bounds::refined_2d(parse_lattice_potential(o.potential, 2),
                               o.sigma);
    } else {
        throw std::invalid_argument("unknown method '" + o.method + "'");
    }
    return bound_json(b);
}

json cmd_lt(const Options& o, json& op) {
    op["gamma"] = o.gamma;
    op["variant"] = o.variant;
    op["potential"] = o.potential;
    op["sigma"] = o.sigma;
    bounds::LtVariant v;
    if (o.variant == "heat")
        v = bounds::LtVariant::HeatWeighted;
    else if (o.variant == "time")
        v = bounds::LtVariant::TimeWeighted;
    else if (o.variant == "weight")
        v = bounds::LtVariant::WeightOnly;
    else if (o.variant == "split")
        v = bounds::LtVariant::SplitContinuum;
    else if (o.variant == "small")
        v = bounds::LtVariant::SplitSmallGamma;
    else if (o.variant == "plain2d")
        v = bounds::LtVariant::Plain2D;
    else
        throw std::invalid_argument("unknown variant '" + o.variant + "'");

    double Lambda = o.Lambda;
    if (is_continuum(o.potential)) {
        auto V = parse_well(o.potential);
        if (Lambda < 0) Lambda = V.sup_bound.value_or(-1.0);
        if (Lambda < 0)
            throw std::invalid_argument("--Lambda required for this potential");
        op["Lambda"] = Lambda;
        return bound_json(bounds::lt_bounds(o.gamma, V, Lambda, v, o.sigma));
    }
    int dim = o.variant == "plain2d" ? 2 : 1;
    auto V = parse_lattice_potential(o.potential, dim);
    if (Lambda < 0 && V.finite_support()) {
        Lambda = 0.0;
        for (const auto& [s, val] : V.entries())
            Lambda = std::max(Lambda, val);
    }
    if (Lambda < 0)
        throw std::invalid_argument("--Lambda required for this potential");
    op["Lambda"] = Lambda;
    return bound_json(bounds::lt_bounds(o.gamma, V, Lambda, v, o.sigma));
}

json cmd_kernel(const Options& o, json& op) {
    op["family"] = o.family;
    op["t"] = o.t;
    json points = json::array(), values = json::array();
    auto table = [&](auto&& f, int lo, int hi) {
        for (int k = lo; k <= hi; ++k) {
            points.push_back(k);
            values.push_back(f(k));
        }
    };
    if (o.family == "p0_1d") {
        table([&](int k) { return kernels::p0_lattice(o.t, {k, 0}, {0, 0}, 1); },
              0, o.range);
    } else if (o.family == "p1_1d") {
        table([&](int k) { return kernels::p1_lattice_1d(o.t, k, k); }, 0,
              o.range);
    } else if (o.family == "p1_2d") {
        table([&](int k) { return kernels::p1_lattice_2d_diag(o.t, {k, 0}); },
              0, o.range);
    } else if (o.family == "p_alpha") {
        op["alpha"] = o.alpha;
        table([&](int k) { return kernels::p_alpha(o.t, k, o.alpha); }, 0,
              o.range);
    } else if (o.family == "p_bessel") {
        op["d"] = o.d;
        for (int j = 1; 0.25 * j <= o.range; ++j) {
            double r = 0.25 * j;
            points.push_back(r);
            values.push_back(kernels::p_bessel(o.t, r, r, o.d,
                                               kernels::RadialBoundary::Dirichlet));
        }
    } else if (o.family == "continuum1d") {
        for (int j = 0; 0.5 * j <= o.range; ++j) {
            points.push_back(0.5 * j);
            values.push_back(kernels::p1_continuum_1d(o.t, 0.5 * j));
        }
    } else if (o.family == "resolvent1d") {
        op["lambda"] = o.lambda_res;
        table([&](int k) { return kernels::resolvent_lattice_1d(o.lambda_res, k, 0); },
              0, o.range);
    } else if (o.family == "resolvent2d") {
        op["lambda"] = o.lambda_res;
        table(
            [&](int k) {
                return kernels::resolvent_lattice_2d(o.lambda_res, {k, 0},
                                                     {0, 0});
            },
            0, o.range);
    } else if (o.family == "rtilde1d" || o.family == "rtilde2d" ||
               o.family == "rtilde_frac") {
        Family fam = o.family == "rtilde1d"   ? Family::Lattice1D
                     : o.family == "rtilde2d" ? Family::Lattice2D
                                              : Family::FractionalLattice;
        if (fam == Family::FractionalLattice) op["alpha"] = o.alpha;
        table(
            [&](int k) {
                return kernels::regularized_resolvent(fam, {k, 0}, {0, 0},
                                                      o.alpha);
            },
            0, o.range);
    } else {
        throw std::invalid_argument("unknown kernel family '" + o.family + "'");
    }
    json result;
    result["points"] = points;
    result["values"] = values;
    return result;
}

json cmd_witness(const Options& o, json& op) {
    op["family"] = o.family;
    if (o.family == "dyadic1d") {
        op["potential"] = o.potential;
        op["kmax"] = o.kmax;
        auto V = parse_lattice_potential(o.potential, 1);
        return certificate_json(witnesses::dyadic_witnesses_1d(V, 1, o.kmax));
    }
    if (o.family == "layers2d") {
        op["potential"] = o.potential;
        int R = o.max_half_width > 0 ? o.max_half_width : 4096;
        op["max_half_width"] = R;
        auto V = parse_lattice_potential(o.potential, 2);
        return certificate_json(
            witnesses::layer_witnesses_2d(V, witnesses::default_layer_scales(R)));
    }
    if (o.family == "sparse_delta") {
        std::vector<double> alphas;
        std::stringstream ss(o.alphas);
        std::string item;
        while (std::getline(ss, item, ',')) alphas.push_back(std::stod(item));
        int R = o.max_half_width > 0 ? o.max_half_width : 16384;
        op["alphas"] = alphas;
        op["gamma"] = o.gamma;
        op["max_half_width"] = R;
        auto res = witnesses::sparse_delta_construction(alphas, o.gamma, R);
        json r = certificate_json(res.certificate);
        r["gamma_sum"] = res.gamma_sum;
        r["centers"] = res.centers;
        r["radii"] = res.radii;
        return r;
    }
    throw std::invalid_argument("unknown witness family '" + o.family + "'");
}

// seeded dominance sweeps: every certified bound must sit at or above the
// exact count (or exact moment sum)
json run_suite(const Options& o, int& violations) {
    std::mt19937_64 rng(o.seed);
    std::uniform_int_distribution<int> nd(1, 6);
    std::uniform_real_distribution<double> vd(0.05, 3.0);
    json records = json::array();
    violations = 0;

    auto random_deltas_1d = [&](int range) {
        std::uniform_int_distribution<int> xd(-range, range);
        std::vector<std::pair<Site, double>> e;
        int n = nd(rng);
        for (int i = 0; i < n; ++i) e.push_back({{xd(rng), 0}, vd(rng)});
        return Potential::from_entries(std::move(e));
    };

    for (int i = 0; i < o.n; ++i) {
        json rec;
        rec["index"] = i;
        json brs = json::array();
        double exact = 0.0;
        bool bad = false;

        if (o.suite == "bargmann1d") {
            auto V = random_deltas_1d(30);
            OperatorSpec spec;
            auto A = assemble_lattice(spec, LatticeBox(1, 400), V);
            exact = spectra::count_nonpositive(A);
            brs.push_back(bound_json(bounds::bargmann_1d(V)));
            for (double s : {0.5, 1.0, 2.0})
                brs.push_back(bound_json(bounds::refined_bargmann_1d(V, s)));
        } else if (o.suite == "fractional1d") {
            auto V = random_deltas_1d(20);
            auto A = assemble_fractional(o.alpha, LatticeBox(1, 200), V);
            exact = spectra::count_nonpositive(A);
            brs.push_back(bound_json(bounds::fractional_bounds(o.alpha, V)));
        } else if (o.suite == "green2d") {
            std::uniform_int_distribution<int> xd(-8, 8);
            std::vector<std::pair<Site, double>> e;
            int cnt = nd(rng);
            for (int k = 0; k < cnt; ++k)
                e.push_back({{xd(rng), xd(rng)}, vd(rng)});
            auto V = Potential::from_entries(std::move(e));
            OperatorSpec spec;
            spec.family = Family::Lattice2D;
            auto A = assemble_lattice(spec, LatticeBox(2, 40), V);
            exact = spectra::count_nonpositive(A);
            brs.push_back(bound_json(bounds::green_weighted_bound(
                V, Family::Lattice2D, {Site{0, 0}})));
        } else if (o.suite == "bessel") {
            std::uniform_real_distribution<double> dd(0.2, 5.0),
                ad(0.2, 3.0), wd(0.3, 3.0);
            double depth = dd(rng), lo = ad(rng), hi = lo + wd(rng);
            std::ostringstream ws;
            ws << "well:depth=" << depth << ",lo=" << lo << ",hi=" << hi;
            auto V = parse_well(ws.str());
            auto A = assemble_bessel(o.d, 0.01, 3000, Boundary::Dirichlet, V.f);
            exact = spectra::count_nonpositive(A);
            brs.push_back(bound_json(bounds::bessel_bounds(o.d, V, 1.0)));
            rec["well"] = ws.str();
        } else if (o.suite == "continuum1d") {
            std::uniform_real_distribution<double> dd(0.2, 5.0), ad(-4.0, 2.0),
                wd(0.3, 3.0);
            double depth = dd(rng), lo = ad(rng), hi = lo + wd(rng);
            std::ostringstream ws;
            ws << "well:depth=" << depth << ",lo=" << lo << ",hi=" << hi;
            auto V = parse_well(ws.str());
            auto A = assemble_continuum_1d(0.01, 15.0, V.f);
            exact = spectra::count_nonpositive(A);
            brs.push_back(bound_json(bounds::bargmann_1d(V)));
            brs.push_back(bound_json(bounds::refined_bargmann_1d(V, 1.0)));
            rec["well"] = ws.str();
        } else if (o.suite == "lt1d") {
            auto V = random_deltas_1d(30);
            OperatorSpec spec;
            auto A = assemble_lattice(spec, LatticeBox(1, 400), V);
            exact = spectra::lieb_thirring_sum(
                spectra::eigenvalues_below(A, 0.0), o.gamma);
            double Lambda = 0.0;
            for (const auto& [s, val] : V.entries())
                Lambda = std::max(Lambda, val);
            for (auto v : {bounds::LtVariant::HeatWeighted,
                           bounds::LtVariant::WeightOnly})
                brs.push_back(bound_json(
                    bounds::lt_bounds(o.gamma, V, Lambda, v, o.sigma)));
        } else {
            throw std::invalid_argument("unknown suite '" + o.suite + "'");
        }

        for (const auto& b : brs) {
            if (!b["certified"].get<bool>()) continue;
            if (b["value"].is_number() &&
                b["value"].get<double>() < exact - 1e-9)
                bad = true;
        }
        rec["bounds"] = brs;
        rec["exact"] = exact;
        rec["violation"] = bad;
        if (bad) ++violations;
        records.push_back(std::move(rec));
    }
    return records;
}

void flatten(const std::string& prefix, const json& j,
             std::vector<std::pair<std::string, std::string>>& row) {
    if (j.is_object()) {
        for (auto it = j.begin(); it != j.end(); ++it)
            flatten(prefix.empty() ? it.key() : prefix + "." + it.key(),
                    it.value(), row);
    } else if (j.is_array()) {
        for (size_t i = 0; i < j.size(); ++i)
            flatten(prefix + "." + std::to_string(i), j[i], row);
    } else if (j.is_string()) {
        row.push_back({prefix, j.get<std::string>()});
    } else {
        row.push_back({prefix, dump17(j)});
    }
}

std::string csv_field(std::string s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "verification laboratory for eigenvalue counting bounds on lattice "
        "and radial Schrodinger operators"};
    app.require_subcommand(1);
    Options o;
    bool canonical = false;
    app.add_flag("--canonical", canonical,
                 "omit the timestamp (byte-stable output)");
    if (const char* e = std::getenv("CLR_LAB_THREADS")) {
        // parallelism cap; all current code paths are serial, so any
        // positive cap is honored trivially
        if (std::atoi(e) < 1) {
            std::cerr << "CLR_LAB_THREADS must be >= 1\n";
            return 2;
        }
    }

    auto add_common = [&](CLI::App* sub) {
        sub->fallthrough();  // accept --canonical after the subcommand
        // accepted here for --help; applied by expansion in main below
        sub->add_option("--config", "flat key=value file mirroring the flags");
        return sub;
    };

    auto* c_count = add_common(app.add_subcommand("count", "exact counts"));
    c_count->add_option("--family", o.family);
    c_count->add_option("--potential", o.potential);
    c_count->add_option("--box", o.box);
    c_count->add_option("--alpha", o.alpha);
    c_count->add_option("--d", o.d);
    c_count->add_option("--step", o.h);
    c_count->add_option("--n", o.grid_n);
    c_count->add_option("--L", o.L);

    auto* c_bound =
        add_common(app.add_subcommand("bound", "counting bound evaluation"));
    c_bound->add_option("--method", o.method);
    c_bound->add_option("--family", o.family);
    c_bound->add_option("--potential", o.potential);
    c_bound->add_option("--sigma", o.sigma);
    c_bound->add_option("--alpha", o.alpha);
    c_bound->add_option("--d", o.d);

    auto* c_verify =
        add_common(app.add_subcommand("verify", "seeded dominance sweep"));
    c_verify->add_option("--suite", o.suite);
    c_verify->add_option("--n", o.n);
    c_verify->add_option("--alpha", o.alpha);
    c_verify->add_option("--d", o.d);
    c_verify->add_option("--gamma", o.gamma);
    c_verify->add_option("--sigma", o.sigma);
    c_verify->add_option("--seed", o.seed)->required();

    auto* c_sweep = add_common(
        app.add_subcommand("sweep", "dominance sweep with full records"));
    c_sweep->add_option("--suite", o.suite);
    c_sweep->add_option("--n", o.n);
    c_sweep->add_option("--alpha", o.alpha);
    c_sweep->add_option("--d", o.d);
    c_sweep->add_option("--gamma", o.gamma);
    c_sweep->add_option("--sigma", o.sigma);
    c_sweep->add_option("--out", o.out_path);
    c_sweep->add_option("--seed", o.seed)->required();

    auto* c_kernel = add_common(app.add_subcommand("kernel", "kernel tables"));
    c_kernel->add_option("--family", o.family);
    c_kernel->add_option("--t", o.t);
    c_kernel->add_option("--alpha", o.alpha);
    c_kernel->add_option("--d", o.d);
    c_kernel->add_option("--lambda", o.lambda_res);
    c_kernel->add_option("--range", o.range);

    auto* c_witness =
        add_common(app.add_subcommand("witness", "witness certificates"));
    c_witness->add_option("--family", o.family);
    c_witness->add_option("--potential", o.potential)->default_val(
        "inv_linear");
    c_witness->add_option("--kmax", o.kmax);
    c_witness->add_option("--max-half-width", o.max_half_width);
    c_witness->add_option("--alphas", o.alphas);
    c_witness->add_option("--gamma", o.gamma);

    auto* c_lt =
        add_common(app.add_subcommand("lt", "moment-sum bound evaluation"));
    c_lt->add_option("--gamma", o.gamma);
    c_lt->add_option("--variant", o.variant);
    c_lt->add_option("--potential", o.potential);
    c_lt->add_option("--sigma", o.sigma);
    c_lt->add_option("--Lambda", o.Lambda);

    auto* c_report = add_common(
        app.add_subcommand("report", "re-parse a JSON report, emit CSV"));
    c_report->add_option("--in", o.in_path)->required();

    // config files are flat key=value mirrors of the flags; expand them into
    // the argument list, command-line flags taking precedence
    std::vector<std::string> args(argv + 1, argv + argc);
    std::string cfg_path;
    for (size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size())
            cfg_path = args[i + 1];
        else if (args[i].rfind("--config=", 0) == 0)
            cfg_path = args[i].substr(9);
    }
    if (!cfg_path.empty()) {
        std::ifstream f(cfg_path);
        if (!f) {
            std::cerr << "cannot open config " << cfg_path << "\n";
            return 2;
        }
        std::string line;
        while (std::getline(f, line)) {
            if (line.empty() || line[0] == '#') continue;
            auto eq = line.find('=');
            if (eq == std::string::npos) {
                std::cerr << "bad config line: " << line << "\n";
                return 2;
            }
            std::string key = "--" + line.substr(0, eq);
            bool present = false;
            for (const auto& a : args)
                if (a == key || a.rfind(key + "=", 0) == 0) present = true;
            if (!present) args.push_back(key + "=" + line.substr(eq + 1));
        }
    }
    std::reverse(args.begin(), args.end());

    try {
        app.parse(args);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        std::cerr << e.what() << "\n";
        return 2;
    }

    try {
        json out;
        out["schema_version"] = "1";
        json op = json::object(), result;
        int exit_code = 0;
        std::string cmd;

        if (app.got_subcommand(c_count)) {
            cmd = "count";
            result = cmd_count(o, op);
        } else if (app.got_subcommand(c_bound)) {
            cmd = "bound";
            result = cmd_bound(o, op);
        } else if (app.got_subcommand(c_lt)) {
            cmd = "lt";
            result = cmd_lt(o, op);
        } else if (app.got_subcommand(c_kernel)) {
            cmd = "kernel";
            result = cmd_kernel(o, op);
        } else if (app.got_subcommand(c_witness)) {
            cmd = "witness";
            result = cmd_witness(o, op);
        } else if (app.got_subcommand(c_verify) ||
                   app.got_subcommand(c_sweep)) {
            const bool sweep = app.got_subcommand(c_sweep);
            cmd = sweep ? "sweep" : "verify";
            o.seed_set = true;
            op["suite"] = o.suite;
            op["n"] = o.n;
            int violations = 0;
            json records = run_suite(o, violations);
            result["violations"] = violations;
            json idx = json::array();
            for (const auto& r : records)
                if (r["violation"].get<bool>()) idx.push_back(r["index"]);
            result["violation_indices"] = idx;
            if (sweep) result["records"] = records;
            if (violations > 0) exit_code = 1;
        } else if (app.got_subcommand(c_report)) {
            std::ifstream in(o.in_path);
            if (!in) throw std::runtime_error("cannot open " + o.in_path);
            json doc = json::parse(in);
            if (json::parse(dump17(doc)) != doc)
                throw std::runtime_error("report does not round-trip");
            std::vector<json> rows;
            if (doc.contains("result") && doc["result"].contains("records"))
                for (const auto& r : doc["result"]["records"]) rows.push_back(r);
            else
                rows.push_back(doc);
            bool header_done = false;
            for (const auto& r : rows) {
                std::vector<std::pair<std::string, std::string>> row;
                flatten("", r, row);
                if (!header_done) {
                    for (size_t i = 0; i < row.size(); ++i)
                        std::cout << (i ? "," : "") << csv_field(row[i].first);
                    std::cout << "\n";
                    header_done = true;
                }
                for (size_t i = 0; i < row.size(); ++i)
                    std::cout << (i ? "," : "") << csv_field(row[i].second);
                std::cout << "\n";
            }
            return 0;
        }

        out["command"] = cmd;
        out["operator"] = op;
        out["result"] = result;
        out["seed"] = o.seed_set ? json(o.seed) : json(nullptr);
        if (!canonical) out["timestamp"] = iso_timestamp();
        std::string text = dump17(out);
        std::cout << text << "\n";
        if (!o.out_path.empty()) {
            std::ofstream f(o.out_path);
            f << text << "\n";
        }
        return exit_code;
    } catch (const std::invalid_argument& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << e.what() << "\n";
        return 3;
    }
}
