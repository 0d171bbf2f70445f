#include "clrlab/operators.hpp"

#include <cmath>
#include <queue>
#include <set>
#include <stdexcept>

#include "clrlab/special.hpp"

namespace clr {

LatticeBox::LatticeBox(int dim, int R) : dimension(dim), half_width(R) {
    if (dim != 1 && dim != 2) throw std::invalid_argument("dimension must be 1 or 2");
    if (R < 0) throw std::invalid_argument("half_width must be >= 0");
    n_ = dim == 1 ? width() : width() * width();
}

bool LatticeBox::contains(Site s) const {
    if (std::abs(s.x) > half_width) return false;
    if (dimension == 1) return s.y == 0;
    return std::abs(s.y) <= half_width;
}

int LatticeBox::index(Site s) const {
    if (!contains(s)) return -1;
    if (dimension == 1) return s.x + half_width;
    return (s.y + half_width) * width() + (s.x + half_width);
}

Site LatticeBox::site(int idx) const {
    if (dimension == 1) return {idx - half_width, 0};
    int w = width();
    return {idx % w - half_width, idx / w - half_width};
}

Potential Potential::zero() { return Potential(); }

Potential Potential::delta(Site s, double amp) {
    return from_entries({{s, amp}});
}

Potential Potential::from_entries(std::vector<std::pair<Site, double>> v) {
    Potential p;
    p.tag_ = "entries";
    for (auto& [s, val] : v) {
        if (val < 0) throw std::invalid_argument("potential must be >= 0");
        p.lookup_[{s.x, s.y}] += val;
    }
    for (auto& [key, val] : p.lookup_)
        p.entries_.push_back({{key.first, key.second}, val});
    return p;
}

Potential Potential::family(std::string tag, std::function<double(Site)> f) {
    Potential p;
    p.tag_ = std::move(tag);
    p.eval_ = std::move(f);
    return p;
}

double Potential::operator()(Site s) const {
    if (eval_) {
        double v = eval_(s);
        if (v < 0) throw std::invalid_argument("potential must be >= 0");
        return v;
    }
    auto it = lookup_.find({s.x, s.y});
    return it == lookup_.end() ? 0.0 : it->second;
}

double SymmetricOperatorMatrix::sym_off(int j) const {
    double p = sub[j] * sup[j];
    if (p < 0) throw std::runtime_error("off-diagonal product negative");
    return -std::sqrt(p) * ((sub[j] < 0 || sup[j] < 0) ? 1.0 : -1.0);
}

double SymmetricOperatorMatrix::inf_norm() const {
    switch (storage) {
        case Storage::Tridiagonal: {
            double m = 0;
            for (int i = 0; i < n; ++i) {
                double r = std::abs(diag[i]);
                if (i > 0) r += std::abs(sym_off(i - 1));
                if (i < n - 1) r += std::abs(sym_off(i));
                m = std::max(m, r);
            }
            return m;
        }
        case Storage::Sparse: {
            Eigen::VectorXd r = Eigen::VectorXd::Zero(n);
            for (int k = 0; k < sparse.outerSize(); ++k)
                for (Eigen::SparseMatrix<double>::InnerIterator it(sparse, k);
                     it; ++it)
                    r[it.row()] += std::abs(it.value());
            return r.size() ? r.maxCoeff() : 0.0;
        }
        case Storage::Dense:
            return dense.cwiseAbs().rowwise().sum().maxCoeff();
    }
    return 0;
}

Eigen::VectorXd SymmetricOperatorMatrix::apply(const Eigen::VectorXd& v) const {
    switch (storage) {
        case Storage::Tridiagonal: {
            Eigen::VectorXd out(n);
            for (int i = 0; i < n; ++i) {
                double s = diag[i] * v[i];
                if (i > 0) s += sym_off(i - 1) * v[i - 1];
                if (i < n - 1) s += sym_off(i) * v[i + 1];
                out[i] = s;
            }
            return out;
        }
        case Storage::Sparse:
            return sparse * v;
        case Storage::Dense:
            return dense * v;
    }
    return {};
}

Eigen::MatrixXd SymmetricOperatorMatrix::to_dense() const {
    switch (storage) {
        case Storage::Tridiagonal: {
            Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
            for (int i = 0; i < n; ++i) m(i, i) = diag[i];
            for (int i = 0; i + 1 < n; ++i)
                m(i, i + 1) = m(i + 1, i) = sym_off(i);
            return m;
        }
        case Storage::Sparse:
            return Eigen::MatrixXd(sparse);
        case Storage::Dense:
            return dense;
    }
    return {};
}

SymmetricOperatorMatrix assemble_lattice(const OperatorSpec& spec,
                                         const LatticeBox& box,
                                         const Potential& V) {
    int dim = box.dimension;
    std::vector<int> keep(box.size());
    int kill_idx = -1;
    if (spec.killing_site) {
        kill_idx = box.index(*spec.killing_site);
        if (kill_idx < 0)
            throw std::invalid_argument("killing site outside box");
    }
    int n = 0;
    for (int i = 0; i < box.size(); ++i)
        keep[i] = (i == kill_idx) ? -1 : n++;

    SymmetricOperatorMatrix m;
    m.n = n;
    if (dim == 1) {
        m.storage = SymmetricOperatorMatrix::Storage::Tridiagonal;
        m.diag.resize(n);
        m.sub.assign(n - 1 > 0 ? n - 1 : 0, 0.0);
        for (int i = 0; i < box.size(); ++i) {
            if (keep[i] < 0) continue;
            Site s = box.site(i);
            m.diag[keep[i]] = 2.0 - V(s);
        }
        for (int i = 0; i + 1 < box.size(); ++i) {
            if (keep[i] < 0 || keep[i + 1] < 0) continue;
            m.sub[keep[i]] = -1.0;
        }
        m.sup = m.sub;
        return m;
    }

    m.storage = SymmetricOperatorMatrix::Storage::Sparse;
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(size_t(n) * 5);
    for (int i = 0; i < box.size(); ++i) {
        if (keep[i] < 0) continue;
        Site s = box.site(i);
        trip.emplace_back(keep[i], keep[i], 4.0 - V(s));
        const Site nb[4] = {{s.x + 1, s.y}, {s.x - 1, s.y},
                            {s.x, s.y + 1}, {s.x, s.y - 1}};
        for (Site t : nb) {
            int j = box.index(t);
            if (j >= 0 && keep[j] >= 0)
                trip.emplace_back(keep[i], keep[j], -1.0);
        }
    }
    m.sparse.resize(n, n);
    m.sparse.setFromTriplets(trip.begin(), trip.end());
    return m;
}

double fractional_symbol_coeff(double alpha, int k) {
    // Gamma(2a+1) / (Gamma(a+k+1) Gamma(a-k+1)), sign (-1)^k; the second
    // Gamma has a negative argument for k > alpha + 1, handled by reflection
    // through lgamma of the positive reflected argument.
    k = std::abs(k);
    double a = alpha;
    double x = a - k + 1.0;  // may be <= 0
    if (x > 0) {
        double lg = special::lgamma_fn(2 * a + 1) -
                    special::lgamma_fn(a + k + 1) - special::lgamma_fn(x);
        return (k % 2 == 0 ? 1.0 : -1.0) * std::exp(lg);
    }
    if (x == std::floor(x)) return 0.0;  // Gamma pole: coefficient vanishes
    // 1/Gamma(x) = Gamma(1-x) sin(pi x) / pi
    double lg = special::lgamma_fn(2 * a + 1) - special::lgamma_fn(a + k + 1) +
                special::lgamma_fn(1.0 - x);
    double s = std::sin(special::pi * x) / special::pi;
    return (k % 2 == 0 ? 1.0 : -1.0) * s * std::exp(lg);
}

SymmetricOperatorMatrix assemble_fractional(double alpha,
                                            const LatticeBox& box,
                                            const Potential& V,
                                            double tail_cutoff) {
    if (box.dimension != 1)
        throw std::invalid_argument("fractional operator is 1D");
    int n = box.size();
    SymmetricOperatorMatrix m;
    m.storage = SymmetricOperatorMatrix::Storage::Dense;
    m.n = n;
    m.dense = Eigen::MatrixXd::Zero(n, n);
    std::vector<double> h(n);
    for (int k = 0; k < n; ++k) {
        h[k] = fractional_symbol_coeff(alpha, k);
        if (k > 0 && std::abs(h[k]) < tail_cutoff) {
            for (int j = k; j < n; ++j) h[j] = 0.0;
            break;
        }
    }
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m.dense(i, j) = h[std::abs(i - j)];
    for (int i = 0; i < n; ++i) m.dense(i, i) -= V(box.site(i));
    return m;
}

SymmetricOperatorMatrix assemble_bessel(
    double d, double h, int n, Boundary boundary,
    const std::function<double(double)>& V) {
    if (d <= 0) throw std::invalid_argument("d must be > 0");
    SymmetricOperatorMatrix m;
    m.storage = SymmetricOperatorMatrix::Storage::Tridiagonal;
    m.n = n;
    m.diag.resize(n);
    m.sub.resize(n - 1);
    m.sup.resize(n - 1);
    m.weight.resize(n);
    auto w_half = [&](double r) { return std::pow(r, d - 1); };
    for (int j = 1; j <= n; ++j) {
        double r = j * h;
        double wj = std::pow(r, d - 1) * h;
        m.weight[j - 1] = wj;
        double wm = w_half(r - h / 2), wp = w_half(r + h / 2);
        // inner boundary at r = 0: Neumann drops the flux through r_{1/2};
        // Dirichlet keeps it (value 0 at the ghost site r = 0)
        double inner = (j == 1 && boundary == Boundary::Neumann) ? 0.0 : wm;
        m.diag[j - 1] = (inner + wp) / (wj * h) - V(r);
        if (j < n) {
            m.sub[j - 1] = -wp / (wj * h);
            double rn = r + h;
            double wn = std::pow(rn, d - 1) * h;
            m.sup[j - 1] = -wp / (wn * h);
        }
    }
    return m;
}

SymmetricOperatorMatrix assemble_continuum_1d(
    double h, double L, const std::function<double(double)>& V) {
    int n = int(std::round(2 * L / h)) - 1;
    SymmetricOperatorMatrix m;
    m.storage = SymmetricOperatorMatrix::Storage::Tridiagonal;
    m.n = n;
    m.diag.resize(n);
    m.sub.assign(n - 1, -1.0 / (h * h));
    for (int i = 0; i < n; ++i) {
        double x = -L + (i + 1) * h;
        m.diag[i] = 2.0 / (h * h) - V(x);
    }
    m.sup = m.sub;
    return m;
}

SymmetricOperatorMatrix assemble_general_graph(const GraphWeights& w,
                                               const std::vector<double>& V,
                                               double c0,
                                               double* max_diagonal) {
    int n = w.n;
    if (int(V.size()) != n) throw std::invalid_argument("V size mismatch");
    Eigen::SparseMatrix<double> H0(n, n);
    H0.setFromTriplets(w.entries.begin(), w.entries.end());
    Eigen::SparseMatrix<double> H0t = H0.transpose();
    // validate: symmetric, off-diagonal <= 0, zero row sums, diag <= c0
    double maxd = 0.0;
    Eigen::VectorXd rowsum = Eigen::VectorXd::Zero(n);
    for (int k = 0; k < H0.outerSize(); ++k)
        for (Eigen::SparseMatrix<double>::InnerIterator it(H0, k); it; ++it) {
            double tv = H0t.coeff(it.row(), it.col());
            if (std::abs(it.value() - tv) > 1e-12)
                throw std::invalid_argument("generator not symmetric");
            if (it.row() == it.col()) {
                if (it.value() < 0)
                    throw std::invalid_argument("negative diagonal");
                maxd = std::max(maxd, it.value());
            } else if (it.value() > 1e-15) {
                throw std::invalid_argument("positive off-diagonal");
            }
            rowsum[it.row()] += it.value();
        }
    if (maxd > c0) throw std::invalid_argument("diagonal exceeds c0");
    if (max_diagonal) *max_diagonal = maxd;
    if (rowsum.size() && rowsum.cwiseAbs().maxCoeff() > 1e-10)
        throw std::invalid_argument("row sums not zero");
    // connectivity over the edge set
    std::vector<char> seen(n, 0);
    std::queue<int> q;
    q.push(0);
    seen[0] = 1;
    int cnt = 1;
    while (!q.empty()) {
        int u = q.front();
        q.pop();
        for (Eigen::SparseMatrix<double>::InnerIterator it(H0, u); it; ++it)
            if (it.row() != u && !seen[it.row()]) {
                seen[it.row()] = 1;
                ++cnt;
                q.push(it.row());
            }
    }
    if (cnt != n) throw std::invalid_argument("graph not connected");

    SymmetricOperatorMatrix m;
    m.storage = SymmetricOperatorMatrix::Storage::Sparse;
    m.n = n;
    m.sparse = H0;
    for (int i = 0; i < n; ++i) m.sparse.coeffRef(i, i) -= V[i];
    m.sparse.makeCompressed();
    return m;
}

}  // namespace clr
