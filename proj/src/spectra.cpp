#include "clrlab/spectra.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SparseCholesky>
#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "clrlab/special.hpp"

namespace clr::spectra {

namespace {

// eigenvalues of T strictly below sigma, Sturm LDL recurrence
int sturm_count(const SymmetricOperatorMatrix& A, double sigma) {
    int cnt = 0;
    double q = 1.0;
    const double tiny = 1e-300;
    for (int i = 0; i < A.n; ++i) {
        double b2 = i > 0 ? A.sub[i - 1] * A.sup[i - 1] : 0.0;
        q = (A.diag[i] - sigma) - b2 / q;
        if (std::abs(q) < tiny) q = -tiny;
        if (q < 0) ++cnt;
    }
    return cnt;
}

// Bunch-Kaufman LDL^T with partial pivoting on a dense copy; returns the
// number of negative pivots (counting one per indefinite 2x2 block).
int dense_bk_count(Eigen::MatrixXd M) {
    const int n = int(M.rows());
    const double albk = (1.0 + std::sqrt(17.0)) / 8.0;
    const double tiny = 1e-300;
    auto swap_sym = [&](int a, int b) {
        if (a == b) return;
        M.row(a).swap(M.row(b));
        M.col(a).swap(M.col(b));
    };
    int neg = 0;
    int k = 0;
    while (k < n) {
        bool two = false;
        if (k < n - 1) {
            int r = k + 1;
            double lam = 0.0;
            for (int i = k + 1; i < n; ++i)
                if (std::abs(M(i, k)) > lam) {
                    lam = std::abs(M(i, k));
                    r = i;
                }
            if (lam > 0 && std::abs(M(k, k)) < albk * lam) {
                double sig = 0.0;
                for (int i = k; i < n; ++i)
                    if (i != r) sig = std::max(sig, std::abs(M(i, r)));
                if (std::abs(M(k, k)) * sig >= albk * lam * lam) {
                    // 1x1 at k
                } else if (std::abs(M(r, r)) >= albk * sig) {
                    swap_sym(k, r);
                } else {
                    swap_sym(k + 1, r);
                    two = true;
                }
            }
        }
        if (!two) {
            double d = M(k, k);
            if (std::abs(d) < tiny) d = -tiny;
            if (d < 0) ++neg;
            for (int i = k + 1; i < n; ++i) {
                double l = M(i, k) / d;
                if (l == 0.0) continue;
                for (int j = k + 1; j <= i; ++j) {
                    M(i, j) -= l * M(j, k);
                    M(j, i) = M(i, j);
                }
            }
            ++k;
        } else {
            double a = M(k, k), b = M(k + 1, k), c = M(k + 1, k + 1);
            double det = a * c - b * b;
            if (det < 0)
                ++neg;  // indefinite block: one of each sign
            else if (a + c < 0)
                neg += 2;
            for (int i = k + 2; i < n; ++i) {
                double u = M(i, k), v = M(i, k + 1);
                double l1 = (c * u - b * v) / det;
                double l2 = (a * v - b * u) / det;
                if (l1 == 0.0 && l2 == 0.0) continue;
                for (int j = k + 2; j <= i; ++j) {
                    M(i, j) -= l1 * M(j, k) + l2 * M(j, k + 1);
                    M(j, i) = M(i, j);
                }
            }
            k += 2;
        }
    }
    return neg;
}

int sparse_count(const SymmetricOperatorMatrix& A, double sigma) {
    Eigen::SparseMatrix<double> S = A.sparse;
    Eigen::SparseMatrix<double> I(A.n, A.n);
    I.setIdentity();
    const double scale = std::max(A.inf_norm(), 1.0);
    double shift = sigma;
    for (int attempt = 0; attempt < 6; ++attempt) {
        Eigen::SparseMatrix<double> B = S - shift * I;
        Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(B);
        if (ldlt.info() == Eigen::Success) {
            Eigen::VectorXd d = ldlt.vectorD();
            bool ok = true;
            int neg = 0;
            for (int i = 0; i < d.size(); ++i) {
                if (!std::isfinite(d[i]) || std::abs(d[i]) < 1e-14 * scale)
                    ok = false;
                if (d[i] < 0) ++neg;
            }
            if (ok) return neg;
        }
        shift += (attempt % 2 ? -1.0 : 1.0) * (attempt + 1) * 1e-11 * scale;
    }
    if (A.n <= 4000) return dense_bk_count(A.to_dense() -
                                           sigma * Eigen::MatrixXd::Identity(A.n, A.n));
    throw std::runtime_error("sparse inertia: factorization breakdown after perturbation budget");
}

}  // namespace

int count_below(const SymmetricOperatorMatrix& A, double sigma) {
    switch (A.storage) {
        case SymmetricOperatorMatrix::Storage::Tridiagonal:
            return sturm_count(A, sigma);
        case SymmetricOperatorMatrix::Storage::Sparse:
            return sparse_count(A, sigma);
        case SymmetricOperatorMatrix::Storage::Dense:
            return dense_bk_count(
                A.dense - sigma * Eigen::MatrixXd::Identity(A.n, A.n));
    }
    return 0;
}

int count_nonpositive(const SymmetricOperatorMatrix& A, double E) {
    if (E < 0) throw std::invalid_argument("E must be >= 0");
    double tau = 1e-12 * A.inf_norm();
    return count_below(A, -E + tau);
}

std::vector<double> eigenvalues_below(const SymmetricOperatorMatrix& A,
                                      double threshold, int cap) {
    double lo = -A.inf_norm() - 1.0;
    int total = count_below(A, threshold) - count_below(A, lo);
    if (total > cap) throw std::runtime_error("eigenvalue cap exceeded");
    std::vector<double> out;
    out.reserve(total);
    struct Iv {
        double lo, hi;
        int clo, chi;
    };
    std::vector<Iv> stack{{lo, threshold, count_below(A, lo),
                           count_below(A, threshold)}};
    while (!stack.empty()) {
        Iv iv = stack.back();
        stack.pop_back();
        int m = iv.chi - iv.clo;
        if (m == 0) continue;
        double width = iv.hi - iv.lo;
        double tol = 1e-12 + 1e-10 * std::max(std::abs(iv.lo), std::abs(iv.hi));
        if (width < tol) {
            double v = 0.5 * (iv.lo + iv.hi);
            for (int i = 0; i < m; ++i) out.push_back(v);
            continue;
        }
        double mid = 0.5 * (iv.lo + iv.hi);
        int cm = count_below(A, mid);
        stack.push_back({iv.lo, mid, iv.clo, cm});
        stack.push_back({mid, iv.hi, cm, iv.chi});
    }
    std::sort(out.begin(), out.end());
    return out;
}

double lieb_thirring_sum(const std::vector<double>& eigenvalues, double gamma) {
    if (gamma < 0) throw std::invalid_argument("gamma must be >= 0");
    double s = 0;
    for (double ev : eigenvalues) {
        if (ev > 0) throw std::invalid_argument("positive eigenvalue in moment sum");
        s += gamma == 0 ? 1.0 : std::pow(-ev, gamma);
    }
    return s;
}

double rank_one_eigenvalue(const std::function<double(double)>& resolvent_diag,
                           double alpha) {
    if (alpha <= 0) throw std::invalid_argument("alpha must be > 0");
    auto g = [&](double lam) { return -alpha * resolvent_diag(lam) - 1.0; };
    double lo = 1.0, hi = 1.0;
    double glo = g(lo);
    if (glo > 0) {
        double ghi = glo;
        while (ghi > 0) {
            hi *= 2;
            if (hi > 1e15) throw std::runtime_error("rank-one root: no sign change");
            ghi = g(hi);
        }
        lo = hi / 2;
    } else if (glo < 0) {
        double gl = glo;
        while (gl < 0) {
            lo /= 2;
            if (lo < 1e-300)
                throw std::runtime_error("rank-one root: no sign change (weak coupling)");
            gl = g(lo);
        }
        hi = lo * 2;
    } else {
        return lo;
    }
    // g decreases from g(lo) > 0 to g(hi) < 0
    for (int it = 0; it < 400; ++it) {
        double mid = 0.5 * (lo + hi);
        double gm = g(mid);
        if (std::abs(gm) <= 1e-10) return mid;
        (gm > 0 ? lo : hi) = mid;
        if (hi - lo < 1e-16 * hi) break;
    }
    return 0.5 * (lo + hi);
}

int oscillation_count_1d(const std::function<double(double)>& V, double L,
                         double max_step) {
    // Pruefer phase: u = r sin(theta), u' = r cos(theta),
    // theta' = cos^2(theta) + V(x) sin^2(theta); zeros of u at theta = k pi.
    double x = -L, theta = 0.0;
    auto rhs = [&](double xx, double th) {
        double c = std::cos(th), s = std::sin(th);
        return c * c + V(xx) * s * s;
    };
    while (x < L) {
        double rate = std::max(1.0, std::abs(V(x)));
        double h = std::min(max_step, (special::pi / 8.0) / rate);
        h = std::min(h, L - x);
        if (h < 1e-12) throw std::runtime_error("oscillation step underflow");
        double k1 = rhs(x, theta);
        double k2 = rhs(x + h / 2, theta + h / 2 * k1);
        double k3 = rhs(x + h / 2, theta + h / 2 * k2);
        double k4 = rhs(x + h, theta + h * k3);
        theta += h / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
        x += h;
    }
    int zeros = int(std::floor(theta / special::pi - 1e-9));
    return std::max(zeros, 0);
}

namespace {

// log-derivative mismatch at r = 1 for angular mode m: interior J_m(k r)
// with k = sqrt(1 + lambda), exterior K_m(kappa r) with kappa = sqrt(-lambda)
double disk_match(int m, double lam) {
    double k = std::sqrt(1.0 + lam);
    double kap = std::sqrt(-lam);
    double jm = special::bessel_jn(m, k);
    double jd = m == 0 ? -special::bessel_j1(k)
                       : special::bessel_jn(m - 1, k) - m / k * jm;
    double km = special::bessel_kn(m, kap);
    double kd = m == 0 ? -special::bessel_k1(kap)
                       : -special::bessel_kn(m - 1, kap) - m / kap * km;
    return k * jd / jm - kap * kd / km;
}

}  // namespace

DiskWellResult disk_well_eigencount(int m) {
    DiskWellResult res;
    const int N = 6000;
    const double a = -1.0 + 1e-7, b = -1e-9;
    double prev = disk_match(m, a);
    double xprev = a;
    for (int i = 1; i <= N; ++i) {
        double x = a + (b - a) * i / N;
        double f = disk_match(m, x);
        if (std::isfinite(prev) && std::isfinite(f) && prev * f < 0) {
            double lo = xprev, hi = x, flo = prev;
            for (int it = 0; it < 200; ++it) {
                double mid = 0.5 * (lo + hi);
                double fm = disk_match(m, mid);
                if ((flo < 0) == (fm < 0)) lo = mid, flo = fm;
                else hi = mid;
                if (hi - lo < 1e-12) break;
            }
            ++res.count;
            res.lambda = 0.5 * (lo + hi);
        }
        prev = f;
        xprev = x;
    }
    return res;
}

namespace {

// solve (T - s I) x = b for symmetrized tridiagonal T, partial pivoting
Eigen::VectorXd tridiag_shifted_solve(const SymmetricOperatorMatrix& A,
                                      double s, Eigen::VectorXd b) {
    int n = A.n;
    std::vector<double> d(n), e(n - 1 > 0 ? n - 1 : 0), f(n > 2 ? n - 2 : 0,
                                                          0.0);
    std::vector<double> low(n - 1 > 0 ? n - 1 : 0);
    for (int i = 0; i < n; ++i) d[i] = A.diag[i] - s;
    for (int i = 0; i + 1 < n; ++i) low[i] = e[i] = A.sym_off(i);
    for (int i = 0; i + 1 < n; ++i) {
        if (std::abs(low[i]) > std::abs(d[i])) {
            std::swap(d[i], low[i]);
            double tmp = e[i];
            e[i] = d[i + 1];
            d[i + 1] = tmp;
            if (i + 2 < n) {
                f[i] = e[i + 1];
                e[i + 1] = 0.0;
            }
            std::swap(b[i], b[i + 1]);
        }
        double piv = d[i];
        if (piv == 0.0) piv = 1e-300;
        double m = low[i] / piv;
        d[i + 1] -= m * e[i];
        if (i + 2 < n) e[i + 1] -= m * f[i];
        b[i + 1] -= m * b[i];
    }
    for (int i = n - 1; i >= 0; --i) {
        double v = b[i];
        if (i + 1 < n) v -= e[i] * b[i + 1];
        if (i + 2 < n) v -= f[i] * b[i + 2];
        double piv = d[i];
        if (piv == 0.0) piv = 1e-300;
        b[i] = v / piv;
    }
    return b;
}

}  // namespace

std::vector<EigenPair> tridiagonal_eigenpairs_below(
    const SymmetricOperatorMatrix& A, double lambda_max) {
    if (A.storage != SymmetricOperatorMatrix::Storage::Tridiagonal)
        throw std::invalid_argument("tridiagonal storage required");
    int m = count_below(A, lambda_max);
    double scale = A.inf_norm() + 1.0;
    std::vector<EigenPair> out;
    out.reserve(m);
    for (int k = 0; k < m; ++k) {
        double lo = -scale, hi = lambda_max;
        while (hi - lo > 1e-14 * scale) {
            double mid = 0.5 * (lo + hi);
            (count_below(A, mid) <= k ? lo : hi) = mid;
        }
        double lam = 0.5 * (lo + hi);
        // inverse iteration at a slightly detuned shift
        double shift = lam + 1e-11 * scale;
        Eigen::VectorXd v = Eigen::VectorXd::Ones(A.n);
        for (int i = 0; i < A.n; ++i) v[i] += 1e-3 * std::sin(37.0 * (i + 1));
        v.normalize();
        for (int it = 0; it < 4; ++it) {
            v = tridiag_shifted_solve(A, shift, v);
            // project out previously found vectors with nearby eigenvalues
            for (const auto& p : out)
                if (std::abs(p.lambda - lam) < 1e-6 * scale)
                    v -= p.vec.dot(v) * p.vec;
            v.normalize();
        }
        // Rayleigh refinement of the eigenvalue
        double rq = v.dot(A.apply(v));
        out.push_back({std::abs(rq - lam) < 1e-8 * scale ? rq : lam, v});
    }
    return out;
}

std::vector<double> dense_eigenvalues(const Eigen::MatrixXd& A) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A,
                                                      Eigen::EigenvaluesOnly);
    std::vector<double> out(es.eigenvalues().data(),
                            es.eigenvalues().data() + es.eigenvalues().size());
    return out;
}

}  // namespace clr::spectra
