#pragma once

// Finite truncations of the operator families: lattice Laplacians in one and
// two dimensions, fractional powers of the 1D lattice Laplacian, Bessel
// operators on the half line, the continuum 1D operator, and general graph
// generators. All assemblies produce a SymmetricOperatorMatrix with Dirichlet
// truncation (exterior sites dropped); an optional killing site removes one
// row/column (Dirichlet point condition).

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace clr {

struct Site {
    int x = 0;
    int y = 0;
    friend bool operator==(const Site&, const Site&) = default;
    friend auto operator<=>(const Site&, const Site&) = default;
};

inline int max_norm(Site s) { return std::max(std::abs(s.x), std::abs(s.y)); }

// Sites x with max-norm <= R in dimension d; index bijection to 0..n-1.
struct LatticeBox {
    int dimension = 1;  // 1 or 2
    int half_width = 1;

    LatticeBox(int dim, int R);
    int size() const { return n_; }
    int width() const { return 2 * half_width + 1; }
    bool contains(Site s) const;
    int index(Site s) const;
    Site site(int idx) const;

  private:
    int n_;
};

// Non-negative potential on lattice sites. Either a finite-support list of
// values or a closed-form family evaluated pointwise at site coordinates.
class Potential {
  public:
    Potential() : tag_("zero") {}

    static Potential zero();
    static Potential delta(Site s, double amp);
    static Potential from_entries(std::vector<std::pair<Site, double>> v);
    // infinite-support closed-form family
    static Potential family(std::string tag, std::function<double(Site)> f);

    double operator()(Site s) const;
    const std::string& tag() const { return tag_; }
    bool finite_support() const { return !eval_; }
    const std::vector<std::pair<Site, double>>& entries() const {
        return entries_;
    }

    std::optional<double> sup_bound;  // Lambda, if known

  private:
    std::string tag_;
    std::vector<std::pair<Site, double>> entries_;
    std::map<std::pair<int, int>, double> lookup_;
    std::function<double(Site)> eval_;
};

enum class Family {
    Lattice1D,
    Lattice2D,
    FractionalLattice,
    Bessel,
    Continuum1D,
    GeneralGraph,
};

enum class Boundary { Dirichlet, Neumann };

struct OperatorSpec {
    Family family = Family::Lattice1D;
    double alpha = 1.0;  // FractionalLattice
    double bessel_d = 3.0;
    Boundary boundary = Boundary::Dirichlet;
    std::optional<Site> killing_site;
};

// Symmetric matrix of a truncated operator. Storage is chosen per family:
// tridiagonal (1D, Bessel, continuum), sparse (2D lattice, graphs) or dense
// (fractional Toeplitz). Bessel matrices carry the discrete weight
// w_j = r_j^{d-1} h and store the raw non-symmetric tridiagonal together
// with the weight; all eigenvalue counting uses the exactly similar
// symmetrized form with off-diagonal b_j^2 = sub_j * sup_j.
struct SymmetricOperatorMatrix {
    enum class Storage { Tridiagonal, Sparse, Dense };
    Storage storage = Storage::Tridiagonal;
    int n = 0;

    // Tridiagonal: diag[0..n-1], sub/sup[0..n-2]; sub == sup unless weighted.
    std::vector<double> diag, sub, sup;
    std::vector<double> weight;  // optional measure (Bessel)

    Eigen::SparseMatrix<double> sparse;  // lower+upper stored
    Eigen::MatrixXd dense;

    double inf_norm() const;
    Eigen::VectorXd apply(const Eigen::VectorXd& v) const;
    Eigen::MatrixXd to_dense() const;  // symmetrized form
    // symmetrized off-diagonal sqrt(sub_j * sup_j), tridiagonal only
    double sym_off(int j) const;
};

// -Delta - V on the box, Dirichlet outside; optional killing site removed.
SymmetricOperatorMatrix assemble_lattice(const OperatorSpec& spec,
                                         const LatticeBox& box,
                                         const Potential& V);

// Dense symmetric Toeplitz matrix of (-Delta)^alpha - V on a 1D box.
// Entries h_alpha(k) = (-1)^k Gamma(2 alpha + 1) /
//                      (Gamma(alpha + k + 1) Gamma(alpha - k + 1)),
// the Fourier coefficients of (4 sin^2(phi/2))^alpha; the off-diagonal tail
// is truncated symmetrically below `tail_cutoff`.
SymmetricOperatorMatrix assemble_fractional(double alpha,
                                            const LatticeBox& box,
                                            const Potential& V,
                                            double tail_cutoff = 1e-14);

// Toeplitz symbol coefficient h_alpha(k) (exposed for oracle tests).
double fractional_symbol_coeff(double alpha, int k);

// -B_d - V on the uniform radial grid r_j = j h, j = 1..n, outer Dirichlet.
// Divergence-form discretization with half-grid weights r_{j+-1/2}^{d-1};
// symmetric in the weighted inner product with w_j = r_j^{d-1} h.
SymmetricOperatorMatrix assemble_bessel(double d, double h, int n,
                                        Boundary boundary,
                                        const std::function<double(double)>& V);

// -d^2/dx^2 - V on [-L, L], Dirichlet, grid step h.
SymmetricOperatorMatrix assemble_continuum_1d(
    double h, double L, const std::function<double(double)>& V);

// General graph generator H_0 with matrix elements h(x,y); validates
// symmetry, off-diagonal signs, zero row sums and connectivity. c0 bounds
// the diagonal (default: unchecked, max recorded via max_diagonal).
struct GraphWeights {
    int n = 0;
    std::vector<Eigen::Triplet<double>> entries;  // includes diagonal
};
SymmetricOperatorMatrix assemble_general_graph(
    const GraphWeights& w, const std::vector<double>& V,
    double c0 = std::numeric_limits<double>::infinity(),
    double* max_diagonal = nullptr);

}  // namespace clr
