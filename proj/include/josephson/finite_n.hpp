#pragma once

// Brute-force microscopic model on small lattices.
//
// Two N x N plates of quasi-spins; row l = 1 of each plate is the contact row.
// Sites are numbered plate I first, then plate II, row-major within a plate:
//   site(plate, k, l) = plate_offset + (l - 1) N + (k - 1),   k, l in 1..N.
// Site s is bit s of a basis index; bit value 0 is spin up (pair present).
//
// Operators are kept as sums of site-local products (term lists). That makes
// product-state expectations a per-site contraction and lets large lattices be
// applied matrix-free; small ones can be materialized as Eigen sparse matrices.

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "josephson/ness.hpp"
#include "josephson/spin_algebra.hpp"

namespace josephson {

inline constexpr std::size_t kDefaultDimensionCap = std::size_t{1} << 20;

struct LatticeSpec {
  std::size_t n = 2;
  std::size_t dimension_cap = kDefaultDimensionCap;

  std::size_t plate_size() const { return n * n; }
  std::size_t num_sites() const { return 2 * n * n; }
  /// 4^{N^2}. Throws ResourceError if it exceeds the cap.
  std::size_t dimension() const;
  /// Throws InputError for n = 0, ResourceError when over the cap.
  void validate() const;

  std::size_t site(Side plate, std::size_t k, std::size_t l) const;
  std::vector<std::size_t> plate_sites(Side plate) const;
  std::vector<std::size_t> boundary_sites(Side plate) const;
};

struct LocalFactor {
  std::size_t site = 0;
  Op2 op;
};

struct Term {
  cplx coefficient{1.0, 0.0};
  std::vector<LocalFactor> factors;  // sorted by site, one factor per site
};

using SparseMatrix = Eigen::SparseMatrix<cplx>;
using StateVector = Eigen::VectorXcd;
using SparseColumn = std::vector<std::pair<std::uint64_t, cplx>>;

class BigOperator {
 public:
  explicit BigOperator(const LatticeSpec& spec);

  /// Adds coefficient * prod(factors). Factors on the same site are multiplied
  /// in the order given (leftmost acts last).
  void add_term(cplx coefficient, std::vector<LocalFactor> factors);

  const LatticeSpec& spec() const { return spec_; }
  const std::vector<Term>& terms() const { return terms_; }
  std::size_t dimension() const { return dimension_; }

  BigOperator& operator+=(const BigOperator& o);
  BigOperator& operator*=(cplx s);
  friend BigOperator operator+(BigOperator a, const BigOperator& b) { return a += b; }
  friend BigOperator operator-(BigOperator a, const BigOperator& b) {
    BigOperator nb = b;
    nb *= -1.0;
    return a += nb;
  }
  friend BigOperator operator*(cplx s, BigOperator a) { return a *= s; }

  /// op |basis>, duplicates merged, sorted by row.
  SparseColumn column(std::uint64_t basis) const;
  /// op applied to a sparse vector.
  SparseColumn apply(const SparseColumn& in) const;
  /// out = op in (matrix-free).
  void apply(const StateVector& in, StateVector& out) const;

  SparseMatrix to_sparse() const;

 private:
  LatticeSpec spec_;
  std::size_t dimension_ = 0;
  std::vector<Term> terms_;
};

/// sum eps sigma^z - (1/N) sum sigma^+ sigma^- over one plate.
BigOperator build_plate_hamiltonian(const LatticeSpec& spec, Side plate, double epsilon);
/// -(gamma/N) sum over contact rows of (sigma^+_I sigma^-_II + h.c.).
BigOperator build_tunneling(const LatticeSpec& spec, double gamma);
/// H_N = H_I + H_II + V.
BigOperator build_hamiltonian(const LatticeSpec& spec, const JunctionParams& p);
/// Q_N = sum (n_I - n_II), n = sigma^+ sigma^-.
BigOperator build_relative_number(const LatticeSpec& spec);
/// J(Q_N) = -(2i gamma/N) sum (sigma^-_I(i) sigma^+_II(j) - h.c.) over contact rows.
BigOperator build_current(const LatticeSpec& spec, double gamma);

/// Product state with every plate-I site in rho_I and every plate-II site in rho_II.
std::vector<Op2> plate_product_state(const LatticeSpec& spec, const Op2& rho_I, const Op2& rho_II);

/// Tr(prod rho_x * op) by per-site contraction. Throws InputError on a site-count mismatch.
cplx product_state_expectation(const BigOperator& op, std::span<const Op2> site_states);

/// max entry of |scale (A B - B A) - C|, streamed column by column.
double commutator_identity_defect(const BigOperator& a, const BigOperator& b, cplx scale,
                                  const BigOperator& c);

/// max entry of |A - A^dagger|, streamed column by column.
double hermiticity_defect(const BigOperator& a);

struct EvolutionOptions {
  /// Dense spectral evolution up to this dimension, Krylov above it.
  std::size_t dense_threshold = std::size_t{1} << 10;
  double krylov_tolerance = 1e-10;
  std::size_t krylov_dimension = 30;
  /// Cap on the number of pure product states in the mixture decomposition
  /// used by the Krylov path.
  std::size_t max_pure_states = 256;
};

/// Tr(rho e^{itH} op e^{-itH}) for a product state rho, one value per time.
std::vector<cplx> time_evolve_expectations(const BigOperator& op, const BigOperator& hamiltonian,
                                           std::span<const Op2> site_states,
                                           std::span<const double> times,
                                           const EvolutionOptions& options = {});

cplx time_evolve_expectation(const BigOperator& op, const BigOperator& hamiltonian,
                             std::span<const Op2> site_states, double t,
                             const EvolutionOptions& options = {});

/// e^{-i H t} psi by adaptive Lanczos steps.
StateVector krylov_evolve(const BigOperator& hamiltonian, const StateVector& psi, double t,
                          const EvolutionOptions& options = {});

/// One-site state composed with the gauge automorphism A -> e^{i alpha sigma^z} A e^{-i alpha sigma^z},
/// i.e. rho -> e^{-i alpha sigma^z} rho e^{i alpha sigma^z}. Shifts the phase of Tr(rho sigma^+) by 2 alpha.
Op2 gauge_rotate(const Op2& rho, double alpha);

}  // namespace josephson
