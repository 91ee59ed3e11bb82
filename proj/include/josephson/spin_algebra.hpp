#pragma once

// Exact arithmetic on 2x2 complex operators (one quasi-spin site).
//
// Conventions: basis index 0 is "spin up" (sigma^z = +1, a Cooper pair is
// present), index 1 is "spin down". sigma^+ = |0><1| raises, sigma^- lowers,
// sigma^z = sigma^+ sigma^- - sigma^- sigma^+ = diag(1, -1).
//
// All spectral work goes through the Bloch form A = s*1 + v.sigma, which is
// exact for 2x2 and avoids generic eigensolvers.

#include <array>
#include <complex>
#include <string_view>

namespace josephson {

using cplx = std::complex<double>;
using Vec3 = std::array<double, 3>;
using CVec3 = std::array<cplx, 3>;

class Op2 {
 public:
  constexpr Op2() = default;
  constexpr Op2(cplx a00, cplx a01, cplx a10, cplx a11) : m_{a00, a01, a10, a11} {}

  static constexpr Op2 identity() { return {1.0, 0.0, 0.0, 1.0}; }
  static constexpr Op2 zero() { return {}; }
  static constexpr Op2 diag(cplx d0, cplx d1) { return {d0, 0.0, 0.0, d1}; }

  constexpr cplx operator()(int row, int col) const { return m_[2 * row + col]; }
  constexpr cplx& operator()(int row, int col) { return m_[2 * row + col]; }

  Op2 adjoint() const;
  cplx trace() const { return m_[0] + m_[3]; }
  /// Largest entry modulus.
  double max_norm() const;
  bool is_hermitian(double tol) const;

  Op2& operator+=(const Op2& o);
  Op2& operator-=(const Op2& o);
  Op2& operator*=(cplx s);

  friend Op2 operator+(Op2 a, const Op2& b) { return a += b; }
  friend Op2 operator-(Op2 a, const Op2& b) { return a -= b; }
  friend Op2 operator-(Op2 a) { return a *= -1.0; }
  friend Op2 operator*(Op2 a, cplx s) { return a *= s; }
  friend Op2 operator*(cplx s, Op2 a) { return a *= s; }
  friend Op2 operator*(double s, Op2 a) { return a *= s; }
  friend Op2 operator*(Op2 a, double s) { return a *= s; }
  friend Op2 operator*(const Op2& a, const Op2& b);

  friend bool operator==(const Op2&, const Op2&) = default;

 private:
  std::array<cplx, 4> m_{};
};

enum class Pauli { plus, minus, x, y, z, id };

Op2 pauli(Pauli name);
/// Accepts "plus", "minus", "x", "y", "z", "id". Throws InputError otherwise.
Op2 pauli(std::string_view name);

Op2 commutator(const Op2& a, const Op2& b);

/// Hermitian operator in Bloch form: scalar*1 + vector.sigma.
struct BlochForm {
  double scalar = 0.0;
  Vec3 vector{};
};

/// Throws InputError if `a` is not Hermitian within tol::kConstruction (relative).
BlochForm to_bloch(const Op2& a);
Op2 from_bloch(const BlochForm& b);

/// Physics Bloch vector a of a density matrix, rho = (1 + a.sigma)/2.
Vec3 bloch_vector(const Op2& rho);
/// Density matrix with Bloch vector a.
Op2 density_from_bloch(const Vec3& a);

/// Complex Bloch decomposition valid for any 2x2 operator: a0*1 + a.sigma.
struct ComplexBloch {
  cplx scalar;
  CVec3 vector;
};
ComplexBloch to_complex_bloch(const Op2& a);
Op2 from_complex_bloch(const ComplexBloch& b);

/// exp(-beta H) / Tr exp(-beta H). Bloch vector of the result is
/// -tanh(beta |n|) n_hat for H = h0 + n.sigma.
Op2 gibbs_state(const Op2& hamiltonian, double beta);

/// Diagonal part of rho in the eigenbasis of H. Degenerate H (zero traceless
/// part) leaves rho unchanged: every state commutes with a multiple of 1.
Op2 commutant_projection(const Op2& rho, const Op2& hamiltonian);

/// e^{itH} A e^{-itH}, as an exact rotation of A's Bloch vector about H's axis.
Op2 evolve_heisenberg(const Op2& a, const Op2& hamiltonian, double t);

/// Tr(rho A).
cplx expectation(const Op2& rho, const Op2& a);

/// Throws InputError unless rho is Hermitian, unit trace and positive
/// within the construction tolerances.
void require_density(const Op2& rho);

double dot(const Vec3& a, const Vec3& b);
Vec3 cross(const Vec3& a, const Vec3& b);
double norm(const Vec3& a);

}  // namespace josephson
