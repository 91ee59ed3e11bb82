#include "josephson/spin_algebra.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "josephson/constants.hpp"
#include "josephson/errors.hpp"

namespace josephson {

namespace {

constexpr cplx kI{0.0, 1.0};

CVec3 rotate(const CVec3& v, const Vec3& axis, double angle) {
  // Rodrigues formula, linear in v so it applies componentwise to complex vectors.
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  const cplx k_dot_v = axis[0] * v[0] + axis[1] * v[1] + axis[2] * v[2];
  const CVec3 k_cross_v{axis[1] * v[2] - axis[2] * v[1], axis[2] * v[0] - axis[0] * v[2],
                        axis[0] * v[1] - axis[1] * v[0]};
  CVec3 out;
  for (int i = 0; i < 3; ++i) {
    out[i] = v[i] * c + k_cross_v[i] * s + axis[i] * k_dot_v * (1.0 - c);
  }
  return out;
}

}  // namespace

Op2 Op2::adjoint() const {
  return {std::conj(m_[0]), std::conj(m_[2]), std::conj(m_[1]), std::conj(m_[3])};
}

double Op2::max_norm() const {
  double out = 0.0;
  for (const auto& z : m_) out = std::max(out, std::abs(z));
  return out;
}

bool Op2::is_hermitian(double tol) const { return (*this - adjoint()).max_norm() <= tol; }

Op2& Op2::operator+=(const Op2& o) {
  for (int i = 0; i < 4; ++i) m_[i] += o.m_[i];
  return *this;
}

Op2& Op2::operator-=(const Op2& o) {
  for (int i = 0; i < 4; ++i) m_[i] -= o.m_[i];
  return *this;
}

Op2& Op2::operator*=(cplx s) {
  for (auto& z : m_) z *= s;
  return *this;
}

Op2 operator*(const Op2& a, const Op2& b) {
  return {a(0, 0) * b(0, 0) + a(0, 1) * b(1, 0), a(0, 0) * b(0, 1) + a(0, 1) * b(1, 1),
          a(1, 0) * b(0, 0) + a(1, 1) * b(1, 0), a(1, 0) * b(0, 1) + a(1, 1) * b(1, 1)};
}

Op2 pauli(Pauli name) {
  switch (name) {
    case Pauli::plus:
      return {0.0, 1.0, 0.0, 0.0};
    case Pauli::minus:
      return {0.0, 0.0, 1.0, 0.0};
    case Pauli::x:
      return {0.0, 1.0, 1.0, 0.0};
    case Pauli::y:
      return {0.0, -kI, kI, 0.0};
    case Pauli::z:
      return Op2::diag(1.0, -1.0);
    case Pauli::id:
      return Op2::identity();
  }
  throw InputError("pauli: unknown enumerator");
}

Op2 pauli(std::string_view name) {
  if (name == "plus") return pauli(Pauli::plus);
  if (name == "minus") return pauli(Pauli::minus);
  if (name == "x") return pauli(Pauli::x);
  if (name == "y") return pauli(Pauli::y);
  if (name == "z") return pauli(Pauli::z);
  if (name == "id") return pauli(Pauli::id);
  throw InputError("pauli: unknown name '" + std::string(name) + "'");
}

Op2 commutator(const Op2& a, const Op2& b) { return a * b - b * a; }

ComplexBloch to_complex_bloch(const Op2& a) {
  return {0.5 * (a(0, 0) + a(1, 1)),
          {0.5 * (a(0, 1) + a(1, 0)), 0.5 * kI * (a(0, 1) - a(1, 0)), 0.5 * (a(0, 0) - a(1, 1))}};
}

Op2 from_complex_bloch(const ComplexBloch& b) {
  const auto& v = b.vector;
  return {b.scalar + v[2], v[0] - kI * v[1], v[0] + kI * v[1], b.scalar - v[2]};
}

BlochForm to_bloch(const Op2& a) {
  if (!a.is_hermitian(tol::kConstruction * std::max(1.0, a.max_norm()))) {
    throw InputError("to_bloch: operator is not Hermitian");
  }
  const auto c = to_complex_bloch(a);
  return {c.scalar.real(), {c.vector[0].real(), c.vector[1].real(), c.vector[2].real()}};
}

Op2 from_bloch(const BlochForm& b) {
  return from_complex_bloch({b.scalar, {b.vector[0], b.vector[1], b.vector[2]}});
}

Vec3 bloch_vector(const Op2& rho) {
  const Vec3 v = to_bloch(rho).vector;
  return {2.0 * v[0], 2.0 * v[1], 2.0 * v[2]};
}

Op2 density_from_bloch(const Vec3& a) {
  return from_bloch({0.5, {0.5 * a[0], 0.5 * a[1], 0.5 * a[2]}});
}

Op2 gibbs_state(const Op2& hamiltonian, double beta) {
  if (!std::isfinite(beta) || beta <= 0.0) {
    throw InputError("gibbs_state: beta must be finite and positive");
  }
  const Vec3 n = to_bloch(hamiltonian).vector;
  const double length = norm(n);
  if (length == 0.0) return 0.5 * Op2::identity();
  const double polarization = -std::tanh(beta * length) / length;
  return density_from_bloch({polarization * n[0], polarization * n[1], polarization * n[2]});
}

Op2 commutant_projection(const Op2& rho, const Op2& hamiltonian) {
  const BlochForm r = to_bloch(rho);
  const Vec3 n = to_bloch(hamiltonian).vector;
  const double length = norm(n);
  if (length == 0.0) return rho;
  const Vec3 axis{n[0] / length, n[1] / length, n[2] / length};
  const double along = dot(r.vector, axis);
  return from_bloch({r.scalar, {along * axis[0], along * axis[1], along * axis[2]}});
}

Op2 evolve_heisenberg(const Op2& a, const Op2& hamiltonian, double t) {
  const Vec3 n = to_bloch(hamiltonian).vector;
  const double length = norm(n);
  if (length == 0.0 || t == 0.0) return a;
  const Vec3 axis{n[0] / length, n[1] / length, n[2] / length};
  // d/dt v = -2 n x v, i.e. a rotation by -2|n|t about n_hat.
  ComplexBloch b = to_complex_bloch(a);
  b.vector = rotate(b.vector, axis, -2.0 * length * t);
  return from_complex_bloch(b);
}

cplx expectation(const Op2& rho, const Op2& a) { return (rho * a).trace(); }

void require_density(const Op2& rho) {
  const BlochForm b = to_bloch(rho);
  if (std::abs(2.0 * b.scalar - 1.0) > tol::kConstruction) {
    throw InputError("density matrix must have unit trace");
  }
  if (norm(b.vector) > 0.5 + 0.5 * tol::kBlochLength) {
    throw InputError("density matrix must be positive");
  }
}

double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

double norm(const Vec3& a) { return std::hypot(a[0], a[1], a[2]); }

}  // namespace josephson
