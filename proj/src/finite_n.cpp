#include "josephson/finite_n.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "josephson/errors.hpp"

namespace josephson {

namespace {

constexpr cplx kI{0.0, 1.0};

template <class Emit>
void expand(const std::vector<LocalFactor>& factors, std::size_t i, std::uint64_t input,
            std::uint64_t state, cplx amplitude, Emit& emit) {
  if (i == factors.size()) {
    emit(state, amplitude);
    return;
  }
  const std::size_t site = factors[i].site;
  const int bit_in = static_cast<int>((input >> site) & 1U);
  for (int bit_out = 0; bit_out < 2; ++bit_out) {
    const cplx m = factors[i].op(bit_out, bit_in);
    if (m == cplx{}) continue;
    const std::uint64_t next =
        (state & ~(std::uint64_t{1} << site)) | (static_cast<std::uint64_t>(bit_out) << site);
    expand(factors, i + 1, input, next, amplitude * m, emit);
  }
}

template <class Emit>
void for_each_image(const Term& term, std::uint64_t basis, Emit&& emit) {
  expand(term.factors, 0, basis, basis, term.coefficient, emit);
}

SparseColumn merge(SparseColumn entries) {
  std::sort(entries.begin(), entries.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  SparseColumn out;
  for (const auto& [row, value] : entries) {
    if (!out.empty() && out.back().first == row) {
      out.back().second += value;
    } else {
      out.emplace_back(row, value);
    }
  }
  std::erase_if(out, [](const auto& e) { return e.second == cplx{}; });
  return out;
}

double max_abs(const SparseColumn& c) {
  double out = 0.0;
  for (const auto& e : c) out = std::max(out, std::abs(e.second));
  return out;
}

void require_state_count(const BigOperator& op, std::span<const Op2> site_states) {
  if (site_states.size() != op.spec().num_sites()) {
    throw InputError("expected " + std::to_string(op.spec().num_sites()) + " site states, got " +
                     std::to_string(site_states.size()));
  }
  for (const Op2& rho : site_states) require_density(rho);
}

Eigen::MatrixXcd dense_product(std::span<const Op2> site_states) {
  // Site 0 is the least significant bit, so it is the last Kronecker factor.
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Ones(1, 1);
  for (std::size_t s = site_states.size(); s-- > 0;) {
    const Op2& r = site_states[s];
    const Eigen::Index d = m.rows();
    Eigen::MatrixXcd next(2 * d, 2 * d);
    for (int a = 0; a < 2; ++a) {
      for (int b = 0; b < 2; ++b) next.block(a * d, b * d, d, d) = r(a, b) * m;
    }
    // kron(m, r): row index = i * 2 + a.
    Eigen::MatrixXcd ordered(2 * d, 2 * d);
    for (Eigen::Index i = 0; i < d; ++i) {
      for (Eigen::Index j = 0; j < d; ++j) {
        for (int a = 0; a < 2; ++a) {
          for (int b = 0; b < 2; ++b) ordered(2 * i + a, 2 * j + b) = m(i, j) * r(a, b);
        }
      }
    }
    m = std::move(ordered);
  }
  return m;
}

StateVector product_vector(const std::vector<std::array<cplx, 2>>& amplitudes) {
  StateVector v = StateVector::Ones(1);
  for (std::size_t s = amplitudes.size(); s-- > 0;) {
    StateVector next(2 * v.size());
    for (Eigen::Index i = 0; i < v.size(); ++i) {
      next(2 * i) = v(i) * amplitudes[s][0];
      next(2 * i + 1) = v(i) * amplitudes[s][1];
    }
    v = std::move(next);
  }
  return v;
}

struct PureComponent {
  double weight;
  std::array<cplx, 2> vector;
};

// Spectral decomposition of a one-site density matrix.
std::vector<PureComponent> purify(const Op2& rho) {
  const Vec3 a = bloch_vector(rho);
  const double r = norm(a);
  if (r == 0.0) return {{0.5, {1.0, 0.0}}, {0.5, {0.0, 1.0}}};
  const double theta = std::acos(std::clamp(a[2] / r, -1.0, 1.0));
  const double phase = std::atan2(a[1], a[0]);
  const std::array<cplx, 2> up{std::cos(0.5 * theta), std::polar(std::sin(0.5 * theta), phase)};
  const std::array<cplx, 2> down{-std::polar(std::sin(0.5 * theta), -phase),
                                 std::cos(0.5 * theta)};
  std::vector<PureComponent> out;
  if (0.5 * (1.0 + r) > 0.0) out.push_back({0.5 * (1.0 + r), up});
  if (0.5 * (1.0 - r) > 0.0) out.push_back({0.5 * (1.0 - r), down});
  return out;
}

std::vector<cplx> dense_evolution(const BigOperator& op, const BigOperator& hamiltonian,
                                  std::span<const Op2> site_states, std::span<const double> times) {
  const Eigen::MatrixXcd h = Eigen::MatrixXcd(hamiltonian.to_sparse());
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(h);
  const Eigen::MatrixXcd& v = eig.eigenvectors();
  const Eigen::VectorXd& d = eig.eigenvalues();
  const Eigen::MatrixXcd rho_eig = v.adjoint() * dense_product(site_states) * v;
  const Eigen::MatrixXcd op_eig = v.adjoint() * Eigen::MatrixXcd(op.to_sparse()) * v;
  const Eigen::Index dim = d.size();

  std::vector<cplx> out;
  out.reserve(times.size());
  for (double t : times) {
    cplx sum{};
    for (Eigen::Index i = 0; i < dim; ++i) {
      for (Eigen::Index j = 0; j < dim; ++j) {
        sum += rho_eig(i, j) * std::polar(1.0, -t * (d(i) - d(j))) * op_eig(j, i);
      }
    }
    out.push_back(sum);
  }
  return out;
}

std::vector<cplx> krylov_evolution(const BigOperator& op, const BigOperator& hamiltonian,
                                   std::span<const Op2> site_states,
                                   std::span<const double> times,
                                   const EvolutionOptions& options) {
  std::vector<std::vector<PureComponent>> parts;
  std::size_t combinations = 1;
  for (const Op2& rho : site_states) {
    parts.push_back(purify(rho));
    combinations *= parts.back().size();
    if (combinations > options.max_pure_states) {
      throw ResourceError("Krylov evolution: mixed product state needs more than " +
                          std::to_string(options.max_pure_states) + " pure components");
    }
  }

  std::vector<std::size_t> order(times.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return times[a] < times[b]; });

  std::vector<cplx> out(times.size());
  std::vector<std::size_t> pick(parts.size(), 0);
  StateVector scratch(hamiltonian.dimension());
  for (std::size_t combo = 0; combo < combinations; ++combo) {
    std::size_t rest = combo;
    double weight = 1.0;
    std::vector<std::array<cplx, 2>> amplitudes(parts.size());
    for (std::size_t s = 0; s < parts.size(); ++s) {
      pick[s] = rest % parts[s].size();
      rest /= parts[s].size();
      weight *= parts[s][pick[s]].weight;
      amplitudes[s] = parts[s][pick[s]].vector;
    }
    StateVector psi = product_vector(amplitudes);
    double now = 0.0;
    for (std::size_t idx : order) {
      psi = krylov_evolve(hamiltonian, psi, times[idx] - now, options);
      now = times[idx];
      op.apply(psi, scratch);
      out[idx] += weight * psi.dot(scratch);
    }
  }
  return out;
}

}  // namespace

std::size_t LatticeSpec::dimension() const {
  const std::size_t bits = num_sites();
  if (bits >= 63 || (std::size_t{1} << bits) > dimension_cap) {
    throw ResourceError("Hilbert dimension 2^" + std::to_string(bits) + " exceeds the cap of " +
                        std::to_string(dimension_cap));
  }
  return std::size_t{1} << bits;
}

void LatticeSpec::validate() const {
  if (n == 0) throw InputError("lattice side length must be at least 1");
  (void)dimension();
}

std::size_t LatticeSpec::site(Side plate, std::size_t k, std::size_t l) const {
  if (k < 1 || k > n || l < 1 || l > n) throw InputError("site coordinates out of range");
  const std::size_t offset = plate == Side::I ? 0 : plate_size();
  return offset + (l - 1) * n + (k - 1);
}

std::vector<std::size_t> LatticeSpec::plate_sites(Side plate) const {
  std::vector<std::size_t> out(plate_size());
  std::iota(out.begin(), out.end(), plate == Side::I ? 0 : plate_size());
  return out;
}

std::vector<std::size_t> LatticeSpec::boundary_sites(Side plate) const {
  std::vector<std::size_t> out;
  for (std::size_t k = 1; k <= n; ++k) out.push_back(site(plate, k, 1));
  return out;
}

BigOperator::BigOperator(const LatticeSpec& spec) : spec_(spec) {
  spec_.validate();
  dimension_ = spec_.dimension();
}

void BigOperator::add_term(cplx coefficient, std::vector<LocalFactor> factors) {
  for (const auto& f : factors) {
    if (f.site >= spec_.num_sites()) throw InputError("add_term: site index out of range");
  }
  std::stable_sort(factors.begin(), factors.end(),
                   [](const auto& a, const auto& b) { return a.site < b.site; });
  Term term{coefficient, {}};
  for (const auto& f : factors) {
    if (!term.factors.empty() && term.factors.back().site == f.site) {
      term.factors.back().op = term.factors.back().op * f.op;
    } else {
      term.factors.push_back(f);
    }
  }
  terms_.push_back(std::move(term));
}

BigOperator& BigOperator::operator+=(const BigOperator& o) {
  if (o.spec_.num_sites() != spec_.num_sites()) throw InputError("operator lattice mismatch");
  terms_.insert(terms_.end(), o.terms_.begin(), o.terms_.end());
  return *this;
}

BigOperator& BigOperator::operator*=(cplx s) {
  for (auto& t : terms_) t.coefficient *= s;
  return *this;
}

SparseColumn BigOperator::column(std::uint64_t basis) const {
  SparseColumn entries;
  for (const Term& term : terms_) {
    for_each_image(term, basis, [&](std::uint64_t row, cplx v) { entries.emplace_back(row, v); });
  }
  return merge(std::move(entries));
}

SparseColumn BigOperator::apply(const SparseColumn& in) const {
  SparseColumn entries;
  for (const auto& [basis, amplitude] : in) {
    for (const Term& term : terms_) {
      for_each_image(term, basis,
                     [&](std::uint64_t row, cplx v) { entries.emplace_back(row, v * amplitude); });
    }
  }
  return merge(std::move(entries));
}

void BigOperator::apply(const StateVector& in, StateVector& out) const {
  if (static_cast<std::size_t>(in.size()) != dimension_) {
    throw InputError("apply: vector dimension mismatch");
  }
  out.setZero(in.size());
  for (std::uint64_t basis = 0; basis < dimension_; ++basis) {
    const cplx amplitude = in(static_cast<Eigen::Index>(basis));
    if (amplitude == cplx{}) continue;
    for (const Term& term : terms_) {
      for_each_image(term, basis, [&](std::uint64_t row, cplx v) {
        out(static_cast<Eigen::Index>(row)) += v * amplitude;
      });
    }
  }
}

SparseMatrix BigOperator::to_sparse() const {
  std::vector<Eigen::Triplet<cplx>> triplets;
  for (std::uint64_t basis = 0; basis < dimension_; ++basis) {
    for (const auto& [row, v] : column(basis)) {
      triplets.emplace_back(static_cast<int>(row), static_cast<int>(basis), v);
    }
  }
  SparseMatrix m(static_cast<Eigen::Index>(dimension_), static_cast<Eigen::Index>(dimension_));
  m.setFromTriplets(triplets.begin(), triplets.end());
  return m;
}

BigOperator build_plate_hamiltonian(const LatticeSpec& spec, Side plate, double epsilon) {
  BigOperator h(spec);
  const auto sites = spec.plate_sites(plate);
  const double coupling = 1.0 / static_cast<double>(spec.n);
  for (std::size_t x : sites) h.add_term(epsilon, {{x, pauli(Pauli::z)}});
  for (std::size_t x : sites) {
    for (std::size_t y : sites) {
      h.add_term(-coupling, {{x, pauli(Pauli::plus)}, {y, pauli(Pauli::minus)}});
    }
  }
  return h;
}

BigOperator build_tunneling(const LatticeSpec& spec, double gamma) {
  BigOperator v(spec);
  if (gamma == 0.0) return v;
  const double coupling = gamma / static_cast<double>(spec.n);
  for (std::size_t i : spec.boundary_sites(Side::I)) {
    for (std::size_t j : spec.boundary_sites(Side::II)) {
      v.add_term(-coupling, {{i, pauli(Pauli::plus)}, {j, pauli(Pauli::minus)}});
      v.add_term(-coupling, {{i, pauli(Pauli::minus)}, {j, pauli(Pauli::plus)}});
    }
  }
  return v;
}

BigOperator build_hamiltonian(const LatticeSpec& spec, const JunctionParams& p) {
  p.validate();
  return build_plate_hamiltonian(spec, Side::I, p.bulk_I.epsilon) +
         build_plate_hamiltonian(spec, Side::II, p.bulk_II.epsilon) +
         build_tunneling(spec, p.gamma);
}

BigOperator build_relative_number(const LatticeSpec& spec) {
  BigOperator q(spec);
  const Op2 number = pauli(Pauli::plus) * pauli(Pauli::minus);
  for (std::size_t x : spec.plate_sites(Side::I)) q.add_term(1.0, {{x, number}});
  for (std::size_t x : spec.plate_sites(Side::II)) q.add_term(-1.0, {{x, number}});
  return q;
}

BigOperator build_current(const LatticeSpec& spec, double gamma) {
  BigOperator j(spec);
  if (gamma == 0.0) return j;
  const cplx coupling = -2.0 * kI * gamma / static_cast<double>(spec.n);
  for (std::size_t i : spec.boundary_sites(Side::I)) {
    for (std::size_t k : spec.boundary_sites(Side::II)) {
      j.add_term(coupling, {{i, pauli(Pauli::minus)}, {k, pauli(Pauli::plus)}});
      j.add_term(-coupling, {{i, pauli(Pauli::plus)}, {k, pauli(Pauli::minus)}});
    }
  }
  return j;
}

std::vector<Op2> plate_product_state(const LatticeSpec& spec, const Op2& rho_I,
                                     const Op2& rho_II) {
  std::vector<Op2> out(spec.num_sites(), rho_II);
  for (std::size_t x : spec.plate_sites(Side::I)) out[x] = rho_I;
  return out;
}

cplx product_state_expectation(const BigOperator& op, std::span<const Op2> site_states) {
  require_state_count(op, site_states);
  cplx sum{};
  for (const Term& term : op.terms()) {
    cplx value = term.coefficient;
    for (const auto& f : term.factors) value *= expectation(site_states[f.site], f.op);
    sum += value;
  }
  return sum;
}

double commutator_identity_defect(const BigOperator& a, const BigOperator& b, cplx scale,
                                  const BigOperator& c) {
  double out = 0.0;
  for (std::uint64_t basis = 0; basis < a.dimension(); ++basis) {
    SparseColumn entries = a.apply(b.column(basis));
    for (auto& e : entries) e.second *= scale;
    for (const auto& [row, v] : b.apply(a.column(basis))) entries.emplace_back(row, -scale * v);
    for (const auto& [row, v] : c.column(basis)) entries.emplace_back(row, -v);
    out = std::max(out, max_abs(merge(std::move(entries))));
  }
  return out;
}

double hermiticity_defect(const BigOperator& a) {
  double out = 0.0;
  for (std::uint64_t col = 0; col < a.dimension(); ++col) {
    for (const auto& [row, v] : a.column(col)) {
      const SparseColumn other = a.column(row);
      const auto it = std::lower_bound(other.begin(), other.end(), col,
                                       [](const auto& e, std::uint64_t key) { return e.first < key; });
      const cplx mirrored = (it != other.end() && it->first == col) ? it->second : cplx{};
      out = std::max(out, std::abs(v - std::conj(mirrored)));
    }
  }
  return out;
}

std::vector<cplx> time_evolve_expectations(const BigOperator& op, const BigOperator& hamiltonian,
                                           std::span<const Op2> site_states,
                                           std::span<const double> times,
                                           const EvolutionOptions& options) {
  require_state_count(op, site_states);
  if (hamiltonian.dimension() != op.dimension()) throw InputError("operator dimension mismatch");
  if (op.dimension() <= options.dense_threshold) {
    return dense_evolution(op, hamiltonian, site_states, times);
  }
  return krylov_evolution(op, hamiltonian, site_states, times, options);
}

cplx time_evolve_expectation(const BigOperator& op, const BigOperator& hamiltonian,
                             std::span<const Op2> site_states, double t,
                             const EvolutionOptions& options) {
  const double times[] = {t};
  return time_evolve_expectations(op, hamiltonian, site_states, times, options).front();
}

StateVector krylov_evolve(const BigOperator& hamiltonian, const StateVector& psi, double t,
                          const EvolutionOptions& options) {
  const double total = std::abs(t);
  StateVector current = psi;
  if (total == 0.0) return current;
  const double direction = t > 0.0 ? 1.0 : -1.0;
  const std::size_t m = std::max<std::size_t>(2, options.krylov_dimension);

  double remaining = total;
  double step = total;
  std::vector<StateVector> basis;
  StateVector w(current.size());
  while (remaining > 0.0) {
    const double amplitude = current.norm();
    if (amplitude == 0.0) return current;

    // Lanczos with full reorthogonalization.
    basis.clear();
    basis.push_back(current / amplitude);
    std::vector<double> alpha;
    std::vector<double> beta;
    double residual_norm = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      hamiltonian.apply(basis[j], w);
      alpha.push_back(basis[j].dot(w).real());
      for (const auto& v : basis) w -= v.dot(w) * v;
      residual_norm = w.norm();
      if (residual_norm < 1e-13 * std::max(1.0, std::abs(alpha.back()))) {
        residual_norm = 0.0;
        break;
      }
      if (j + 1 == m) break;
      beta.push_back(residual_norm);
      basis.push_back(w / residual_norm);
    }
    const Eigen::Index k = static_cast<Eigen::Index>(alpha.size());
    Eigen::MatrixXd tri = Eigen::MatrixXd::Zero(k, k);
    for (Eigen::Index i = 0; i < k; ++i) tri(i, i) = alpha[static_cast<std::size_t>(i)];
    for (Eigen::Index i = 0; i + 1 < k; ++i) {
      tri(i, i + 1) = tri(i + 1, i) = beta[static_cast<std::size_t>(i)];
    }
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(tri);

    step = std::min(step, remaining);
    Eigen::VectorXcd coeffs;
    while (true) {
      const Eigen::VectorXcd phases =
          (eig.eigenvalues().cast<cplx>() * cplx(0.0, -direction * step)).array().exp();
      coeffs = eig.eigenvectors().cast<cplx>() *
               (phases.asDiagonal() * eig.eigenvectors().row(0).transpose().cast<cplx>());
      const double error = residual_norm * std::abs(coeffs(k - 1)) * amplitude;
      if (error <= options.krylov_tolerance * step / total || step < 1e-12 * total) break;
      step *= 0.5;
    }
    StateVector next = StateVector::Zero(current.size());
    for (Eigen::Index i = 0; i < k; ++i) next += coeffs(i) * basis[static_cast<std::size_t>(i)];
    current = amplitude * next;
    remaining -= step;
    step *= 2.0;
  }
  return current;
}

Op2 gauge_rotate(const Op2& rho, double alpha) {
  const Op2 u = Op2::diag(std::polar(1.0, -alpha), std::polar(1.0, alpha));
  return u * rho * u.adjoint();
}

}  // namespace josephson
