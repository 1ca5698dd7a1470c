// core_state.hpp
// Two-path single-photon states: path qubit (A, B) tensored with an internal
// d-level degree of freedom. Overlap, Schmidt decomposition, density
// matrices, partial traces and concurrence.
//
// Tensor index convention is path-major: basis index = path * d + internal,
// with path A = 0 and path B = 1.

#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>

namespace vdc {

using Complex = std::complex<double>;
using ComplexVector = Eigen::VectorXcd;
using ComplexMatrix = Eigen::MatrixXcd;

/// Tolerance used when validating user-supplied states and operators.
inline constexpr double kValidationTolerance = 1e-9;
/// Hermiticity / trace tolerance for density matrices.
inline constexpr double kDensityTolerance = 1e-10;
/// Smallest eigenvalue still accepted as physical.
inline constexpr double kPhysicalityTolerance = 1e-8;

/// Raised when an input violates a documented precondition.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class PathLabel { A, B };

constexpr const char* to_string(PathLabel p) noexcept { return p == PathLabel::A ? "A" : "B"; }

constexpr PathLabel other(PathLabel p) noexcept {
  return p == PathLabel::A ? PathLabel::B : PathLabel::A;
}

/// Normalized state of the photon's internal degrees of freedom.
class InternalState {
 public:
  explicit InternalState(ComplexVector amplitudes) : amplitudes_(std::move(amplitudes)) {
    if (amplitudes_.size() < 2) {
      throw ValidationError("internal state needs dimension >= 2, got " +
                            std::to_string(amplitudes_.size()));
    }
    if (!amplitudes_.allFinite()) throw ValidationError("internal state has non-finite amplitudes");
    const double norm = amplitudes_.norm();
    if (std::abs(norm - 1.0) > kValidationTolerance) {
      throw ValidationError("internal state is not normalized (norm = " + std::to_string(norm) + ")");
    }
  }

  InternalState(std::initializer_list<Complex> amplitudes)
      : InternalState(from_list(amplitudes)) {}

  std::size_t dim() const noexcept { return static_cast<std::size_t>(amplitudes_.size()); }
  const ComplexVector& amplitudes() const noexcept { return amplitudes_; }
  Complex operator[](std::size_t i) const { return amplitudes_(static_cast<Eigen::Index>(i)); }

 private:
  static ComplexVector from_list(std::initializer_list<Complex> values) {
    ComplexVector v(static_cast<Eigen::Index>(values.size()));
    Eigen::Index i = 0;
    for (const Complex& c : values) v(i++) = c;
    return v;
  }

  ComplexVector amplitudes_;
};

/// c_a |1_a> (x) |phi_a> + c_b |1_b> (x) |phi_b>.
class TwoPathState {
 public:
  TwoPathState(Complex c_a, Complex c_b, InternalState phi_a, InternalState phi_b)
      : c_a_(c_a), c_b_(c_b), phi_a_(std::move(phi_a)), phi_b_(std::move(phi_b)) {
    if (!std::isfinite(c_a_.real()) || !std::isfinite(c_a_.imag()) ||
        !std::isfinite(c_b_.real()) || !std::isfinite(c_b_.imag())) {
      throw ValidationError("path amplitudes must be finite");
    }
    const double total = std::norm(c_a_) + std::norm(c_b_);
    if (std::abs(total - 1.0) > kValidationTolerance) {
      throw ValidationError("path amplitudes are not normalized (|c_a|^2 + |c_b|^2 = " +
                            std::to_string(total) + ")");
    }
    if (phi_a_.dim() != phi_b_.dim()) {
      throw ValidationError("internal state dimensions differ (" + std::to_string(phi_a_.dim()) +
                            " vs " + std::to_string(phi_b_.dim()) + ")");
    }
  }

  Complex c_a() const noexcept { return c_a_; }
  Complex c_b() const noexcept { return c_b_; }
  const InternalState& phi_a() const noexcept { return phi_a_; }
  const InternalState& phi_b() const noexcept { return phi_b_; }
  Complex amplitude(PathLabel p) const noexcept { return p == PathLabel::A ? c_a_ : c_b_; }
  const InternalState& internal(PathLabel p) const noexcept {
    return p == PathLabel::A ? phi_a_ : phi_b_;
  }
  std::size_t internal_dim() const noexcept { return phi_a_.dim(); }

  /// 2 x d matrix with rows c_a * phi_a and c_b * phi_b.
  ComplexMatrix coefficient_matrix() const {
    const auto d = static_cast<Eigen::Index>(internal_dim());
    ComplexMatrix m(2, d);
    m.row(0) = c_a_ * phi_a_.amplitudes().transpose();
    m.row(1) = c_b_ * phi_b_.amplitudes().transpose();
    return m;
  }

  /// State vector of length 2d in path-major order.
  ComplexVector ket() const {
    const auto d = static_cast<Eigen::Index>(internal_dim());
    ComplexVector psi(2 * d);
    psi.head(d) = c_a_ * phi_a_.amplitudes();
    psi.tail(d) = c_b_ * phi_b_.amplitudes();
    return psi;
  }

  /// Same physical state multiplied by exp(i theta).
  TwoPathState with_global_phase(double theta) const {
    const Complex w = std::polar(1.0, theta);
    return TwoPathState(w * c_a_, w * c_b_, phi_a_, phi_b_);
  }

 private:
  Complex c_a_;
  Complex c_b_;
  InternalState phi_a_;
  InternalState phi_b_;
};

/// <a|b>, conjugate-linear in the first argument.
inline Complex overlap(const InternalState& a, const InternalState& b) {
  if (a.dim() != b.dim()) {
    throw ValidationError("overlap of internal states with different dimensions (" +
                          std::to_string(a.dim()) + " vs " + std::to_string(b.dim()) + ")");
  }
  return a.amplitudes().dot(b.amplitudes());
}

/// gamma = <phi_a|phi_b>.
inline Complex overlap(const TwoPathState& s) { return overlap(s.phi_a(), s.phi_b()); }

struct SchmidtDecomposition {
  double lambda1 = 1.0;
  double lambda2 = 0.0;
  /// Columns u_1, u_2 (orthonormal path vectors).
  Eigen::Matrix2cd path_basis = Eigen::Matrix2cd::Identity();
  /// Columns v_1, v_2 (orthonormal internal vectors), so that the state is
  /// lambda1 u_1 (x) v_1 + lambda2 u_2 (x) v_2.
  ComplexMatrix internal_basis;

  /// Reassembled 2 x d coefficient matrix.
  ComplexMatrix reconstruct() const {
    return lambda1 * path_basis.col(0) * internal_basis.col(0).transpose() +
           lambda2 * path_basis.col(1) * internal_basis.col(1).transpose();
  }
};

/// Singular value decomposition of the 2 x d coefficient matrix.
inline SchmidtDecomposition schmidt_decompose(const TwoPathState& s) {
  const ComplexMatrix m = s.coefficient_matrix();
  Eigen::JacobiSVD<ComplexMatrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();  // descending
  SchmidtDecomposition sd;
  sd.lambda1 = sv(0);
  sd.lambda2 = sv(1);
  sd.path_basis = svd.matrixU();
  // M = U S V^dagger, so the internal factors are the conjugated columns of V.
  sd.internal_basis = svd.matrixV().conjugate();
  return sd;
}

/// C = 2 lambda1 lambda2.
inline double concurrence_pure(const SchmidtDecomposition& sd) {
  return std::clamp(2.0 * sd.lambda1 * sd.lambda2, 0.0, 1.0);
}

/// Which factor to keep in a partial trace.
enum class Subsystem { path, internal };

/// Hermitian, unit-trace operator on C^2 (x) C^d. Positivity is not
/// enforced at construction (linear-inversion estimates may violate it);
/// use is_physical() where it matters.
class DensityMatrix {
 public:
  explicit DensityMatrix(ComplexMatrix entries) : entries_(std::move(entries)) {
    const Eigen::Index n = entries_.rows();
    if (n != entries_.cols() || n < 4 || n % 2 != 0) {
      throw ValidationError("density matrix must be square with size 2d, d >= 2");
    }
    if (!entries_.allFinite()) throw ValidationError("density matrix has non-finite entries");
    const double herm = (entries_ - entries_.adjoint()).cwiseAbs().maxCoeff();
    if (herm > kDensityTolerance) {
      throw ValidationError("density matrix is not Hermitian (max deviation " +
                            std::to_string(herm) + ")");
    }
    const Complex tr = entries_.trace();
    if (std::abs(tr - 1.0) > kDensityTolerance) {
      throw ValidationError("density matrix trace is " + std::to_string(tr.real()) + ", expected 1");
    }
    // Remove rounding asymmetry so eigen solvers see an exactly Hermitian input.
    entries_ = (0.5 * (entries_ + entries_.adjoint())).eval();
  }

  const ComplexMatrix& matrix() const noexcept { return entries_; }
  std::size_t size() const noexcept { return static_cast<std::size_t>(entries_.rows()); }
  std::size_t internal_dim() const noexcept { return size() / 2; }
  Complex operator()(Eigen::Index r, Eigen::Index c) const { return entries_(r, c); }

  double trace() const { return entries_.trace().real(); }
  double purity() const { return (entries_ * entries_).trace().real(); }

  /// Ascending eigenvalues.
  Eigen::VectorXd eigenvalues() const {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(entries_, Eigen::EigenvaluesOnly);
    return es.eigenvalues();
  }
  double min_eigenvalue() const { return eigenvalues()(0); }
  bool is_physical(double tol = kPhysicalityTolerance) const { return min_eigenvalue() >= -tol; }

  /// The 2 x 2 grid of d x d path blocks: block(A, B) = <1_a| rho |1_b>.
  ComplexMatrix block(PathLabel row, PathLabel col) const {
    const auto d = static_cast<Eigen::Index>(internal_dim());
    const Eigen::Index r = row == PathLabel::A ? 0 : d;
    const Eigen::Index c = col == PathLabel::A ? 0 : d;
    return entries_.block(r, c, d, d);
  }

 private:
  ComplexMatrix entries_;
};

/// |Psi><Psi|.
inline DensityMatrix to_density_matrix(const TwoPathState& s) {
  const ComplexVector psi = s.ket();
  return DensityMatrix(psi * psi.adjoint());
}

/// Reduced matrix over the kept factor: 2 x 2 for path, d x d for internal.
inline ComplexMatrix partial_trace(const DensityMatrix& rho, Subsystem keep) {
  const auto d = static_cast<Eigen::Index>(rho.internal_dim());
  const ComplexMatrix& m = rho.matrix();
  if (keep == Subsystem::path) {
    ComplexMatrix r(2, 2);
    for (Eigen::Index p = 0; p < 2; ++p)
      for (Eigen::Index q = 0; q < 2; ++q) r(p, q) = m.block(p * d, q * d, d, d).trace();
    return r;
  }
  return m.topLeftCorner(d, d) + m.bottomRightCorner(d, d);
}

namespace detail {

/// W with rho = W W^dagger, built from the eigen-decomposition. Eigenvalues
/// in [-clamp_tol, numerical-zero] are treated as exactly zero; anything more
/// negative is rejected.
inline ComplexMatrix psd_factor(const ComplexMatrix& rho, double clamp_tol) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(rho);
  const Eigen::VectorXd& ev = es.eigenvalues();
  if (ev(0) < -clamp_tol) {
    throw ValidationError("matrix is not positive semidefinite (eigenvalue " +
                          std::to_string(ev(0)) + ")");
  }
  const double zero = 64.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, ev.maxCoeff());
  Eigen::VectorXd root(ev.size());
  for (Eigen::Index i = 0; i < ev.size(); ++i) root(i) = ev(i) > zero ? std::sqrt(ev(i)) : 0.0;
  return es.eigenvectors() * root.asDiagonal();
}

inline Eigen::Matrix4cd sigma_y_sigma_y() {
  Eigen::Matrix4cd yy = Eigen::Matrix4cd::Zero();
  // (sigma_y (x) sigma_y) = antidiagonal (-1, 1, 1, -1).
  yy(0, 3) = -1.0;
  yy(1, 2) = 1.0;
  yy(2, 1) = 1.0;
  yy(3, 0) = -1.0;
  return yy;
}

}  // namespace detail

/// Eigenvalues of rho below this are clamped to zero in the concurrence.
inline constexpr double kWoottersClampTolerance = 1e-9;

/// Wootters concurrence of a two-qubit density matrix,
/// C = max(0, sqrt(e1) - sqrt(e2) - sqrt(e3) - sqrt(e4)) with e_i the
/// eigenvalues of rho * (Y(x)Y) conj(rho) (Y(x)Y) in descending order.
///
/// With rho = W W^dagger, sqrt(e_i) are the singular values of
/// W^T (Y(x)Y) W, which avoids square roots of round-off-sized eigenvalues.
inline double wootters_concurrence(const DensityMatrix& rho) {
  if (rho.internal_dim() != 2) {
    throw ValidationError("Wootters concurrence requires d = 2, got d = " +
                          std::to_string(rho.internal_dim()));
  }
  const ComplexMatrix w = detail::psd_factor(rho.matrix(), kWoottersClampTolerance);
  const ComplexMatrix tau = w.transpose() * detail::sigma_y_sigma_y() * w;
  Eigen::JacobiSVD<ComplexMatrix> svd(tau);
  const Eigen::VectorXd s = svd.singularValues();  // descending
  const double c = s(0) - s(1) - s(2) - s(3);
  return std::clamp(c, 0.0, 1.0);
}

/// Uhlmann fidelity (Tr sqrt(sqrt(rho) sigma sqrt(rho)))^2, computed as the
/// squared nuclear norm of W_rho^dagger W_sigma.
inline double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma) {
  if (rho.size() != sigma.size()) throw ValidationError("fidelity of matrices with different sizes");
  const ComplexMatrix wr = detail::psd_factor(rho.matrix(), kPhysicalityTolerance);
  const ComplexMatrix ws = detail::psd_factor(sigma.matrix(), kPhysicalityTolerance);
  Eigen::JacobiSVD<ComplexMatrix> svd(wr.adjoint() * ws);
  const double root = svd.singularValues().sum();
  return std::min(1.0, root * root);
}

}  // namespace vdc
