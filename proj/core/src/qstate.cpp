#include "onewayqc/qstate.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace onewayqc {

namespace {

void check_arity(int n) {
  if (n < kMinQubits || n > kMaxQubits) {
    throw std::invalid_argument("qubit count " + std::to_string(n) +
                                " outside supported range 1..4");
  }
}

void check_position(int n, int position) {
  if (position < 1 || position > n) {
    throw std::invalid_argument("qubit position " + std::to_string(position) +
                                " outside register of " + std::to_string(n) +
                                " qubits");
  }
}

std::size_t dim_of(int n) { return std::size_t{1} << n; }

// Bit mask selecting the given 1-based position (qubit 1 = MSB).
std::size_t bit_of(int n, int position) {
  return std::size_t{1} << (n - position);
}

}  // namespace

Gate1Q::Gate1Q() : a_{Complex(1), Complex(0), Complex(0), Complex(1)} {}

Gate1Q::Gate1Q(Complex a00, Complex a01, Complex a10, Complex a11)
    : a_{a00, a01, a10, a11} {}

Complex Gate1Q::at(int row, int col) const {
  if (row < 0 || row > 1 || col < 0 || col > 1) {
    throw std::invalid_argument("Gate1Q index outside 2x2");
  }
  return a_[static_cast<std::size_t>(row) * 2 + static_cast<std::size_t>(col)];
}

Gate1Q Gate1Q::adjoint() const {
  return Gate1Q(std::conj(a_[0]), std::conj(a_[2]), std::conj(a_[1]),
                std::conj(a_[3]));
}

bool Gate1Q::is_unitary(double tol) const {
  const Gate1Q p = *this * adjoint();
  return std::abs(p.a_[0] - Complex(1)) < tol && std::abs(p.a_[1]) < tol &&
         std::abs(p.a_[2]) < tol && std::abs(p.a_[3] - Complex(1)) < tol;
}

Gate1Q operator*(const Gate1Q& g, const Gate1Q& h) {
  return Gate1Q(g.a_[0] * h.a_[0] + g.a_[1] * h.a_[2],
                g.a_[0] * h.a_[1] + g.a_[1] * h.a_[3],
                g.a_[2] * h.a_[0] + g.a_[3] * h.a_[2],
                g.a_[2] * h.a_[1] + g.a_[3] * h.a_[3]);
}

namespace gates {

Gate1Q identity() { return Gate1Q(); }
Gate1Q pauli_x() { return Gate1Q(0, 1, 1, 0); }
Gate1Q pauli_y() { return Gate1Q(0, Complex(0, -1), Complex(0, 1), 0); }
Gate1Q pauli_z() { return Gate1Q(1, 0, 0, -1); }

Gate1Q hadamard() {
  const double s = 1.0 / std::sqrt(2.0);
  return Gate1Q(s, s, s, -s);
}

Gate1Q rz(double alpha) {
  return Gate1Q(std::polar(1.0, -alpha / 2), 0, 0, std::polar(1.0, alpha / 2));
}

Gate1Q rx(double beta) {
  const double c = std::cos(beta / 2);
  const Complex ms(0, -std::sin(beta / 2));
  return Gate1Q(c, ms, ms, c);
}

}  // namespace gates

StateVector::StateVector(int n_qubits) : n_(n_qubits) {
  check_arity(n_);
  a_.assign(dim_of(n_), Complex(0));
  a_[0] = Complex(1);
}

StateVector StateVector::from_amplitudes(int n_qubits,
                                         std::vector<Complex> amps) {
  check_arity(n_qubits);
  if (amps.size() != dim_of(n_qubits)) {
    throw std::invalid_argument(
        "amplitude count " + std::to_string(amps.size()) +
        " does not match 2^" + std::to_string(n_qubits));
  }
  StateVector s(n_qubits);
  s.a_ = std::move(amps);
  return s;
}

StateVector StateVector::basis_state(int n_qubits, std::size_t index) {
  check_arity(n_qubits);
  if (index >= dim_of(n_qubits)) {
    throw std::invalid_argument("basis index out of range");
  }
  StateVector s(n_qubits);
  s.a_[0] = Complex(0);
  s.a_[index] = Complex(1);
  return s;
}

Complex StateVector::amp(std::size_t index) const {
  if (index >= a_.size()) {
    throw std::invalid_argument("amplitude index out of range");
  }
  return a_[index];
}

double StateVector::norm() const {
  double s = 0;
  for (const Complex& c : a_) s += std::norm(c);
  return std::sqrt(s);
}

StateVector StateVector::normalized() const {
  const double nn = norm();
  if (nn < kProbFloor) {
    throw std::invalid_argument("cannot normalize a zero state");
  }
  std::vector<Complex> out(a_);
  for (Complex& c : out) c /= nn;
  return from_amplitudes(n_, std::move(out));
}

StateVector computational_state(int bit) {
  if (bit != 0 && bit != 1) {
    throw std::invalid_argument("computational bit must be 0 or 1");
  }
  return StateVector::basis_state(1, static_cast<std::size_t>(bit));
}

StateVector plus_state() { return equatorial_state(0.0, 0); }
StateVector minus_state() { return equatorial_state(0.0, 1); }

StateVector equatorial_state(double phi, int s) {
  if (s != 0 && s != 1) {
    throw std::invalid_argument("equatorial outcome must be 0 or 1");
  }
  const double r = 1.0 / std::sqrt(2.0);
  const Complex a1 = (s == 0 ? 1.0 : -1.0) * std::polar(r, -phi);
  return StateVector::from_amplitudes(1, {Complex(r), a1});
}

DensityMatrix::DensityMatrix(int n_qubits) : n_(n_qubits), dim_(dim_of(n_qubits)) {
  check_arity(n_);
  m_.assign(dim_ * dim_, Complex(0));
  m_[0] = Complex(1);
}

DensityMatrix DensityMatrix::from_pure(const StateVector& psi) {
  DensityMatrix r(psi.n_qubits());
  const auto& a = psi.amplitudes();
  for (std::size_t i = 0; i < r.dim_; ++i) {
    for (std::size_t j = 0; j < r.dim_; ++j) {
      r.m_[i * r.dim_ + j] = a[i] * std::conj(a[j]);
    }
  }
  return r;
}

DensityMatrix DensityMatrix::from_elements(int n_qubits,
                                           std::vector<Complex> elems) {
  check_arity(n_qubits);
  const std::size_t d = dim_of(n_qubits);
  if (elems.size() != d * d) {
    throw std::invalid_argument("element count does not match 4^n");
  }
  DensityMatrix r(n_qubits);
  r.m_ = std::move(elems);
  return r;
}

DensityMatrix DensityMatrix::maximally_mixed(int n_qubits) {
  check_arity(n_qubits);
  const std::size_t d = dim_of(n_qubits);
  DensityMatrix r(n_qubits);
  r.m_.assign(d * d, Complex(0));
  for (std::size_t i = 0; i < d; ++i) r.m_[i * d + i] = Complex(1.0 / d);
  return r;
}

Complex DensityMatrix::at(std::size_t row, std::size_t col) const {
  if (row >= dim_ || col >= dim_) {
    throw std::invalid_argument("density matrix index out of range");
  }
  return m_[row * dim_ + col];
}

double DensityMatrix::trace_real() const {
  double t = 0;
  for (std::size_t i = 0; i < dim_; ++i) t += m_[i * dim_ + i].real();
  return t;
}

double DensityMatrix::purity() const {
  // tr(rho^2) = sum_{ij} rho_ij rho_ji = sum_{ij} |rho_ij|^2 for Hermitian rho.
  double t = 0;
  for (const Complex& c : m_) t += std::norm(c);
  return t;
}

bool DensityMatrix::is_hermitian(double tol) const {
  for (std::size_t i = 0; i < dim_; ++i) {
    for (std::size_t j = i; j < dim_; ++j) {
      if (std::abs(m_[i * dim_ + j] - std::conj(m_[j * dim_ + i])) > tol) {
        return false;
      }
    }
  }
  return true;
}

namespace {

// Cyclic Jacobi eigensolver for a dense real symmetric matrix, smallest
// eigenvalue only.  Sizes here are at most 32x32.
double jacobi_min_eigenvalue(std::vector<double> a, std::size_t n) {
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) off += a[p * n + q] * a[p * n + q];
    }
    if (off < 1e-26) break;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a[p * n + q];
        if (std::abs(apq) < 1e-300) continue;
        const double tau = (a[q * n + q] - a[p * n + p]) / (2 * apq);
        const double t = (tau >= 0 ? 1.0 : -1.0) /
                         (std::abs(tau) + std::sqrt(1 + tau * tau));
        const double c = 1.0 / std::sqrt(1 + t * t);
        const double s = t * c;
        const double app = a[p * n + p];
        const double aqq = a[q * n + q];
        a[p * n + p] = app - t * apq;
        a[q * n + q] = aqq + t * apq;
        a[p * n + q] = 0;
        a[q * n + p] = 0;
        for (std::size_t k = 0; k < n; ++k) {
          if (k == p || k == q) continue;
          const double akp = a[k * n + p];
          const double akq = a[k * n + q];
          a[k * n + p] = c * akp - s * akq;
          a[p * n + k] = a[k * n + p];
          a[k * n + q] = s * akp + c * akq;
          a[q * n + k] = a[k * n + q];
        }
      }
    }
  }
  double mn = a[0];
  for (std::size_t i = 1; i < n; ++i) mn = std::min(mn, a[i * n + i]);
  return mn;
}

}  // namespace

double DensityMatrix::min_eigenvalue() const {
  // Embed the Hermitian matrix H = X + iY as the real symmetric
  // [[X, -Y], [Y, X]]; its spectrum is that of H with doubled multiplicity.
  const std::size_t d = dim_;
  const std::size_t n = 2 * d;
  std::vector<double> s(n * n, 0.0);
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      const Complex h = 0.5 * (m_[i * d + j] + std::conj(m_[j * d + i]));
      s[i * n + j] = h.real();
      s[i * n + (j + d)] = -h.imag();
      s[(i + d) * n + j] = h.imag();
      s[(i + d) * n + (j + d)] = h.real();
    }
  }
  return jacobi_min_eigenvalue(std::move(s), n);
}

DensityMatrix convex_mix(double w1, const DensityMatrix& a, double w2,
                         const DensityMatrix& b) {
  if (a.n_qubits() != b.n_qubits()) {
    throw std::invalid_argument("convex_mix requires equal qubit counts");
  }
  std::vector<Complex> out(a.elements());
  const auto& eb = b.elements();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = w1 * out[i] + w2 * eb[i];
  return DensityMatrix::from_elements(a.n_qubits(), std::move(out));
}

StateVector apply_1q(const StateVector& s, const Gate1Q& g, int position) {
  check_position(s.n_qubits(), position);
  const std::size_t bit = bit_of(s.n_qubits(), position);
  std::vector<Complex> out(s.amplitudes());
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (i & bit) continue;
    const Complex a0 = out[i];
    const Complex a1 = out[i | bit];
    out[i] = g.at(0, 0) * a0 + g.at(0, 1) * a1;
    out[i | bit] = g.at(1, 0) * a0 + g.at(1, 1) * a1;
  }
  return StateVector::from_amplitudes(s.n_qubits(), std::move(out));
}

DensityMatrix apply_1q(const DensityMatrix& r, const Gate1Q& g, int position) {
  check_position(r.n_qubits(), position);
  const std::size_t d = r.dim();
  const std::size_t bit = bit_of(r.n_qubits(), position);
  std::vector<Complex> m(r.elements());
  // Row pass: m <- (U x I...) m.
  for (std::size_t j = 0; j < d; ++j) {
    for (std::size_t i = 0; i < d; ++i) {
      if (i & bit) continue;
      const Complex a0 = m[i * d + j];
      const Complex a1 = m[(i | bit) * d + j];
      m[i * d + j] = g.at(0, 0) * a0 + g.at(0, 1) * a1;
      m[(i | bit) * d + j] = g.at(1, 0) * a0 + g.at(1, 1) * a1;
    }
  }
  // Column pass: m <- m (U x I...)^dagger.
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      if (j & bit) continue;
      const Complex a0 = m[i * d + j];
      const Complex a1 = m[i * d + (j | bit)];
      m[i * d + j] = a0 * std::conj(g.at(0, 0)) + a1 * std::conj(g.at(0, 1));
      m[i * d + (j | bit)] =
          a0 * std::conj(g.at(1, 0)) + a1 * std::conj(g.at(1, 1));
    }
  }
  return DensityMatrix::from_elements(r.n_qubits(), std::move(m));
}

namespace {

void check_pair(int n, int control, int target) {
  check_position(n, control);
  check_position(n, target);
  if (control == target) {
    throw std::invalid_argument("control and target must differ");
  }
}

}  // namespace

StateVector apply_cp(const StateVector& s, int control, int target) {
  check_pair(s.n_qubits(), control, target);
  const std::size_t cb = bit_of(s.n_qubits(), control);
  const std::size_t tb = bit_of(s.n_qubits(), target);
  std::vector<Complex> out(s.amplitudes());
  for (std::size_t i = 0; i < out.size(); ++i) {
    if ((i & cb) && (i & tb)) out[i] = -out[i];
  }
  return StateVector::from_amplitudes(s.n_qubits(), std::move(out));
}

DensityMatrix apply_cp(const DensityMatrix& r, int control, int target) {
  check_pair(r.n_qubits(), control, target);
  const std::size_t d = r.dim();
  const std::size_t cb = bit_of(r.n_qubits(), control);
  const std::size_t tb = bit_of(r.n_qubits(), target);
  std::vector<Complex> m(r.elements());
  for (std::size_t i = 0; i < d; ++i) {
    const bool ri = (i & cb) && (i & tb);
    for (std::size_t j = 0; j < d; ++j) {
      const bool rj = (j & cb) && (j & tb);
      if (ri != rj) m[i * d + j] = -m[i * d + j];
    }
  }
  return DensityMatrix::from_elements(r.n_qubits(), std::move(m));
}

StateVector apply_cnot(const StateVector& s, int control, int target) {
  check_pair(s.n_qubits(), control, target);
  const std::size_t cb = bit_of(s.n_qubits(), control);
  const std::size_t tb = bit_of(s.n_qubits(), target);
  std::vector<Complex> out(s.amplitudes());
  for (std::size_t i = 0; i < out.size(); ++i) {
    if ((i & cb) && !(i & tb)) std::swap(out[i], out[i | tb]);
  }
  return StateVector::from_amplitudes(s.n_qubits(), std::move(out));
}

StateVector tensor(const StateVector& a, const StateVector& b) {
  const int n = a.n_qubits() + b.n_qubits();
  check_arity(n);
  std::vector<Complex> out(dim_of(n));
  const std::size_t db = b.dim();
  for (std::size_t i = 0; i < a.dim(); ++i) {
    for (std::size_t j = 0; j < db; ++j) {
      out[i * db + j] = a.amp(i) * b.amp(j);
    }
  }
  return StateVector::from_amplitudes(n, std::move(out));
}

Complex inner_product(const StateVector& a, const StateVector& b) {
  if (a.n_qubits() != b.n_qubits()) {
    throw std::invalid_argument("inner product requires equal qubit counts");
  }
  Complex s(0);
  for (std::size_t i = 0; i < a.dim(); ++i) {
    s += std::conj(a.amp(i)) * b.amp(i);
  }
  return s;
}

double fidelity(const StateVector& a, const StateVector& b) {
  return std::norm(inner_product(a, b));
}

double fidelity_pure(const StateVector& psi, const DensityMatrix& rho) {
  if (psi.n_qubits() != rho.n_qubits()) {
    throw std::invalid_argument("fidelity requires equal qubit counts");
  }
  const std::size_t d = rho.dim();
  Complex s(0);
  for (std::size_t i = 0; i < d; ++i) {
    Complex row(0);
    for (std::size_t j = 0; j < d; ++j) row += rho.at(i, j) * psi.amp(j);
    s += std::conj(psi.amp(i)) * row;
  }
  return s.real();
}

DensityMatrix partial_trace(const DensityMatrix& r, const std::vector<int>& keep) {
  const int n = r.n_qubits();
  if (keep.empty()) {
    throw std::invalid_argument("partial_trace requires a nonempty keep list");
  }
  for (std::size_t i = 0; i < keep.size(); ++i) {
    check_position(n, keep[i]);
    if (i > 0 && keep[i] <= keep[i - 1]) {
      throw std::invalid_argument("keep list must be strictly increasing");
    }
  }
  const int k = static_cast<int>(keep.size());
  std::vector<int> traced;
  for (int q = 1; q <= n; ++q) {
    bool kept = false;
    for (int kq : keep) kept = kept || (kq == q);
    if (!kept) traced.push_back(q);
  }
  const std::size_t dk = dim_of(k);
  const std::size_t dt = std::size_t{1} << traced.size();
  // expand(io, t): scatter the bits of the kept index and the traced index
  // into their full-register positions.
  auto expand = [&](std::size_t io, std::size_t t) {
    std::size_t full = 0;
    for (int b = 0; b < k; ++b) {
      const std::size_t bitval = (io >> (k - 1 - b)) & 1u;
      full |= bitval << (n - keep[static_cast<std::size_t>(b)]);
    }
    for (std::size_t b = 0; b < traced.size(); ++b) {
      const std::size_t bitval = (t >> (traced.size() - 1 - b)) & 1u;
      full |= bitval << (n - traced[b]);
    }
    return full;
  };
  std::vector<Complex> out(dk * dk, Complex(0));
  for (std::size_t io = 0; io < dk; ++io) {
    for (std::size_t jo = 0; jo < dk; ++jo) {
      Complex s(0);
      for (std::size_t t = 0; t < dt; ++t) {
        s += r.at(expand(io, t), expand(jo, t));
      }
      out[io * dk + jo] = s;
    }
  }
  return DensityMatrix::from_elements(k, std::move(out));
}

DensityMatrix partial_trace(const StateVector& s, const std::vector<int>& keep) {
  return partial_trace(DensityMatrix::from_pure(s), keep);
}

}  // namespace onewayqc
