// Dense complex-vector kernel for registers of 1..4 qubits: state vectors,
// density matrices, single-qubit gates, the controlled-phase gate, inner
// products, fidelities and partial traces.  Qubit positions are 1-based and
// qubit 1 is the most significant bit of the basis-state index.
#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <vector>

namespace onewayqc {

using Complex = std::complex<double>;

inline constexpr double kNormTol = 1e-10;    // normalization / unitarity checks
inline constexpr double kAlgebraTol = 1e-12; // exact algebraic identities
inline constexpr double kProbFloor = 1e-12;  // smallest postselectable branch weight

inline constexpr int kMinQubits = 1;
inline constexpr int kMaxQubits = 4;

// 2x2 complex matrix acting on a single qubit, row-major.
class Gate1Q {
 public:
  Gate1Q();  // identity
  Gate1Q(Complex a00, Complex a01, Complex a10, Complex a11);

  Complex at(int row, int col) const;
  Gate1Q adjoint() const;
  bool is_unitary(double tol = kNormTol) const;

  // Matrix product: (g * h) acts as h first, then g.
  friend Gate1Q operator*(const Gate1Q& g, const Gate1Q& h);

 private:
  std::array<Complex, 4> a_;
};

namespace gates {
Gate1Q identity();
Gate1Q pauli_x();
Gate1Q pauli_y();
Gate1Q pauli_z();
Gate1Q hadamard();
// R_z(a) = diag(e^{-ia/2}, e^{+ia/2});  R_x(b) = cos(b/2) I - i sin(b/2) X.
Gate1Q rz(double alpha);
Gate1Q rx(double beta);
}  // namespace gates

// Pure state of n qubits (n in 1..4), amplitudes indexed with qubit 1 as the
// most significant bit: |q1 q2 ... qn>.
class StateVector {
 public:
  explicit StateVector(int n_qubits = 1);  // |0...0>
  static StateVector from_amplitudes(int n_qubits, std::vector<Complex> amps);
  static StateVector basis_state(int n_qubits, std::size_t index);

  int n_qubits() const { return n_; }
  std::size_t dim() const { return a_.size(); }
  Complex amp(std::size_t index) const;
  const std::vector<Complex>& amplitudes() const { return a_; }

  double norm() const;
  StateVector normalized() const;

 private:
  int n_;
  std::vector<Complex> a_;
};

// Convenience 1-qubit builders.
StateVector computational_state(int bit);
StateVector plus_state();
StateVector minus_state();
// (|0> + (-1)^s e^{-i phi} |1>)/sqrt(2): the equatorial pair; s=0 is "+".
StateVector equatorial_state(double phi, int s);

// Mixed state of n qubits, row-major dense matrix.
class DensityMatrix {
 public:
  explicit DensityMatrix(int n_qubits = 1);  // |0...0><0...0|
  static DensityMatrix from_pure(const StateVector& psi);
  static DensityMatrix from_elements(int n_qubits, std::vector<Complex> elems);
  static DensityMatrix maximally_mixed(int n_qubits);

  int n_qubits() const { return n_; }
  std::size_t dim() const { return dim_; }
  Complex at(std::size_t row, std::size_t col) const;
  const std::vector<Complex>& elements() const { return m_; }

  double trace_real() const;
  double purity() const;  // tr(rho^2)
  bool is_hermitian(double tol = kNormTol) const;
  // Smallest eigenvalue of the (Hermitian) matrix; >= -tol certifies positivity.
  double min_eigenvalue() const;

 private:
  int n_;
  std::size_t dim_;
  std::vector<Complex> m_;
};

// w1 * a + w2 * b; weights need not sum to one (callers enforce physicality).
DensityMatrix convex_mix(double w1, const DensityMatrix& a, double w2,
                         const DensityMatrix& b);

StateVector apply_1q(const StateVector& s, const Gate1Q& g, int position);
DensityMatrix apply_1q(const DensityMatrix& r, const Gate1Q& g, int position);

// Controlled-phase: |11> picks up -1.  Symmetric in its arguments.
StateVector apply_cp(const StateVector& s, int control, int target);
DensityMatrix apply_cp(const DensityMatrix& r, int control, int target);

// Controlled-NOT with explicit control/target (not symmetric).
StateVector apply_cnot(const StateVector& s, int control, int target);

StateVector tensor(const StateVector& a, const StateVector& b);

Complex inner_product(const StateVector& a, const StateVector& b);  // <a|b>
double fidelity(const StateVector& a, const StateVector& b);        // |<a|b>|^2
double fidelity_pure(const StateVector& psi, const DensityMatrix& rho);  // <psi|rho|psi>

// Trace out every qubit not listed in `keep` (1-based positions, strictly
// increasing).  The kept qubits retain their relative order.
DensityMatrix partial_trace(const DensityMatrix& r, const std::vector<int>& keep);
DensityMatrix partial_trace(const StateVector& s, const std::vector<int>& keep);

}  // namespace onewayqc
