#include "onewayqc/mbqc.hpp"

#include <cmath>
#include <string>
#include <utility>

namespace onewayqc {

namespace {

// Insert bit b at 1-based position q of an (n-1)-qubit index, producing the
// n-qubit index it came from.
std::size_t insert_bit(std::size_t i, int q, int b, int n) {
  const int low_bits = n - q;
  const std::size_t low_mask = (std::size_t{1} << low_bits) - 1;
  const std::size_t high = i >> low_bits;
  const std::size_t low = i & low_mask;
  return (high << (low_bits + 1)) |
         (static_cast<std::size_t>(b) << low_bits) | low;
}

void check_measurable(int n, int qubit) {
  if (n < 2) {
    throw std::invalid_argument(
        "cannot remove the last qubit of a register; registers hold 1..4 qubits");
  }
  if (qubit < 1 || qubit > n) {
    throw std::invalid_argument("measured qubit outside the register");
  }
}

// Bra coefficients <b| = c0 <0| + c1 <1| of the projecting basis state.
struct Bra {
  Complex c0, c1;
};

Bra computational_bra(int s) {
  return s == 0 ? Bra{Complex(1), Complex(0)} : Bra{Complex(0), Complex(1)};
}

Bra equatorial_bra(double phi, int s) {
  const double r = 1.0 / std::sqrt(2.0);
  return {Complex(r), (s == 0 ? 1.0 : -1.0) * std::polar(r, phi)};
}

// Project <bra| onto the given qubit: returns the branch probability and the
// collapsed, unnormalized register.
std::pair<double, std::vector<Complex>> collapse(const StateVector& s, int qubit,
                                                 const Bra& bra) {
  const int n = s.n_qubits();
  std::vector<Complex> out(s.dim() / 2);
  double p = 0;
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = bra.c0 * s.amp(insert_bit(i, qubit, 0, n)) +
             bra.c1 * s.amp(insert_bit(i, qubit, 1, n));
    p += std::norm(out[i]);
  }
  return {p, std::move(out)};
}

std::pair<double, std::vector<Complex>> collapse_dm(const DensityMatrix& r,
                                                    int qubit, const Bra& bra) {
  const int n = r.n_qubits();
  const std::size_t d = r.dim() / 2;
  std::vector<Complex> out(d * d);
  double p = 0;
  const Complex c[2] = {bra.c0, bra.c1};
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      Complex s(0);
      for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) {
          s += c[a] * r.at(insert_bit(i, qubit, a, n), insert_bit(j, qubit, b, n)) *
               std::conj(c[b]);
        }
      }
      out[i * d + j] = s;
    }
    p += out[i * d + i].real();
  }
  return {p, std::move(out)};
}

Bra bra_for(bool computational, double phi, int s) {
  return computational ? computational_bra(s) : equatorial_bra(phi, s);
}

int pick_outcome(const OutcomeMode& mode, double p0) {
  if (mode.kind == OutcomeMode::Kind::Postselect) return mode.bit;
  Rng rng(mode.seed);
  return rng.uniform() < p0 ? 0 : 1;
}

MeasureResult measure_sv(const StateVector& s, int qubit, bool computational,
                         double phi, const OutcomeMode& mode) {
  check_measurable(s.n_qubits(), qubit);
  double p0 = 0;
  if (mode.kind == OutcomeMode::Kind::Sample) {
    p0 = collapse(s, qubit, bra_for(computational, phi, 0)).first;
  }
  const int outcome = pick_outcome(mode, p0);
  auto [p, amps] = collapse(s, qubit, bra_for(computational, phi, outcome));
  if (p < kProbFloor) {
    throw PostselectionError("postselected branch has probability " +
                             std::to_string(p));
  }
  const double scale = 1.0 / std::sqrt(p);
  for (Complex& c : amps) c *= scale;
  return {outcome, p,
          StateVector::from_amplitudes(s.n_qubits() - 1, std::move(amps))};
}

MeasureResultDM measure_dm(const DensityMatrix& r, int qubit, bool computational,
                           double phi, const OutcomeMode& mode) {
  check_measurable(r.n_qubits(), qubit);
  double p0 = 0;
  if (mode.kind == OutcomeMode::Kind::Sample) {
    p0 = collapse_dm(r, qubit, bra_for(computational, phi, 0)).first;
  }
  const int outcome = pick_outcome(mode, p0);
  auto [p, elems] = collapse_dm(r, qubit, bra_for(computational, phi, outcome));
  if (p < kProbFloor) {
    throw PostselectionError("postselected branch has probability " +
                             std::to_string(p));
  }
  for (Complex& c : elems) c /= p;
  return {outcome, p,
          DensityMatrix::from_elements(r.n_qubits() - 1, std::move(elems))};
}

}  // namespace

StateVector EquatorialBasis::state(int outcome) const {
  return equatorial_state(phi, outcome);
}

double Rng::uniform() {
  return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
}

int Rng::bernoulli(double p_one) { return uniform() < p_one ? 1 : 0; }

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed ^ (stream + 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

OutcomeMode OutcomeMode::postselect(int bit) {
  if (bit != 0 && bit != 1) {
    throw std::invalid_argument("postselected outcome must be 0 or 1");
  }
  OutcomeMode m;
  m.kind = Kind::Postselect;
  m.bit = bit;
  return m;
}

OutcomeMode OutcomeMode::sample(std::uint64_t seed) {
  OutcomeMode m;
  m.kind = Kind::Sample;
  m.seed = seed;
  return m;
}

PauliFrame frame_update(PauliFrame f, RotationStep step, int outcome) {
  if (outcome != 0 && outcome != 1) {
    throw std::invalid_argument("measurement outcome must be 0 or 1");
  }
  switch (step) {
    case RotationStep::Alpha: f.z_power = (f.z_power + outcome) % 2; break;
    case RotationStep::Beta: f.x_power = (f.x_power + outcome) % 2; break;
  }
  return f;
}

Gate1Q frame_gate(const PauliFrame& f) {
  Gate1Q g = gates::identity();
  if (f.x_power % 2) g = gates::pauli_x() * g;
  if (f.z_power % 2) g = gates::pauli_z() * g;
  return g;
}

StateVector frame_correct(const StateVector& s, const PauliFrame& f) {
  if (s.n_qubits() != 1) {
    throw std::invalid_argument("frame_correct expects a single qubit");
  }
  return apply_1q(s, frame_gate(f), 1);
}

EquatorialBasis adaptive_beta_basis(double beta, int s2) {
  if (s2 != 0 && s2 != 1) {
    throw std::invalid_argument("measurement outcome must be 0 or 1");
  }
  return EquatorialBasis{(s2 == 0 ? 1.0 : -1.0) * beta};
}

MeasureResult measure_computational(const StateVector& s, int qubit,
                                    const OutcomeMode& mode) {
  return measure_sv(s, qubit, true, 0.0, mode);
}

MeasureResult measure_equatorial(const StateVector& s, int qubit,
                                 const EquatorialBasis& basis,
                                 const OutcomeMode& mode) {
  return measure_sv(s, qubit, false, basis.phi, mode);
}

MeasureResultDM measure_computational(const DensityMatrix& r, int qubit,
                                      const OutcomeMode& mode) {
  return measure_dm(r, qubit, true, 0.0, mode);
}

MeasureResultDM measure_equatorial(const DensityMatrix& r, int qubit,
                                   const EquatorialBasis& basis,
                                   const OutcomeMode& mode) {
  return measure_dm(r, qubit, false, basis.phi, mode);
}

}  // namespace onewayqc
