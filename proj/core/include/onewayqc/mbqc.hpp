// Single-qubit measurements on multi-qubit registers (computational and
// equatorial bases), deterministic outcome sampling, postselection, and
// byproduct (Pauli-frame) bookkeeping for the measurement-based protocols.
#pragma once

#include "onewayqc/qstate.hpp"

#include <cstdint>
#include <random>
#include <stdexcept>

namespace onewayqc {

// Equatorial basis pair (|0> +/- e^{-i phi} |1>)/sqrt(2); outcome s=0 selects
// the "+" state.
struct EquatorialBasis {
  double phi = 0.0;
  StateVector state(int outcome) const;
};

struct PostselectionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Deterministic generator: mt19937_64 with an explicit 53-bit mapping to
// [0,1) so that sampled runs replay identically across platforms (the
// standard distributions do not guarantee that).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}
  double uniform();                // [0, 1)
  int bernoulli(double p_one);     // 1 with probability p_one

 private:
  std::mt19937_64 eng_;
};

// Stable per-stream seed derivation (splitmix64 of seed ^ stream).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

struct OutcomeMode {
  enum class Kind { Postselect, Sample };
  Kind kind = Kind::Postselect;
  int bit = 0;                 // Postselect: demanded outcome
  std::uint64_t seed = 0;      // Sample: private generator seed

  static OutcomeMode postselect(int bit);
  static OutcomeMode sample(std::uint64_t seed);
};

struct MeasurementRecord {
  int qubit = 0;               // protocol-level (logical) index
  bool computational = false;
  double phi = 0.0;            // equatorial phase when !computational
  int outcome = 0;
  double probability = 0.0;    // branch probability at measurement time
};

// Byproduct operator sigma_x^{x_power} sigma_z^{z_power} accumulated on an
// output qubit, in the computational frame.
struct PauliFrame {
  int x_power = 0;
  int z_power = 0;
};

enum class RotationStep { Alpha, Beta };

// Rotation bookkeeping: the alpha outcome contributes sigma_z, the beta
// outcome sigma_x.
PauliFrame frame_update(PauliFrame f, RotationStep step, int outcome);
// Applies sigma_z^{z_power} sigma_x^{x_power} (sigma_x first), undoing the
// byproduct on a single-qubit state.
StateVector frame_correct(const StateVector& s, const PauliFrame& f);
Gate1Q frame_gate(const PauliFrame& f);

// The adaptive third-rotation basis: phase (-1)^{s2} * beta.
EquatorialBasis adaptive_beta_basis(double beta, int s2);

struct MeasureResult {
  int outcome = 0;
  double probability = 0.0;
  StateVector state;           // remaining register, one qubit fewer
};

struct MeasureResultDM {
  int outcome = 0;
  double probability = 0.0;
  DensityMatrix state;
};

// Measure one qubit (1-based position) and remove it from the register.
// Postselecting a branch of probability < kProbFloor throws
// PostselectionError.  Registers must be normalized on entry.
MeasureResult measure_computational(const StateVector& s, int qubit,
                                    const OutcomeMode& mode);
MeasureResult measure_equatorial(const StateVector& s, int qubit,
                                 const EquatorialBasis& basis,
                                 const OutcomeMode& mode);
MeasureResultDM measure_computational(const DensityMatrix& r, int qubit,
                                      const OutcomeMode& mode);
MeasureResultDM measure_equatorial(const DensityMatrix& r, int qubit,
                                   const EquatorialBasis& basis,
                                   const OutcomeMode& mode);

}  // namespace onewayqc
