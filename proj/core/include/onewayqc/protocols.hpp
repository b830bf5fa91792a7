// The two measurement patterns implemented on the four-qubit cluster: the
// general single-qubit rotation (orderings a and b) and the equatorial
// C-NOT (ordering c), each with exact per-branch theory references.
#pragma once

#include "onewayqc/cluster.hpp"
#include "onewayqc/mbqc.hpp"

#include <optional>
#include <vector>

namespace onewayqc {

enum class CnotChoice { Identity, Hadamard };
std::string_view to_string(CnotChoice c);
CnotChoice cnot_choice_from_string(std::string_view s);

struct RotationJob {
  OrderingName ordering = OrderingName::a;
  double alpha = 0.0;
  double beta = 0.0;
  OutcomeMode q1 = OutcomeMode::postselect(0);
  OutcomeMode q2 = OutcomeMode::postselect(0);
  OutcomeMode q3 = OutcomeMode::postselect(0);

  // Postselect every outcome: s1 fixes the input state (0 -> |+>, 1 -> |->).
  static RotationJob branch(OrderingName ordering, double alpha, double beta,
                            int s1, int s2, int s3);
  // Sample all three outcomes from per-step generators derived from `seed`.
  static RotationJob sampled(OrderingName ordering, double alpha, double beta,
                             std::uint64_t seed);
};

struct CnotJob {
  CnotChoice o_choice = CnotChoice::Hadamard;
  double alpha = 0.0;
  OutcomeMode q1 = OutcomeMode::postselect(0);
  OutcomeMode q4 = OutcomeMode::postselect(0);

  static CnotJob branch(CnotChoice o_choice, double alpha, int s1, int s4);
  static CnotJob sampled(CnotChoice o_choice, double alpha, std::uint64_t seed);
};

enum class ProtocolKind { Rotation, Cnot };

struct ProtocolResult {
  ProtocolKind kind = ProtocolKind::Rotation;
  OrderingName ordering = OrderingName::a;
  double alpha = 0.0;
  double beta = 0.0;                           // rotation only
  CnotChoice o_choice = CnotChoice::Identity;  // C-NOT only

  std::vector<MeasurementRecord> records;      // in measurement order
  double branch_probability = 1.0;             // product of step probabilities
  std::vector<PauliFrame> frames;              // per output qubit, computational frame

  DensityMatrix output;                        // lab-frame output register
  std::optional<StateVector> output_pure;      // set when the run stayed pure
  StateVector theory;                          // lab-frame per-branch reference
  StateVector chi_in;                          // rotation input state
  double fidelity = 0.0;                       // <theory| output |theory>
};

// sigma_z^{s3} sigma_x^{s2} [sigma_z if ordering b] H R_x(beta) R_z(alpha) |chi>.
StateVector rotation_theory(OrderingName ordering, double alpha, double beta,
                            int s2, int s3, const StateVector& chi_in);
// (sigma_z x sigma_z)^{s4} (sigma_x x 1) CNOT (O sigma_z^{s1} |+>) x (R_z(alpha) |+>),
// control first; O is 1 or H per the choice.
StateVector cnot_theory(CnotChoice o_choice, double alpha, int s1, int s4);

ProtocolResult run_rotation(const RotationJob& job, const StateVector& cluster);
ProtocolResult run_rotation(const RotationJob& job, const DensityMatrix& cluster);
ProtocolResult run_cnot(const CnotJob& job, const StateVector& cluster);
ProtocolResult run_cnot(const CnotJob& job, const DensityMatrix& cluster);

// Condition the two-qubit C-NOT output on a computational measurement of the
// control; probability is the weight of that branch.
struct ConditionedTarget {
  int control_outcome = 0;
  double probability = 0.0;
  DensityMatrix target;
};
ConditionedTarget condition_on_control(const ProtocolResult& result,
                                       int control_outcome);

// The per-branch theory target conditioned on a control outcome; nullopt when
// the theory state assigns that outcome zero probability.
std::optional<StateVector> theory_target_for_control(
    const ProtocolResult& result, int control_outcome);

}  // namespace onewayqc
