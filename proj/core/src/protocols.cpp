#include "onewayqc/protocols.hpp"

#include <stdexcept>
#include <type_traits>

namespace onewayqc {

namespace {

void check_rotation_ordering(OrderingName name) {
  if (name == OrderingName::c) {
    throw std::invalid_argument(
        "rotations run on orderings a and b; ordering c is the C-NOT layout");
  }
}

void check_bit(int b) {
  if (b != 0 && b != 1) {
    throw std::invalid_argument("measurement outcome must be 0 or 1");
  }
}

MeasurementRecord make_record(int logical, bool computational, double phi,
                              int outcome, double probability) {
  MeasurementRecord rec;
  rec.qubit = logical;
  rec.computational = computational;
  rec.phi = phi;
  rec.outcome = outcome;
  rec.probability = probability;
  return rec;
}

template <typename State>
constexpr bool is_pure_v = std::is_same_v<State, StateVector>;

template <typename State>
void pack_output(ProtocolResult& out, const State& lab) {
  if constexpr (is_pure_v<State>) {
    out.output = DensityMatrix::from_pure(lab);
    out.output_pure = lab;
  } else {
    out.output = lab;
    out.output_pure.reset();
  }
}

template <typename State>
ProtocolResult run_rotation_impl(const RotationJob& job, const State& cluster) {
  check_rotation_ordering(job.ordering);
  if (cluster.n_qubits() != 4) {
    throw std::invalid_argument("the cluster register holds four qubits");
  }
  const Ordering& ord = ordering(job.ordering);
  const State logical = to_logical_frame(cluster, ord);

  // Step I: computational measurement of logical qubit 1 prepares the input
  // |+> (s1 = 0) or |-> (s1 = 1) on logical qubit 2.
  const auto m1 = measure_computational(logical, 1, job.q1);
  // Step II: equatorial alpha on the (shifted) logical qubit 2.
  const auto m2 =
      measure_equatorial(m1.state, 1, EquatorialBasis{job.alpha}, job.q2);
  // Step III: equatorial beta, sign adapted to the alpha outcome.
  const auto basis3 = adaptive_beta_basis(job.beta, m2.outcome);
  const auto m3 = measure_equatorial(m2.state, 1, basis3, job.q3);

  // The survivor is logical qubit 4; its ordering unitary turns the
  // computational-frame output into the lab-frame state.
  const auto lab = apply_1q(m3.state, ord.local_unitaries[3], 1);

  ProtocolResult out;
  out.kind = ProtocolKind::Rotation;
  out.ordering = job.ordering;
  out.alpha = job.alpha;
  out.beta = job.beta;
  out.records = {
      make_record(1, true, 0.0, m1.outcome, m1.probability),
      make_record(2, false, job.alpha, m2.outcome, m2.probability),
      make_record(3, false, basis3.phi, m3.outcome, m3.probability),
  };
  out.branch_probability = m1.probability * m2.probability * m3.probability;
  PauliFrame frame;
  frame = frame_update(frame, RotationStep::Alpha, m2.outcome);
  frame = frame_update(frame, RotationStep::Beta, m3.outcome);
  out.frames = {frame};
  out.chi_in = m1.outcome == 0 ? plus_state() : minus_state();
  out.theory = rotation_theory(job.ordering, job.alpha, job.beta, m2.outcome,
                               m3.outcome, out.chi_in);
  pack_output(out, lab);
  out.fidelity = fidelity_pure(out.theory, out.output);
  return out;
}

template <typename State>
ProtocolResult run_cnot_impl(const CnotJob& job, const State& cluster) {
  if (cluster.n_qubits() != 4) {
    throw std::invalid_argument("the cluster register holds four qubits");
  }
  const Ordering& ord = ordering(OrderingName::c);
  const State logical = to_logical_frame(cluster, ord);

  // Logical qubit 1 fixes the control input: a computational measurement
  // applies O = 1, an equatorial phi = 0 measurement applies O = H.
  const bool q1_computational = job.o_choice == CnotChoice::Identity;
  const auto m1 = q1_computational
                      ? measure_computational(logical, 1, job.q1)
                      : measure_equatorial(logical, 1, EquatorialBasis{0.0},
                                           job.q1);
  // Logical qubit 4 (register position 3 after the first removal) carries the
  // equatorial alpha measurement acting on the target.
  const auto m4 =
      measure_equatorial(m1.state, 3, EquatorialBasis{job.alpha}, job.q4);

  // Survivors are logical qubits 2 (control) and 3 (target).  The control
  // picks up its ordering unitary sigma_x; the target's output optics fold
  // away the residual Hadamard of the pattern, so the lab frame includes it.
  auto lab = apply_1q(m4.state, ord.local_unitaries[1], 1);
  lab = apply_1q(lab, gates::hadamard(), 2);

  ProtocolResult out;
  out.kind = ProtocolKind::Cnot;
  out.ordering = OrderingName::c;
  out.alpha = job.alpha;
  out.o_choice = job.o_choice;
  out.records = {
      make_record(1, q1_computational, 0.0, m1.outcome, m1.probability),
      make_record(4, false, job.alpha, m4.outcome, m4.probability),
  };
  out.branch_probability = m1.probability * m4.probability;
  // s4 contributes sigma_z on the control and sigma_x on the target (in the
  // computational frame of the output pair).
  out.frames = {PauliFrame{0, m4.outcome}, PauliFrame{m4.outcome, 0}};
  out.chi_in = m1.outcome == 0 ? plus_state() : minus_state();
  out.theory = cnot_theory(job.o_choice, job.alpha, m1.outcome, m4.outcome);
  pack_output(out, lab);
  out.fidelity = fidelity_pure(out.theory, out.output);
  return out;
}

}  // namespace

std::string_view to_string(CnotChoice c) {
  switch (c) {
    case CnotChoice::Identity: return "I";
    case CnotChoice::Hadamard: return "H";
  }
  throw std::invalid_argument("unknown C-NOT input choice");
}

CnotChoice cnot_choice_from_string(std::string_view s) {
  if (s == "I" || s == "1" || s == "identity") return CnotChoice::Identity;
  if (s == "H" || s == "hadamard") return CnotChoice::Hadamard;
  throw std::invalid_argument("C-NOT input choice must be I or H");
}

RotationJob RotationJob::branch(OrderingName ordering, double alpha,
                                double beta, int s1, int s2, int s3) {
  check_rotation_ordering(ordering);
  check_bit(s1);
  check_bit(s2);
  check_bit(s3);
  RotationJob job;
  job.ordering = ordering;
  job.alpha = alpha;
  job.beta = beta;
  job.q1 = OutcomeMode::postselect(s1);
  job.q2 = OutcomeMode::postselect(s2);
  job.q3 = OutcomeMode::postselect(s3);
  return job;
}

RotationJob RotationJob::sampled(OrderingName ordering, double alpha,
                                 double beta, std::uint64_t seed) {
  check_rotation_ordering(ordering);
  RotationJob job;
  job.ordering = ordering;
  job.alpha = alpha;
  job.beta = beta;
  job.q1 = OutcomeMode::sample(derive_seed(seed, 1));
  job.q2 = OutcomeMode::sample(derive_seed(seed, 2));
  job.q3 = OutcomeMode::sample(derive_seed(seed, 3));
  return job;
}

CnotJob CnotJob::branch(CnotChoice o_choice, double alpha, int s1, int s4) {
  check_bit(s1);
  check_bit(s4);
  CnotJob job;
  job.o_choice = o_choice;
  job.alpha = alpha;
  job.q1 = OutcomeMode::postselect(s1);
  job.q4 = OutcomeMode::postselect(s4);
  return job;
}

CnotJob CnotJob::sampled(CnotChoice o_choice, double alpha, std::uint64_t seed) {
  CnotJob job;
  job.o_choice = o_choice;
  job.alpha = alpha;
  job.q1 = OutcomeMode::sample(derive_seed(seed, 1));
  job.q4 = OutcomeMode::sample(derive_seed(seed, 4));
  return job;
}

StateVector rotation_theory(OrderingName ordering, double alpha, double beta,
                            int s2, int s3, const StateVector& chi_in) {
  check_rotation_ordering(ordering);
  check_bit(s2);
  check_bit(s3);
  if (chi_in.n_qubits() != 1) {
    throw std::invalid_argument("the rotation input is a single qubit");
  }
  Gate1Q m = gates::hadamard() * gates::rx(beta) * gates::rz(alpha);
  if (ordering == OrderingName::b) m = gates::pauli_z() * m;
  if (s2) m = gates::pauli_x() * m;
  if (s3) m = gates::pauli_z() * m;
  return apply_1q(chi_in, m, 1);
}

StateVector cnot_theory(CnotChoice o_choice, double alpha, int s1, int s4) {
  check_bit(s1);
  check_bit(s4);
  StateVector control = plus_state();
  if (s1) control = apply_1q(control, gates::pauli_z(), 1);
  if (o_choice == CnotChoice::Hadamard) {
    control = apply_1q(control, gates::hadamard(), 1);
  }
  const StateVector target = apply_1q(plus_state(), gates::rz(alpha), 1);
  StateVector pair = tensor(control, target);
  pair = apply_cnot(pair, 1, 2);
  pair = apply_1q(pair, gates::pauli_x(), 1);
  if (s4) {
    pair = apply_1q(pair, gates::pauli_z(), 1);
    pair = apply_1q(pair, gates::pauli_z(), 2);
  }
  return pair;
}

ProtocolResult run_rotation(const RotationJob& job, const StateVector& cluster) {
  return run_rotation_impl(job, cluster);
}

ProtocolResult run_rotation(const RotationJob& job, const DensityMatrix& cluster) {
  return run_rotation_impl(job, cluster);
}

ProtocolResult run_cnot(const CnotJob& job, const StateVector& cluster) {
  return run_cnot_impl(job, cluster);
}

ProtocolResult run_cnot(const CnotJob& job, const DensityMatrix& cluster) {
  return run_cnot_impl(job, cluster);
}

ConditionedTarget condition_on_control(const ProtocolResult& result,
                                       int control_outcome) {
  if (result.kind != ProtocolKind::Cnot) {
    throw std::invalid_argument("conditioning applies to C-NOT results");
  }
  check_bit(control_outcome);
  const auto m = measure_computational(result.output, 1,
                                       OutcomeMode::postselect(control_outcome));
  return {control_outcome, m.probability, m.state};
}

std::optional<StateVector> theory_target_for_control(
    const ProtocolResult& result, int control_outcome) {
  if (result.kind != ProtocolKind::Cnot) {
    throw std::invalid_argument("conditioning applies to C-NOT results");
  }
  check_bit(control_outcome);
  const Complex t0 = result.theory.amp(control_outcome == 0 ? 0 : 2);
  const Complex t1 = result.theory.amp(control_outcome == 0 ? 1 : 3);
  const double p = std::norm(t0) + std::norm(t1);
  if (p < kProbFloor) return std::nullopt;
  const double r = std::sqrt(p);
  return StateVector::from_amplitudes(1, {t0 / r, t1 / r});
}

}  // namespace onewayqc
