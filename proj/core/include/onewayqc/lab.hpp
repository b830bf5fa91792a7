// Translation between logical measurement instructions and the optical
// bench: waveplate analyzer angles for polarization qubits, interferometer
// (beam-splitter and glass-phase) settings for momentum qubits, Hadamard
// plate insertion, and per-protocol audit listings of every dial.
#pragma once

#include "onewayqc/protocols.hpp"

#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace onewayqc {

enum class ProtocolContext { Rotation, Cnot };
enum class PauliAxis { X, Y, Z };
// Hadamard plates in the interferometer output ports: Ha/Hb act on photon A,
// Hc/Hd on photon B.
enum class HPlate { Ha, Hb, Hc, Hd };

std::string_view to_string(ProtocolContext c);
std::string_view to_string(PauliAxis a);
std::string_view to_string(HPlate p);

// A single-qubit measurement request on one physical qubit, expressed in the
// logical frame of the protocols.
struct LogicalMeasurement {
  enum class Kind { Computational, Equatorial, Pauli };

  PhysicalQubit qubit = PhysicalQubit::kA;
  Kind kind = Kind::Computational;
  double phi = 0.0;           // Equatorial
  PauliAxis axis = PauliAxis::Z;  // Pauli

  static LogicalMeasurement computational(PhysicalQubit q);
  static LogicalMeasurement equatorial(PhysicalQubit q, double phi);
  static LogicalMeasurement pauli(PhysicalQubit q, PauliAxis axis);

  // Pauli requests reduce to the two native kinds: X -> equatorial(0),
  // Y -> equatorial(-pi/2), Z -> computational; phases wrap into (-pi, pi].
  LogicalMeasurement canonical() const;
  bool same_basis(const LogicalMeasurement& o) const;
};

// Waveplate pair ahead of the polarizing beam splitter; angles in degrees,
// reduced to [0, 180) (both plates are pi-periodic).
struct PolarizationAnalyzer {
  double qwp_deg = 0.0;
  double hwp_deg = 0.0;
};

// One complete bench configuration.  Absent optionals mean "arm not used".
struct LabSetting {
  std::optional<PolarizationAnalyzer> pol_A;
  std::optional<PolarizationAnalyzer> pol_B;
  std::optional<double> phase_A;  // glass-plate phase, radians in (-pi, pi]
  std::optional<double> phase_B;
  std::optional<bool> bs_A;       // recombining beam splitter in place
  std::optional<bool> bs_B;
  std::set<HPlate> h_plates;
};

struct UnrealizableBasisError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Jones matrices in the H/V basis; plate axis angle in degrees.
Gate1Q hwp_jones(double theta_deg);
Gate1Q qwp_jones(double theta_deg);

// Angles (q, h) such that HWP(h) QWP(q) maps `target` onto the transmitted
// PBS port |H>.
PolarizationAnalyzer analyzer_for_state(const StateVector& target);
// Jones matrix of the analyzer, optionally preceded by a Hadamard plate in
// the beam path; row 0 is the transmitted (outcome 0) port.
Gate1Q analyzer_chain(const PolarizationAnalyzer& an, bool through_h_plate);

// Bench settings that measure the given basis.  The context decides which
// Hadamard plates are inserted and how they interact with the analysis: in
// the rotation context the photon-A plate is part of the analysis chain; in
// the C-NOT context the photon-B plate compensates the output state, so
// polarization bases there are interpreted in the compensated frame.
LabSetting to_lab(const LogicalMeasurement& m, ProtocolContext ctx);
// Generic form: realize `outcome0` as the lab port-0 state of one qubit.
// Momentum qubits support only computational and equatorial states and throw
// UnrealizableBasisError otherwise.
LabSetting to_lab_for_state(PhysicalQubit q, const StateVector& outcome0,
                            ProtocolContext ctx);
// Classify a bench configuration back into logical measurements, ordered by
// physical qubit.  Throws std::invalid_argument when the setting is
// inconsistent or does not realize a classifiable basis.
std::vector<LogicalMeasurement> from_lab(const LabSetting& s);

// One row of a protocol audit: the logical basis, the bench setting that
// realizes it, and how lab ports map to logical outcomes.
struct AuditEntry {
  std::string role;  // "measure" | "output"
  int logical_qubit = 0;  // 0 for output rows
  PhysicalQubit physical = PhysicalQubit::kA;
  LogicalMeasurement basis;
  LabSetting setting;
  bool outcome_swap = false;  // logical outcome 0 emerges at lab port 1
  std::string note;
};

// Bench audit of a full protocol configuration: the adaptive third basis of
// the rotation depends on the alpha outcome s2.
std::vector<AuditEntry> rotation_audit(OrderingName ordering, double alpha,
                                       double beta, int s2);
std::vector<AuditEntry> cnot_audit(CnotChoice o_choice, double alpha);

}  // namespace onewayqc
