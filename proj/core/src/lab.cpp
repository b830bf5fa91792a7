#include "onewayqc/lab.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace onewayqc {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kAngleTol = 1e-9;

double wrap_phase(double phi) {
  double x = std::fmod(phi, 2 * kPi);
  if (x <= -kPi) x += 2 * kPi;
  if (x > kPi) x -= 2 * kPi;
  return x;
}

bool phase_eq(double a, double b) {
  return std::abs(wrap_phase(a - b)) < kAngleTol;
}

double wrap_plate_deg(double deg) {
  double x = std::fmod(deg, 180.0);
  if (x < 0) x += 180.0;
  if (180.0 - x < kAngleTol) x = 0.0;
  return x;
}

double deg_to_rad(double deg) { return deg * kPi / 180.0; }
double rad_to_deg(double rad) { return rad * 180.0 / kPi; }

Gate1Q rotation_matrix(double theta_deg) {
  const double t = deg_to_rad(theta_deg);
  return Gate1Q(std::cos(t), -std::sin(t), std::sin(t), std::cos(t));
}

void check_single_target(const StateVector& target) {
  if (target.n_qubits() != 1) {
    throw std::invalid_argument("analyzer targets are single-qubit states");
  }
  if (std::abs(target.norm() - 1.0) > 1e-6) {
    throw std::invalid_argument("analyzer targets must be normalized");
  }
}

// Bloch components of a pure single-qubit state.
std::array<double, 3> bloch3(const StateVector& s) {
  const Complex r01 = s.amp(0) * std::conj(s.amp(1));
  return {2 * r01.real(), -2 * r01.imag(),
          std::norm(s.amp(0)) - std::norm(s.amp(1))};
}

bool plate_in_analysis(PhysicalQubit q, ProtocolContext ctx) {
  return q == PhysicalQubit::piA && ctx == ProtocolContext::Rotation;
}

std::set<HPlate> context_plates(ProtocolContext ctx) {
  if (ctx == ProtocolContext::Rotation) return {HPlate::Ha, HPlate::Hb};
  return {HPlate::Hc, HPlate::Hd};
}

// Classification of a single-qubit state as a lab-native basis member.
enum class StateClass { Computational, Equatorial, Generic };

struct Classified {
  StateClass cls = StateClass::Generic;
  int computational_bit = 0;  // Computational
  double phi = 0.0;           // Equatorial
};

Classified classify_state(const StateVector& s) {
  const double m0 = std::abs(s.amp(0));
  const double m1 = std::abs(s.amp(1));
  Classified c;
  if (m1 < kAngleTol) {
    c.cls = StateClass::Computational;
    c.computational_bit = 0;
  } else if (m0 < kAngleTol) {
    c.cls = StateClass::Computational;
    c.computational_bit = 1;
  } else if (std::abs(m0 - m1) < kAngleTol) {
    c.cls = StateClass::Equatorial;
    c.phi = wrap_phase(-std::arg(s.amp(1) / s.amp(0)));
  } else {
    c.cls = StateClass::Generic;
  }
  return c;
}

}  // namespace

std::string_view to_string(ProtocolContext c) {
  return c == ProtocolContext::Rotation ? "rotation" : "cnot";
}

std::string_view to_string(PauliAxis a) {
  switch (a) {
    case PauliAxis::X: return "X";
    case PauliAxis::Y: return "Y";
    case PauliAxis::Z: return "Z";
  }
  throw std::invalid_argument("unknown Pauli axis");
}

std::string_view to_string(HPlate p) {
  switch (p) {
    case HPlate::Ha: return "Ha";
    case HPlate::Hb: return "Hb";
    case HPlate::Hc: return "Hc";
    case HPlate::Hd: return "Hd";
  }
  throw std::invalid_argument("unknown Hadamard plate");
}

LogicalMeasurement LogicalMeasurement::computational(PhysicalQubit q) {
  LogicalMeasurement m;
  m.qubit = q;
  m.kind = Kind::Computational;
  return m;
}

LogicalMeasurement LogicalMeasurement::equatorial(PhysicalQubit q, double phi) {
  LogicalMeasurement m;
  m.qubit = q;
  m.kind = Kind::Equatorial;
  m.phi = phi;
  return m;
}

LogicalMeasurement LogicalMeasurement::pauli(PhysicalQubit q, PauliAxis axis) {
  LogicalMeasurement m;
  m.qubit = q;
  m.kind = Kind::Pauli;
  m.axis = axis;
  return m;
}

LogicalMeasurement LogicalMeasurement::canonical() const {
  LogicalMeasurement m = *this;
  if (kind == Kind::Pauli) {
    switch (axis) {
      case PauliAxis::X: m = equatorial(qubit, 0.0); break;
      case PauliAxis::Y: m = equatorial(qubit, -kPi / 2); break;
      case PauliAxis::Z: m = computational(qubit); break;
    }
  }
  if (m.kind == Kind::Equatorial) m.phi = wrap_phase(m.phi);
  return m;
}

bool LogicalMeasurement::same_basis(const LogicalMeasurement& o) const {
  const LogicalMeasurement a = canonical();
  const LogicalMeasurement b = o.canonical();
  if (a.qubit != b.qubit || a.kind != b.kind) return false;
  if (a.kind == Kind::Equatorial) return phase_eq(a.phi, b.phi);
  return true;
}

Gate1Q hwp_jones(double theta_deg) {
  return rotation_matrix(theta_deg) * Gate1Q(1, 0, 0, -1) *
         rotation_matrix(-theta_deg);
}

Gate1Q qwp_jones(double theta_deg) {
  return rotation_matrix(theta_deg) * Gate1Q(1, 0, 0, Complex(0, 1)) *
         rotation_matrix(-theta_deg);
}

PolarizationAnalyzer analyzer_for_state(const StateVector& target) {
  check_single_target(target);
  const auto v = bloch3(target);
  // The QWP rotates the target's meridian into the x-z great circle ...
  double q_deg = 45.0;
  if (std::abs(v[0]) + std::abs(v[2]) > 1e-12) {
    q_deg = rad_to_deg(std::atan2(v[0], v[2])) / 2.0;
  }
  const StateVector mid = apply_1q(target, qwp_jones(q_deg), 1);
  const auto u = bloch3(mid);
  if (std::abs(u[1]) > 1e-9) {
    throw std::logic_error("analyzer solve left the equatorial component");
  }
  // ... and the HWP rotates within that circle onto +z (= |H>).
  const double h_deg = rad_to_deg(std::atan2(u[0], u[2])) / 4.0;
  return {wrap_plate_deg(q_deg), wrap_plate_deg(h_deg)};
}

Gate1Q analyzer_chain(const PolarizationAnalyzer& an, bool through_h_plate) {
  Gate1Q chain = hwp_jones(an.hwp_deg) * qwp_jones(an.qwp_deg);
  if (through_h_plate) chain = chain * gates::hadamard();
  return chain;
}

LabSetting to_lab_for_state(PhysicalQubit q, const StateVector& outcome0,
                            ProtocolContext ctx) {
  check_single_target(outcome0);
  LabSetting s;
  s.h_plates = context_plates(ctx);
  if (is_momentum(q)) {
    const Classified c = classify_state(outcome0);
    std::optional<bool>& bs = q == PhysicalQubit::kA ? s.bs_A : s.bs_B;
    std::optional<double>& phase =
        q == PhysicalQubit::kA ? s.phase_A : s.phase_B;
    switch (c.cls) {
      case StateClass::Computational:
        bs = false;  // which-path detection, no interferometer
        break;
      case StateClass::Equatorial:
        bs = true;
        phase = wrap_phase(c.phi);
        break;
      case StateClass::Generic:
        throw UnrealizableBasisError(
            "the interferometer realizes only computational and equatorial "
            "momentum bases");
    }
  } else {
    // Polarization: when the photon-A plate is part of the analysis chain,
    // the waveplates must map H * target onto |H>.
    const StateVector solve_target =
        plate_in_analysis(q, ctx) ? apply_1q(outcome0, gates::hadamard(), 1)
                                  : outcome0;
    const PolarizationAnalyzer an = analyzer_for_state(solve_target);
    (q == PhysicalQubit::piA ? s.pol_A : s.pol_B) = an;
  }
  return s;
}

LabSetting to_lab(const LogicalMeasurement& m, ProtocolContext ctx) {
  const LogicalMeasurement c = m.canonical();
  const StateVector outcome0 = c.kind == LogicalMeasurement::Kind::Computational
                                   ? computational_state(0)
                                   : equatorial_state(c.phi, 0);
  return to_lab_for_state(c.qubit, outcome0, ctx);
}

namespace {

// Which plate pair does a setting claim, and is it consistent?
std::optional<ProtocolContext> infer_context(const std::set<HPlate>& plates) {
  const bool ha = plates.count(HPlate::Ha) > 0;
  const bool hb = plates.count(HPlate::Hb) > 0;
  const bool hc = plates.count(HPlate::Hc) > 0;
  const bool hd = plates.count(HPlate::Hd) > 0;
  if (ha != hb || hc != hd || (ha && hc)) {
    throw std::invalid_argument(
        "Hadamard plates must be inserted as one full pair (Ha+Hb or Hc+Hd)");
  }
  if (ha) return ProtocolContext::Rotation;
  if (hc) return ProtocolContext::Cnot;
  return std::nullopt;
}

LogicalMeasurement classify_polarization(PhysicalQubit q,
                                         const PolarizationAnalyzer& an,
                                         std::optional<ProtocolContext> ctx) {
  const bool plate = ctx && plate_in_analysis(q, *ctx);
  // Port-0 state of the full chain (plate included when it is analysis).
  const Gate1Q chain = analyzer_chain(an, plate);
  const StateVector port0 =
      apply_1q(computational_state(0), chain.adjoint(), 1);
  const Classified c = classify_state(port0);
  switch (c.cls) {
    case StateClass::Computational:
      return LogicalMeasurement::computational(q);
    case StateClass::Equatorial:
      return LogicalMeasurement::equatorial(q, c.phi);
    case StateClass::Generic:
      throw std::invalid_argument(
          "analyzer angles do not realize a computational or equatorial basis");
  }
  throw std::logic_error("unreachable");
}

}  // namespace

std::vector<LogicalMeasurement> from_lab(const LabSetting& s) {
  const std::optional<ProtocolContext> ctx = infer_context(s.h_plates);
  std::vector<LogicalMeasurement> out;
  const auto momentum_arm = [&](PhysicalQubit q, const std::optional<bool>& bs,
                                const std::optional<double>& phase) {
    if (!bs) {
      if (phase) {
        throw std::invalid_argument(
            "glass phase set on an arm without a beam-splitter declaration");
      }
      return;
    }
    if (!*bs) {
      out.push_back(LogicalMeasurement::computational(q));
      return;
    }
    if (!phase) {
      throw std::invalid_argument(
          "equatorial momentum measurement needs a glass phase");
    }
    out.push_back(LogicalMeasurement::equatorial(q, wrap_phase(*phase)));
  };
  momentum_arm(PhysicalQubit::kA, s.bs_A, s.phase_A);
  momentum_arm(PhysicalQubit::kB, s.bs_B, s.phase_B);
  if (s.pol_A) out.push_back(classify_polarization(PhysicalQubit::piA, *s.pol_A, ctx));
  if (s.pol_B) out.push_back(classify_polarization(PhysicalQubit::piB, *s.pol_B, ctx));
  if (out.empty()) {
    throw std::invalid_argument("the setting configures no measurement");
  }
  return out;
}

namespace {

struct PairDescriptor {
  StateClass cls = StateClass::Generic;
  double dial = 0.0;
  bool swap = false;
  StateVector port0;  // state the bench realizes at port 0
};

// Express the lab-frame image of a logical basis in bench terms.  The dial
// is matched against the protocol phase phi_l so that sign flips show up as
// swapped output ports rather than shifted dials.
PairDescriptor describe_lab_pair(const Gate1Q& u,
                                 const LogicalMeasurement& canonical_basis) {
  const bool comp =
      canonical_basis.kind == LogicalMeasurement::Kind::Computational;
  const double phi_l = comp ? 0.0 : canonical_basis.phi;
  const StateVector b0 = apply_1q(
      comp ? computational_state(0) : equatorial_state(phi_l, 0), u, 1);
  const Classified c = classify_state(b0);
  PairDescriptor d;
  if (c.cls == StateClass::Computational) {
    d.cls = StateClass::Computational;
    d.swap = c.computational_bit == 1;
    d.port0 = computational_state(0);
    return d;
  }
  if (c.cls == StateClass::Generic) {
    d.cls = StateClass::Generic;
    d.port0 = b0;
    return d;
  }
  d.cls = StateClass::Equatorial;
  const double phi_lab = c.phi;
  if (phase_eq(phi_lab, phi_l)) {
    d.dial = phi_l;
    d.swap = false;
  } else if (phase_eq(phi_lab, phi_l + kPi)) {
    d.dial = phi_l;
    d.swap = true;
  } else if (phase_eq(phi_lab, -phi_l)) {
    d.dial = -phi_l;
    d.swap = false;
  } else if (phase_eq(phi_lab, -phi_l + kPi)) {
    d.dial = -phi_l;
    d.swap = true;
  } else {
    d.dial = phi_lab;
    d.swap = false;
  }
  d.port0 = equatorial_state(d.dial, 0);
  return d;
}

AuditEntry measure_entry(const Ordering& ord, int logical,
                         const LogicalMeasurement& basis, ProtocolContext ctx) {
  const PhysicalQubit phys = ord.physical_of(logical);
  const Gate1Q& u = ord.local_unitaries[static_cast<std::size_t>(logical - 1)];
  LogicalMeasurement canon = basis.canonical();
  canon.qubit = phys;
  const PairDescriptor d = describe_lab_pair(u, canon);
  AuditEntry e;
  e.role = "measure";
  e.logical_qubit = logical;
  e.physical = phys;
  e.basis = canon;
  e.setting = to_lab_for_state(phys, d.port0, ctx);
  e.outcome_swap = d.swap;
  std::ostringstream note;
  switch (d.cls) {
    case StateClass::Computational:
      note << "which-path / H-V detection";
      break;
    case StateClass::Equatorial:
      note << "dial " << d.dial;
      break;
    case StateClass::Generic:
      note << "plate-assisted analysis of a non-equatorial pair";
      break;
  }
  if (d.swap) note << ", output ports swapped";
  e.note = note.str();
  return e;
}

AuditEntry output_entry(PhysicalQubit phys, PauliAxis axis,
                        ProtocolContext ctx) {
  AuditEntry e;
  e.role = "output";
  e.logical_qubit = 0;
  e.physical = phys;
  e.basis = LogicalMeasurement::pauli(phys, axis);
  e.setting = to_lab(e.basis, ctx);
  e.outcome_swap = false;
  e.note = "output-state tomography";
  return e;
}

}  // namespace

std::vector<AuditEntry> rotation_audit(OrderingName name, double alpha,
                                       double beta, int s2) {
  if (name == OrderingName::c) {
    throw std::invalid_argument("the rotation protocol uses orderings a and b");
  }
  if (s2 != 0 && s2 != 1) {
    throw std::invalid_argument("measurement outcome must be 0 or 1");
  }
  const Ordering& ord = ordering(name);
  const ProtocolContext ctx = ProtocolContext::Rotation;
  std::vector<AuditEntry> out;
  out.push_back(measure_entry(
      ord, 1, LogicalMeasurement::computational(ord.physical_of(1)), ctx));
  out.push_back(measure_entry(
      ord, 2, LogicalMeasurement::equatorial(ord.physical_of(2), alpha), ctx));
  const double phi3 = adaptive_beta_basis(beta, s2).phi;
  out.push_back(measure_entry(
      ord, 3, LogicalMeasurement::equatorial(ord.physical_of(3), phi3), ctx));
  for (PauliAxis axis : {PauliAxis::X, PauliAxis::Y, PauliAxis::Z}) {
    out.push_back(output_entry(ord.physical_of(4), axis, ctx));
  }
  return out;
}

std::vector<AuditEntry> cnot_audit(CnotChoice o_choice, double alpha) {
  const Ordering& ord = ordering(OrderingName::c);
  const ProtocolContext ctx = ProtocolContext::Cnot;
  std::vector<AuditEntry> out;
  const LogicalMeasurement q1 =
      o_choice == CnotChoice::Identity
          ? LogicalMeasurement::computational(ord.physical_of(1))
          : LogicalMeasurement::equatorial(ord.physical_of(1), 0.0);
  out.push_back(measure_entry(ord, 1, q1, ctx));
  out.push_back(measure_entry(
      ord, 4, LogicalMeasurement::equatorial(ord.physical_of(4), alpha), ctx));
  // Control output read in the computational basis, target fully tomographed.
  out.push_back(output_entry(ord.physical_of(2), PauliAxis::Z, ctx));
  for (PauliAxis axis : {PauliAxis::X, PauliAxis::Y, PauliAxis::Z}) {
    out.push_back(output_entry(ord.physical_of(3), axis, ctx));
  }
  return out;
}

}  // namespace onewayqc
