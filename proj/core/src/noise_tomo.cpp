#include "onewayqc/noise_tomo.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace onewayqc {

namespace {

constexpr double kAngleTol = 1e-9;

bool angles_close(double a, double b) { return std::abs(a - b) < kAngleTol; }

void check_single_qubit(int n) {
  if (n != 1) {
    throw std::invalid_argument("Bloch vectors describe single qubits");
  }
}

}  // namespace

double BlochVector::norm() const { return std::sqrt(x * x + y * y + z * z); }

double BlochVector::dot(const BlochVector& o) const {
  return x * o.x + y * o.y + z * o.z;
}

BlochVector BlochVector::unit() const {
  const double n = norm();
  if (n < 1e-12) {
    throw std::invalid_argument("cannot normalize a zero Bloch vector");
  }
  return {x / n, y / n, z / n};
}

BlochVector bloch_from_state(const DensityMatrix& rho) {
  check_single_qubit(rho.n_qubits());
  const Complex r01 = rho.at(0, 1);
  return {2 * r01.real(), -2 * r01.imag(),
          (rho.at(0, 0) - rho.at(1, 1)).real()};
}

BlochVector bloch_from_state(const StateVector& psi) {
  return bloch_from_state(DensityMatrix::from_pure(psi));
}

double stabilizer_fidelity(const DensityMatrix& rho) {
  if (rho.n_qubits() != 4) {
    throw std::invalid_argument("stabilizer fidelity is defined on four qubits");
  }
  double sum = 0;
  for (const StabilizerElement& s : stabilizer_group()) {
    sum += stabilizer_expectation(s, rho);
  }
  return sum / 16.0;
}

DensityMatrix WhiteNoiseModel::cluster_state() const {
  if (p < 0.0 || p > 1.0) {
    throw std::invalid_argument("white-noise weight must lie in [0, 1]");
  }
  return convex_mix(p, DensityMatrix::from_pure(build_c4()), 1.0 - p,
                    DensityMatrix::maximally_mixed(4));
}

WhiteNoiseModel calibrate_white_noise(double stabilizer_f) {
  constexpr double lo = 1.0 / 16.0;
  if (stabilizer_f < lo - kAlgebraTol || stabilizer_f > 1.0 + kAlgebraTol) {
    throw std::invalid_argument(
        "stabilizer fidelity outside the white-noise range [1/16, 1]");
  }
  const double p = (stabilizer_f - lo) / (15.0 / 16.0);
  return WhiteNoiseModel{std::min(1.0, std::max(0.0, p))};
}

bool RowKey::matches(const RowKey& o) const {
  if (protocol != o.protocol || branch != o.branch) return false;
  if (!angles_close(alpha, o.alpha)) return false;
  if (protocol == "rotation") {
    return ordering == o.ordering && angles_close(beta, o.beta);
  }
  return o_choice == o.o_choice;
}

std::string RowKey::describe() const {
  std::ostringstream os;
  os << protocol << " ordering=" << to_string(ordering) << " alpha=" << alpha;
  if (protocol == "rotation") {
    os << " beta=" << beta;
  } else {
    os << " O=" << to_string(o_choice);
  }
  os << " branch=" << branch;
  return os.str();
}

ReferenceTable::ReferenceTable(std::vector<ReferenceRow> rows)
    : rows_(std::move(rows)) {}

const ReferenceRow* ReferenceTable::find(const RowKey& key) const {
  for (const ReferenceRow& r : rows_) {
    if (r.key.matches(key)) return &r;
  }
  return nullptr;
}

const ReferenceRow& ReferenceTable::lookup(const RowKey& key) const {
  const ReferenceRow* r = find(key);
  if (!r) {
    throw std::out_of_range("reference table has no row for " + key.describe());
  }
  return *r;
}

namespace {

constexpr std::string_view kReferenceMagic = "# onewayqc-reference-v1";
constexpr std::string_view kReferenceHeader =
    "protocol,ordering,alpha,beta_or_o,branch,fidelity,sigma";

// Angles in the reference CSV are exact multiples of pi/4 spelled as
// "[-][k]pi[/d]" or "0", e.g. "0", "pi/2", "-pi/4", "3pi/4", "pi".
double parse_angle(const std::string& tok) {
  if (tok.empty()) throw std::invalid_argument("empty angle field");
  std::string s = tok;
  double sign = 1.0;
  if (s[0] == '-') {
    sign = -1.0;
    s = s.substr(1);
  }
  if (s == "0") return 0.0;
  const std::size_t pi_pos = s.find("pi");
  if (pi_pos == std::string::npos) {
    throw std::invalid_argument("angle '" + tok + "' is not a pi fraction");
  }
  double coef = 1.0;
  if (pi_pos > 0) coef = std::stod(s.substr(0, pi_pos));
  double div = 1.0;
  std::string rest = s.substr(pi_pos + 2);
  if (!rest.empty()) {
    if (rest[0] != '/') {
      throw std::invalid_argument("angle '" + tok + "' is not a pi fraction");
    }
    div = std::stod(rest.substr(1));
  }
  return sign * coef * std::numbers::pi / div;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream is(line);
  while (std::getline(is, field, ',')) out.push_back(field);
  return out;
}

}  // namespace

ReferenceTable load_reference_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open reference table '" + path + "'");
  }
  std::string line;
  if (!std::getline(in, line) || line != kReferenceMagic) {
    throw std::runtime_error("reference table '" + path +
                             "' lacks the version line '" +
                             std::string(kReferenceMagic) + "'");
  }
  std::vector<ReferenceRow> rows;
  bool header_seen = false;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (!header_seen) {
      if (line != kReferenceHeader) {
        throw std::runtime_error("reference table header mismatch; expected '" +
                                 std::string(kReferenceHeader) + "'");
      }
      header_seen = true;
      continue;
    }
    try {
      const auto fields = split_csv(line);
      if (fields.size() != 7) {
        throw std::runtime_error("row does not have 7 fields");
      }
      ReferenceRow row;
      row.key.protocol = fields[0];
      if (row.key.protocol != "rotation" && row.key.protocol != "cnot") {
        throw std::runtime_error("unknown protocol '" + fields[0] + "'");
      }
      row.key.ordering = ordering_from_string(fields[1]);
      row.key.alpha = parse_angle(fields[2]);
      if (row.key.protocol == "rotation") {
        row.key.beta = parse_angle(fields[3]);
      } else {
        row.key.o_choice = cnot_choice_from_string(fields[3]);
      }
      row.key.branch = fields[4];
      const std::size_t want = row.key.protocol == "rotation" ? 2 : 3;
      if (row.key.branch.size() != want) {
        throw std::runtime_error("branch '" + row.key.branch +
                                 "' has the wrong number of outcome bits");
      }
      for (char ch : row.key.branch) {
        if (ch != '0' && ch != '1') {
          throw std::runtime_error("branch '" + row.key.branch +
                                   "' contains a non-bit character");
        }
      }
      row.fidelity = std::stod(fields[5]);
      row.sigma = std::stod(fields[6]);
      rows.push_back(row);
    } catch (const std::exception& e) {
      throw std::runtime_error("bad reference row '" + line + "': " + e.what());
    }
  }
  if (!header_seen || rows.empty()) {
    throw std::runtime_error("reference table '" + path + "' has no data rows");
  }
  return ReferenceTable(std::move(rows));
}

namespace {

SimulatedEntry rotation_entry(const ProtocolResult& r) {
  SimulatedEntry e;
  e.key.protocol = "rotation";
  e.key.ordering = r.ordering;
  e.key.alpha = r.alpha;
  e.key.beta = r.beta;
  e.key.branch = std::string() + char('0' + r.records[1].outcome) +
                 char('0' + r.records[2].outcome);
  e.fidelity = r.fidelity;
  e.probability = r.branch_probability;
  const BlochVector sim = bloch_from_state(r.output);
  e.bloch_projection = sim.dot(bloch_from_state(r.theory).unit());
  return e;
}

std::vector<SimulatedEntry> cnot_entries(const ProtocolResult& r) {
  std::vector<SimulatedEntry> out;
  for (int c = 0; c < 2; ++c) {
    // Skip control outcomes the theory state does not support.
    const std::optional<StateVector> target = theory_target_for_control(r, c);
    if (!target) continue;
    const StateVector& theory_target = *target;
    const ConditionedTarget ct = condition_on_control(r, c);
    SimulatedEntry e;
    e.key.protocol = "cnot";
    e.key.ordering = OrderingName::c;
    e.key.alpha = r.alpha;
    e.key.o_choice = r.o_choice;
    e.key.branch = std::string() + char('0' + r.records[0].outcome) +
                   char('0' + r.records[1].outcome) + char('0' + c);
    e.fidelity = fidelity_pure(theory_target, ct.target);
    e.probability = ct.probability;
    const BlochVector sim = bloch_from_state(ct.target);
    e.bloch_projection = sim.dot(bloch_from_state(theory_target).unit());
    out.push_back(e);
  }
  return out;
}

}  // namespace

std::vector<SimulatedEntry> entries_for(const ProtocolResult& result) {
  if (result.kind == ProtocolKind::Rotation) return {rotation_entry(result)};
  return cnot_entries(result);
}

SimulatedEntry simulate_reference_row(const ReferenceRow& row,
                                      std::optional<double> noise_p) {
  const RowKey& key = row.key;
  ProtocolResult result;
  if (key.protocol == "rotation") {
    const int s2 = key.branch[0] - '0';
    const int s3 = key.branch[1] - '0';
    const RotationJob job =
        RotationJob::branch(key.ordering, key.alpha, key.beta, 0, s2, s3);
    result = noise_p ? run_rotation(job, WhiteNoiseModel{*noise_p}.cluster_state())
                     : run_rotation(job, build_c4());
  } else {
    const int s1 = key.branch[0] - '0';
    const int s4 = key.branch[1] - '0';
    const CnotJob job = CnotJob::branch(key.o_choice, key.alpha, s1, s4);
    result = noise_p ? run_cnot(job, WhiteNoiseModel{*noise_p}.cluster_state())
                     : run_cnot(job, build_c4());
  }
  for (const SimulatedEntry& e : entries_for(result)) {
    if (e.key.matches(key)) return e;
  }
  throw std::out_of_range("simulation produced no entry for " + key.describe());
}

std::vector<ComparisonRow> compare_to_reference(
    const std::vector<SimulatedEntry>& entries, const ReferenceTable& table) {
  std::vector<ComparisonRow> out;
  out.reserve(entries.size());
  for (const SimulatedEntry& e : entries) {
    ComparisonRow row;
    row.ref = table.lookup(e.key);
    row.simulated = e.fidelity;
    row.delta = e.fidelity - row.ref.fidelity;
    row.bloch_projection = e.bloch_projection;
    out.push_back(row);
  }
  return out;
}

}  // namespace onewayqc
