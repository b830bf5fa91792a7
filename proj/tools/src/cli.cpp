#include "onewayqc_cli/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "onewayqc/lab.hpp"
#include "onewayqc/noise_tomo.hpp"
#include "onewayqc/protocols.hpp"

namespace onewayqc_cli {

namespace {

using ojson = nlohmann::ordered_json;
using namespace onewayqc;

constexpr const char* kSchema = "onewayqc.records.v1";
constexpr double kPi = std::numbers::pi;

// ---------------------------------------------------------------------------
// formatting helpers

std::string fnum(double v, int prec = 6) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", prec, v);
  return buf;
}

std::string snum(double v, int prec = 6) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%+.*f", prec, v);
  return buf;
}

std::string gnum(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

double to_radians(double v, bool degrees) {
  return degrees ? v * kPi / 180.0 : v;
}

std::ostream& open_sink(const std::string& path, std::ofstream& file,
                        std::ostream& fallback) {
  if (path.empty()) return fallback;
  file.open(path);
  if (!file) {
    throw std::runtime_error("cannot open output file '" + path + "'");
  }
  return file;
}

// ---------------------------------------------------------------------------
// machine-format writers

void write_json_lines(std::ostream& os, const std::vector<ojson>& rows) {
  for (const ojson& r : rows) os << r.dump() << '\n';
}

std::string csv_cell(const ojson& v) {
  std::string s;
  if (v.is_string()) {
    s = v.get<std::string>();
  } else if (v.is_number_float()) {
    s = gnum(v.get<double>());
  } else if (v.is_boolean()) {
    s = v.get<bool>() ? "true" : "false";
  } else {
    s = v.dump();
  }
  if (s.find_first_of(",\"\n") != std::string::npos) {
    std::string quoted = "\"";
    for (char c : s) {
      if (c == '"') quoted += '"';
      quoted += c;
    }
    quoted += '"';
    return quoted;
  }
  return s;
}

// Nested control entries become one flat row each; audit blocks are dropped
// from the tabular format.
std::vector<ojson> flatten_for_csv(const std::vector<ojson>& rows) {
  std::vector<ojson> out;
  for (const ojson& r : rows) {
    ojson base = r;
    base.erase("schema");
    base.erase("audit");
    if (base.contains("controls")) {
      const ojson controls = base["controls"];
      base.erase("controls");
      for (const ojson& c : controls) {
        ojson row = base;
        for (const auto& [k, v] : c.items()) row[k] = v;
        out.push_back(row);
      }
    } else {
      out.push_back(base);
    }
  }
  return out;
}

void write_csv(std::ostream& os, const std::vector<ojson>& records) {
  const std::vector<ojson> rows = flatten_for_csv(records);
  os << "# schema=" << kSchema << '\n';
  std::vector<std::string> cols;
  for (const ojson& r : rows) {
    for (const auto& [k, v] : r.items()) {
      if (std::find(cols.begin(), cols.end(), k) == cols.end()) {
        cols.push_back(k);
      }
    }
  }
  for (std::size_t i = 0; i < cols.size(); ++i) {
    os << (i ? "," : "") << cols[i];
  }
  os << '\n';
  for (const ojson& r : rows) {
    for (std::size_t i = 0; i < cols.size(); ++i) {
      if (i) os << ',';
      if (r.contains(cols[i])) os << csv_cell(r.at(cols[i]));
    }
    os << '\n';
  }
}

void emit_records(const std::string& format, const std::vector<ojson>& records,
                  std::ostream& os,
                  const std::function<void(std::ostream&)>& table) {
  if (format == "json") {
    write_json_lines(os, records);
  } else if (format == "csv") {
    write_csv(os, records);
  } else {
    table(os);
  }
}

// ---------------------------------------------------------------------------
// reference table plumbing

std::string resolve_reference_path(const std::string& flag) {
  namespace fs = std::filesystem;
  if (!flag.empty()) return flag;
  const fs::path cwd = "data/reference_fidelities.csv";
  std::error_code ec;
  if (fs::exists(cwd, ec)) return cwd.string();
  const fs::path exe = fs::read_symlink("/proc/self/exe", ec);
  if (!ec) {
    const fs::path installed = exe.parent_path() / ".." / "share" /
                               "onewayqc" / "reference_fidelities.csv";
    if (fs::exists(installed, ec)) return installed.string();
  }
#ifdef ONEWAYQC_SOURCE_DATA_DIR
  const fs::path src =
      fs::path(ONEWAYQC_SOURCE_DATA_DIR) / "reference_fidelities.csv";
  if (fs::exists(src, ec)) return src.string();
#endif
  return {};
}

// Optional lookup for single runs: angle inputs arrive as decimals, so rows
// are matched with a loose angle tolerance (~0.3 degrees).
const ReferenceRow* fuzzy_find(const ReferenceTable* table, const RowKey& key) {
  if (!table) return nullptr;
  constexpr double tol = 5e-3;
  for (const ReferenceRow& r : table->rows()) {
    if (r.key.protocol != key.protocol || r.key.branch != key.branch) continue;
    if (std::abs(r.key.alpha - key.alpha) > tol) continue;
    if (key.protocol == "rotation") {
      if (r.key.ordering != key.ordering) continue;
      if (std::abs(r.key.beta - key.beta) > tol) continue;
    } else if (r.key.o_choice != key.o_choice) {
      continue;
    }
    return &r;
  }
  return nullptr;
}

struct NoiseSetup {
  std::optional<double> p;
  double record_p = 1.0;
};

NoiseSetup make_noise(double noise_fidelity) {
  NoiseSetup n;
  if (noise_fidelity >= 0.0) {
    n.p = calibrate_white_noise(noise_fidelity).p;
    n.record_p = *n.p;
  }
  return n;
}

ProtocolResult run_rotation_job(const RotationJob& job, const NoiseSetup& n) {
  if (n.p) return run_rotation(job, WhiteNoiseModel{*n.p}.cluster_state());
  return run_rotation(job, build_c4());
}

ProtocolResult run_cnot_job(const CnotJob& job, const NoiseSetup& n) {
  if (n.p) return run_cnot(job, WhiteNoiseModel{*n.p}.cluster_state());
  return run_cnot(job, build_c4());
}

// ---------------------------------------------------------------------------
// audit serialization

ojson audit_to_json(const std::vector<AuditEntry>& entries) {
  ojson arr = ojson::array();
  for (const AuditEntry& e : entries) {
    ojson a;
    a["role"] = e.role;
    if (e.role == "measure") a["logical_qubit"] = e.logical_qubit;
    a["physical"] = std::string(to_string(e.physical));
    const LogicalMeasurement canon = e.basis.canonical();
    const bool comp = canon.kind == LogicalMeasurement::Kind::Computational;
    a["basis"] = comp ? "computational" : "equatorial";
    if (!comp) a["basis_phi"] = canon.phi;
    if (is_momentum(e.physical)) {
      const auto& bs = e.physical == PhysicalQubit::kA ? e.setting.bs_A
                                                       : e.setting.bs_B;
      const auto& ph = e.physical == PhysicalQubit::kA ? e.setting.phase_A
                                                       : e.setting.phase_B;
      a["beam_splitter"] = bs.has_value() && *bs;
      if (ph) a["glass_phase"] = *ph;
    } else {
      const auto& an = e.physical == PhysicalQubit::piA ? e.setting.pol_A
                                                        : e.setting.pol_B;
      if (an) {
        a["qwp_deg"] = an->qwp_deg;
        a["hwp_deg"] = an->hwp_deg;
      }
    }
    ojson plates = ojson::array();
    for (HPlate p : e.setting.h_plates) plates.push_back(std::string(to_string(p)));
    a["plates"] = plates;
    a["outcome_swap"] = e.outcome_swap;
    a["note"] = e.note;
    arr.push_back(a);
  }
  return arr;
}

std::string audit_arm_text(const ojson& a) {
  if (a.contains("beam_splitter")) {
    if (!a["beam_splitter"].get<bool>()) return "BS out (which-path)";
    return "BS in, glass phase " + snum(a["glass_phase"].get<double>()) +
           " rad";
  }
  if (!a.contains("qwp_deg")) return "arm unused";
  return "QWP " + fnum(a["qwp_deg"].get<double>(), 2) + " deg, HWP " +
         fnum(a["hwp_deg"].get<double>(), 2) + " deg";
}

void render_audit(std::ostream& os, const ojson& audit) {
  std::string plates;
  if (!audit.empty() && audit[0].contains("plates")) {
    for (const auto& p : audit[0]["plates"]) {
      if (!plates.empty()) plates += "+";
      plates += p.get<std::string>();
    }
  }
  os << "lab bench (plates " << plates << "):\n";
  for (const ojson& a : audit) {
    std::string who = a["role"].get<std::string>();
    if (a.contains("logical_qubit")) {
      who = "measure q" + std::to_string(a["logical_qubit"].get<int>());
    } else {
      who = "output   ";
    }
    std::string basis = a["basis"].get<std::string>();
    if (a.contains("basis_phi")) {
      basis += " " + snum(a["basis_phi"].get<double>());
    }
    std::ostringstream line;
    line << "  " << who << " -> " << a["physical"].get<std::string>();
    std::string s = line.str();
    s.resize(std::max<std::size_t>(s.size(), 24), ' ');
    s += basis;
    s.resize(std::max<std::size_t>(s.size(), 50), ' ');
    s += audit_arm_text(a);
    s.resize(std::max<std::size_t>(s.size(), 88), ' ');
    s += "| " + a["note"].get<std::string>();
    os << s << '\n';
  }
}

// ---------------------------------------------------------------------------
// record builders

void attach_reference(ojson& j, const ReferenceTable* table, const RowKey& key,
                      double simulated) {
  const ReferenceRow* row = fuzzy_find(table, key);
  if (!row) return;
  j["reference"] = row->fidelity;
  j["sigma"] = row->sigma;
  j["delta"] = simulated - row->fidelity;
}

ojson rotation_record(const ProtocolResult& r, const ReferenceTable* ref,
                      double noise_p, const std::string& command) {
  ojson j;
  j["schema"] = kSchema;
  j["command"] = command;
  j["protocol"] = "rotation";
  j["ordering"] = std::string(to_string(r.ordering));
  j["alpha"] = r.alpha;
  j["beta"] = r.beta;
  j["s1"] = r.records[0].outcome;
  j["s2"] = r.records[1].outcome;
  j["s3"] = r.records[2].outcome;
  const std::string branch = std::string() +
                             char('0' + r.records[1].outcome) +
                             char('0' + r.records[2].outcome);
  j["branch"] = branch;
  j["probability"] = r.branch_probability;
  j["p1"] = r.records[0].probability;
  j["p2"] = r.records[1].probability;
  j["p3"] = r.records[2].probability;
  j["frame_x"] = r.frames[0].x_power;
  j["frame_z"] = r.frames[0].z_power;
  j["fidelity"] = r.fidelity;
  j["purity"] = r.output.purity();
  const BlochVector sim = bloch_from_state(r.output);
  const BlochVector theory = bloch_from_state(r.theory);
  j["bloch_x"] = sim.x;
  j["bloch_y"] = sim.y;
  j["bloch_z"] = sim.z;
  j["theory_bloch_x"] = theory.x;
  j["theory_bloch_y"] = theory.y;
  j["theory_bloch_z"] = theory.z;
  j["bloch_projection"] = sim.dot(theory.unit());
  j["noise_p"] = noise_p;
  RowKey key;
  key.protocol = "rotation";
  key.ordering = r.ordering;
  key.alpha = r.alpha;
  key.beta = r.beta;
  key.branch = branch;
  attach_reference(j, ref, key, r.fidelity);
  return j;
}

std::string control_mapping(CnotChoice o, int s1) {
  if (o == CnotChoice::Hadamard) {
    return "s1=" + std::to_string(s1) + " -> control reads " +
           std::to_string(1 - s1);
  }
  return "control reads 0 or 1 with p = 1/2 each";
}

ojson cnot_record(const ProtocolResult& r, const ReferenceTable* ref,
                  double noise_p, const std::string& command) {
  ojson j;
  j["schema"] = kSchema;
  j["command"] = command;
  j["protocol"] = "cnot";
  j["o_choice"] = std::string(to_string(r.o_choice));
  j["alpha"] = r.alpha;
  const int s1 = r.records[0].outcome;
  const int s4 = r.records[1].outcome;
  j["s1"] = s1;
  j["s4"] = s4;
  j["branch"] = std::string() + char('0' + s1) + char('0' + s4);
  j["probability"] = r.branch_probability;
  j["control_frame_z"] = r.frames[0].z_power;
  j["target_frame_x"] = r.frames[1].x_power;
  j["joint_fidelity"] = r.fidelity;
  j["control_mapping"] = control_mapping(r.o_choice, s1);
  j["noise_p"] = noise_p;
  ojson controls = ojson::array();
  for (int c = 0; c < 2; ++c) {
    const std::optional<StateVector> theory_t = theory_target_for_control(r, c);
    if (!theory_t) continue;
    const ConditionedTarget ct = condition_on_control(r, c);
    ojson e;
    e["control"] = c;
    e["branch"] = std::string() + char('0' + s1) + char('0' + s4) +
                  char('0' + c);
    e["probability"] = ct.probability;
    e["fidelity"] = fidelity_pure(*theory_t, ct.target);
    e["purity"] = ct.target.purity();
    const BlochVector sim = bloch_from_state(ct.target);
    const BlochVector theory = bloch_from_state(*theory_t);
    e["bloch_x"] = sim.x;
    e["bloch_y"] = sim.y;
    e["bloch_z"] = sim.z;
    e["theory_bloch_x"] = theory.x;
    e["theory_bloch_y"] = theory.y;
    e["theory_bloch_z"] = theory.z;
    e["bloch_projection"] = sim.dot(theory.unit());
    RowKey key;
    key.protocol = "cnot";
    key.o_choice = r.o_choice;
    key.alpha = r.alpha;
    key.branch = e["branch"].get<std::string>();
    attach_reference(e, ref, key, e["fidelity"].get<double>());
    controls.push_back(e);
  }
  j["controls"] = controls;
  return j;
}

// ---------------------------------------------------------------------------
// table renderers

void render_reference_line(std::ostream& os, const ojson& j) {
  if (!j.contains("reference")) return;
  os << "reference " << fnum(j["reference"].get<double>(), 3) << " +/- "
     << fnum(j["sigma"].get<double>(), 3) << "   delta "
     << snum(j["delta"].get<double>()) << '\n';
}

void render_rotation_block(std::ostream& os, const ojson& j) {
  os << "--- " << j["command"].get<std::string>()
     << ": rotation, ordering " << j["ordering"].get<std::string>()
     << ", alpha " << snum(j["alpha"].get<double>()) << ", beta "
     << snum(j["beta"].get<double>()) << ", noise p "
     << fnum(j["noise_p"].get<double>()) << '\n';
  if (j.contains("sample")) {
    os << "sample " << j["sample"].get<std::uint64_t>() << '\n';
  }
  os << "branch s1=" << j["s1"].get<int>() << " s2=" << j["s2"].get<int>()
     << " s3=" << j["s3"].get<int>() << "   P(branch) "
     << fnum(j["probability"].get<double>()) << "   step p = "
     << fnum(j["p1"].get<double>()) << " " << fnum(j["p2"].get<double>())
     << " " << fnum(j["p3"].get<double>()) << '\n';
  os << "byproduct frame: x^" << j["frame_x"].get<int>() << " z^"
     << j["frame_z"].get<int>() << '\n';
  os << "fidelity " << fnum(j["fidelity"].get<double>(), 12) << "   purity "
     << fnum(j["purity"].get<double>()) << "   bloch projection "
     << fnum(j["bloch_projection"].get<double>(), 12) << '\n';
  os << "output Bloch (" << snum(j["bloch_x"].get<double>()) << ", "
     << snum(j["bloch_y"].get<double>()) << ", "
     << snum(j["bloch_z"].get<double>()) << ")\n";
  os << "theory Bloch (" << snum(j["theory_bloch_x"].get<double>()) << ", "
     << snum(j["theory_bloch_y"].get<double>()) << ", "
     << snum(j["theory_bloch_z"].get<double>()) << ")\n";
  render_reference_line(os, j);
  if (j.contains("audit")) render_audit(os, j["audit"]);
}

void render_cnot_block(std::ostream& os, const ojson& j) {
  os << "--- " << j["command"].get<std::string>() << ": cnot, O = "
     << j["o_choice"].get<std::string>() << ", alpha "
     << snum(j["alpha"].get<double>()) << ", noise p "
     << fnum(j["noise_p"].get<double>()) << '\n';
  if (j.contains("sample")) {
    os << "sample " << j["sample"].get<std::uint64_t>() << '\n';
  }
  os << "branch s1=" << j["s1"].get<int>() << " s4=" << j["s4"].get<int>()
     << "   P(branch) " << fnum(j["probability"].get<double>())
     << "   joint fidelity " << fnum(j["joint_fidelity"].get<double>(), 12)
     << '\n';
  os << "control mapping: " << j["control_mapping"].get<std::string>() << '\n';
  for (const ojson& e : j["controls"]) {
    os << "  control " << e["control"].get<int>() << ": P "
       << fnum(e["probability"].get<double>()) << "   target fidelity "
       << fnum(e["fidelity"].get<double>(), 12) << "   Bloch ("
       << snum(e["bloch_x"].get<double>()) << ", "
       << snum(e["bloch_y"].get<double>()) << ", "
       << snum(e["bloch_z"].get<double>()) << ")\n";
    if (e.contains("reference")) {
      os << "    ";
      render_reference_line(os, e);
    }
  }
  if (j.contains("audit")) render_audit(os, j["audit"]);
}

void render_protocol_records(std::ostream& os, const std::vector<ojson>& recs) {
  for (const ojson& j : recs) {
    if (j["protocol"].get<std::string>() == "rotation") {
      render_rotation_block(os, j);
    } else {
      render_cnot_block(os, j);
    }
    os << '\n';
  }
}

void render_sample_aggregate(std::ostream& os, const std::vector<ojson>& recs,
                             bool rotation) {
  std::map<std::string, int> counts;
  for (const ojson& j : recs) {
    std::string key;
    if (rotation) {
      key = std::to_string(j["s1"].get<int>()) +
            std::to_string(j["s2"].get<int>()) +
            std::to_string(j["s3"].get<int>());
    } else {
      key = std::to_string(j["s1"].get<int>()) +
            std::to_string(j["s4"].get<int>());
    }
    counts[key]++;
  }
  const double expected = rotation ? 0.125 : 0.25;
  os << "outcome frequencies (expected " << fnum(expected) << " each):\n";
  for (const auto& [k, n] : counts) {
    os << "  " << (rotation ? "s1s2s3" : "s1s4") << "=" << k << ": " << n
       << "/" << recs.size() << " = "
       << fnum(double(n) / double(recs.size())) << '\n';
  }
}

// ---------------------------------------------------------------------------
// shared option plumbing

struct CommonOpts {
  std::string format = "table";
  std::string out_path;
  bool degrees = false;
  double noise_fidelity = -1.0;
  std::string reference;
};

void add_common(CLI::App* cmd, CommonOpts& o, bool with_reference = true) {
  cmd->add_option("--format", o.format, "output format")
      ->check(CLI::IsMember({"table", "json", "csv"}))
      ->capture_default_str();
  cmd->add_option("--out", o.out_path, "write output to this file");
  cmd->add_flag("--degrees", o.degrees, "interpret angle inputs as degrees");
  cmd->add_option("--noise-fidelity", o.noise_fidelity,
                  "model a white-noise cluster calibrated to this stabilizer "
                  "fidelity")
      ->check(CLI::Range(1.0 / 16.0, 1.0));
  if (with_reference) {
    cmd->add_option("--reference", o.reference,
                    "path to the reference fidelity table");
  }
}

const ReferenceTable* load_reference_if_available(
    const std::string& flag, std::optional<ReferenceTable>& storage) {
  const std::string path = resolve_reference_path(flag);
  if (path.empty()) {
    if (!flag.empty()) {
      throw std::runtime_error("reference table '" + flag + "' not found");
    }
    return nullptr;
  }
  storage.emplace(load_reference_table(path));
  return &*storage;
}

int parse_bit(char c) { return c - '0'; }

// ---------------------------------------------------------------------------
// verify-cluster

int cmd_verify_cluster(const CommonOpts& common, std::ostream& out) {
  std::ofstream file;
  std::ostream& os = open_sink(common.out_path, file, out);
  const NoiseSetup noise = make_noise(common.noise_fidelity);

  const StateVector c4 = build_c4();
  std::vector<ojson> rows;
  bool pass = true;

  for (OrderingName name : {OrderingName::a, OrderingName::b, OrderingName::c}) {
    const StateVector dressed =
        to_physical_frame(build_linear_cluster(), ordering(name));
    const double fid = fidelity(c4, dressed);
    const double phase = inner_product(c4, dressed).real();
    pass = pass && std::abs(fid - 1.0) < 1e-10;
    ojson r;
    r["schema"] = kSchema;
    r["command"] = "verify-cluster";
    r["kind"] = "equivalence";
    r["ordering"] = std::string(to_string(name));
    r["fidelity"] = fid;
    r["phase"] = phase;
    rows.push_back(r);
  }

  const StateVector assembled = build_cluster_via_cp();
  double max_err = 0.0;
  for (std::size_t i = 0; i < 16; ++i) {
    max_err = std::max(max_err, std::abs(assembled.amp(i) - c4.amp(i)));
  }
  pass = pass && max_err < 1e-12;
  {
    ojson r;
    r["schema"] = kSchema;
    r["command"] = "verify-cluster";
    r["kind"] = "construction";
    r["max_amplitude_error"] = max_err;
    rows.push_back(r);
  }

  const DensityMatrix rho = noise.p ? WhiteNoiseModel{*noise.p}.cluster_state()
                                    : DensityMatrix::from_pure(c4);
  for (const StabilizerElement& s : stabilizer_group()) {
    const double measured = stabilizer_expectation(s, rho);
    const double expected = s.label() == "+IIII" ? 1.0 : noise.record_p;
    pass = pass && std::abs(measured - expected) < 1e-9;
    ojson r;
    r["schema"] = kSchema;
    r["command"] = "verify-cluster";
    r["kind"] = "stabilizer";
    r["label"] = s.label();
    r["expected"] = expected;
    r["measured"] = measured;
    rows.push_back(r);
  }

  const double sf = stabilizer_fidelity(rho);
  const double overlap = fidelity_pure(c4, rho);
  pass = pass && std::abs(sf - overlap) < 1e-12;
  {
    ojson r;
    r["schema"] = kSchema;
    r["command"] = "verify-cluster";
    r["kind"] = "summary";
    r["stabilizer_fidelity"] = sf;
    r["direct_overlap"] = overlap;
    r["noise_p"] = noise.record_p;
    r["status"] = pass ? "ok" : "failed";
    rows.push_back(r);
  }

  emit_records(common.format, rows, os, [&](std::ostream& t) {
    t << "construction: dressed linear cluster vs target state\n";
    for (const ojson& r : rows) {
      if (r["kind"] != "equivalence") continue;
      t << "  ordering " << r["ordering"].get<std::string>() << ": fidelity "
        << fnum(r["fidelity"].get<double>(), 12) << "  (phase "
        << snum(r["phase"].get<double>(), 0) << ")\n";
    }
    t << "controlled-phase assembly max amplitude error: " << gnum(max_err)
      << '\n';
    t << "stabilizer expectations (noise p = " << fnum(noise.record_p)
      << "):\n";
    for (const ojson& r : rows) {
      if (r["kind"] != "stabilizer") continue;
      t << "  " << r["label"].get<std::string>() << "  expected "
        << snum(r["expected"].get<double>(), 12) << "  measured "
        << snum(r["measured"].get<double>(), 12) << '\n';
    }
    t << "stabilizer fidelity " << fnum(sf, 12) << '\n';
    t << "direct overlap      " << fnum(overlap, 12) << '\n';
    t << "status: " << (pass ? "ok" : "FAILED") << '\n';
  });
  return pass ? 0 : 1;
}

// ---------------------------------------------------------------------------
// rotate

struct RotateOpts {
  CommonOpts common;
  std::string ordering = "a";
  double alpha = 0.0;
  double beta = 0.0;
  std::string branch;
  int s1 = 0;
  std::uint64_t sample = 0;
  std::uint64_t seed = 0;
  bool no_audit = false;
};

int cmd_rotate(const RotateOpts& o, std::ostream& out) {
  std::ofstream file;
  std::ostream& os = open_sink(o.common.out_path, file, out);
  const NoiseSetup noise = make_noise(o.common.noise_fidelity);
  const OrderingName ord = ordering_from_string(o.ordering);
  const double alpha = to_radians(o.alpha, o.common.degrees);
  const double beta = to_radians(o.beta, o.common.degrees);
  std::optional<ReferenceTable> storage;
  const ReferenceTable* ref =
      load_reference_if_available(o.common.reference, storage);

  std::vector<ojson> records;
  if (o.sample > 0) {
    for (std::uint64_t i = 0; i < o.sample; ++i) {
      const RotationJob job =
          RotationJob::sampled(ord, alpha, beta, derive_seed(o.seed, i));
      const ProtocolResult r = run_rotation_job(job, noise);
      ojson rec = rotation_record(r, ref, noise.record_p, "rotate");
      rec["sample"] = i;
      rec["seed"] = o.seed;
      if (!o.no_audit) {
        rec["audit"] = audit_to_json(
            rotation_audit(ord, alpha, beta, r.records[1].outcome));
      }
      records.push_back(std::move(rec));
    }
  } else {
    std::vector<std::pair<int, int>> branches;
    if (!o.branch.empty()) {
      branches.push_back({parse_bit(o.branch[0]), parse_bit(o.branch[1])});
    } else {
      for (int s2 = 0; s2 < 2; ++s2)
        for (int s3 = 0; s3 < 2; ++s3) branches.push_back({s2, s3});
    }
    for (const auto& [s2, s3] : branches) {
      const RotationJob job = RotationJob::branch(ord, alpha, beta, o.s1, s2, s3);
      const ProtocolResult r = run_rotation_job(job, noise);
      ojson rec = rotation_record(r, ref, noise.record_p, "rotate");
      if (!o.no_audit) {
        rec["audit"] = audit_to_json(rotation_audit(ord, alpha, beta, s2));
      }
      records.push_back(std::move(rec));
    }
  }

  emit_records(o.common.format, records, os, [&](std::ostream& t) {
    if (o.sample > 0) {
      for (const ojson& j : records) {
        t << "sample " << j["sample"].get<std::uint64_t>() << ": branch s1s2s3="
          << j["s1"].get<int>() << j["s2"].get<int>() << j["s3"].get<int>()
          << "  P " << fnum(j["probability"].get<double>()) << "  fidelity "
          << fnum(j["fidelity"].get<double>(), 9) << '\n';
      }
      render_sample_aggregate(t, records, true);
    } else {
      render_protocol_records(t, records);
    }
  });
  return 0;
}

// ---------------------------------------------------------------------------
// cnot

struct CnotOpts {
  CommonOpts common;
  std::string o_choice;
  double alpha = 0.0;
  std::string branch;
  std::uint64_t sample = 0;
  std::uint64_t seed = 0;
  bool no_audit = false;
};

int cmd_cnot(const CnotOpts& o, std::ostream& out) {
  std::ofstream file;
  std::ostream& os = open_sink(o.common.out_path, file, out);
  const NoiseSetup noise = make_noise(o.common.noise_fidelity);
  const CnotChoice choice = cnot_choice_from_string(o.o_choice);
  const double alpha = to_radians(o.alpha, o.common.degrees);
  std::optional<ReferenceTable> storage;
  const ReferenceTable* ref =
      load_reference_if_available(o.common.reference, storage);

  std::vector<ojson> records;
  if (o.sample > 0) {
    for (std::uint64_t i = 0; i < o.sample; ++i) {
      const CnotJob job =
          CnotJob::sampled(choice, alpha, derive_seed(o.seed, i));
      const ProtocolResult r = run_cnot_job(job, noise);
      ojson rec = cnot_record(r, ref, noise.record_p, "cnot");
      rec["sample"] = i;
      rec["seed"] = o.seed;
      if (!o.no_audit) rec["audit"] = audit_to_json(cnot_audit(choice, alpha));
      records.push_back(std::move(rec));
    }
  } else {
    std::vector<std::pair<int, int>> branches;
    if (!o.branch.empty()) {
      branches.push_back({parse_bit(o.branch[0]), parse_bit(o.branch[1])});
    } else {
      for (int s1 = 0; s1 < 2; ++s1)
        for (int s4 = 0; s4 < 2; ++s4) branches.push_back({s1, s4});
    }
    for (const auto& [s1, s4] : branches) {
      const CnotJob job = CnotJob::branch(choice, alpha, s1, s4);
      const ProtocolResult r = run_cnot_job(job, noise);
      ojson rec = cnot_record(r, ref, noise.record_p, "cnot");
      if (!o.no_audit) {
        rec["audit"] = audit_to_json(cnot_audit(choice, alpha));
      }
      records.push_back(std::move(rec));
    }
  }

  emit_records(o.common.format, records, os, [&](std::ostream& t) {
    if (o.sample > 0) {
      for (const ojson& j : records) {
        t << "sample " << j["sample"].get<std::uint64_t>() << ": branch s1s4="
          << j["s1"].get<int>() << j["s4"].get<int>() << "  P "
          << fnum(j["probability"].get<double>()) << "  joint fidelity "
          << fnum(j["joint_fidelity"].get<double>(), 9) << '\n';
      }
      render_sample_aggregate(t, records, false);
    } else {
      render_protocol_records(t, records);
    }
  });
  return 0;
}

// ---------------------------------------------------------------------------
// sweep

struct SweepOpts {
  CommonOpts common;
  std::string protocol;
  std::string ordering = "a";
  std::string o_choice = "H";
  double alpha = 0.0;
  bool alpha_set = false;
  int alpha_grid = 8;
  double beta = 0.0;
  bool beta_set = false;
  int beta_grid = 8;
  int s1 = 0;
  int jobs = 1;
};

std::vector<double> make_grid(bool fixed_set, double fixed, int n,
                              bool degrees) {
  if (fixed_set) return {to_radians(fixed, degrees)};
  std::vector<double> g;
  g.reserve(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) g.push_back(2.0 * kPi * k / n);
  return g;
}

void run_indexed(int jobs, std::size_t n,
                 const std::function<void(std::size_t)>& work) {
  const int workers = std::max(1, std::min<int>(jobs, static_cast<int>(n)));
  if (workers == 1) {
    for (std::size_t i = 0; i < n; ++i) work(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t i = static_cast<std::size_t>(w); i < n;
           i += static_cast<std::size_t>(workers)) {
        work(i);
      }
    });
  }
  for (std::thread& t : pool) t.join();
}

int cmd_sweep(const SweepOpts& o, std::ostream& out) {
  std::ofstream file;
  std::ostream& os = open_sink(o.common.out_path, file, out);
  const NoiseSetup noise = make_noise(o.common.noise_fidelity);
  const std::vector<double> alphas =
      make_grid(o.alpha_set, o.alpha, o.alpha_grid, o.common.degrees);

  std::vector<ojson> records;
  if (o.protocol == "rotation") {
    const OrderingName ord = ordering_from_string(o.ordering);
    const std::vector<double> betas =
        make_grid(o.beta_set, o.beta, o.beta_grid, o.common.degrees);
    struct Task {
      double alpha, beta;
      int s2, s3;
    };
    std::vector<Task> tasks;
    for (double a : alphas)
      for (double b : betas)
        for (int s2 = 0; s2 < 2; ++s2)
          for (int s3 = 0; s3 < 2; ++s3) tasks.push_back({a, b, s2, s3});
    records.resize(tasks.size());
    run_indexed(o.jobs, tasks.size(), [&](std::size_t i) {
      const Task& t = tasks[i];
      const ProtocolResult r = run_rotation_job(
          RotationJob::branch(ord, t.alpha, t.beta, o.s1, t.s2, t.s3), noise);
      records[i] = rotation_record(r, nullptr, noise.record_p, "sweep");
    });
  } else {
    const CnotChoice choice = cnot_choice_from_string(o.o_choice);
    struct Task {
      double alpha;
      int s1, s4;
    };
    std::vector<Task> tasks;
    for (double a : alphas)
      for (int s1 = 0; s1 < 2; ++s1)
        for (int s4 = 0; s4 < 2; ++s4) tasks.push_back({a, s1, s4});
    records.resize(tasks.size());
    run_indexed(o.jobs, tasks.size(), [&](std::size_t i) {
      const Task& t = tasks[i];
      const ProtocolResult r =
          run_cnot_job(CnotJob::branch(choice, t.alpha, t.s1, t.s4), noise);
      records[i] = cnot_record(r, nullptr, noise.record_p, "sweep");
    });
  }

  emit_records(o.common.format, records, os, [&](std::ostream& t) {
    t << "sweep: " << records.size() << " configurations\n";
    for (const ojson& j : records) {
      if (j["protocol"].get<std::string>() == "rotation") {
        t << "  ordering " << j["ordering"].get<std::string>() << "  alpha "
          << snum(j["alpha"].get<double>()) << "  beta "
          << snum(j["beta"].get<double>()) << "  branch "
          << j["branch"].get<std::string>() << "  fidelity "
          << fnum(j["fidelity"].get<double>(), 9) << "  Bloch ("
          << snum(j["bloch_x"].get<double>()) << ", "
          << snum(j["bloch_y"].get<double>()) << ", "
          << snum(j["bloch_z"].get<double>()) << ")\n";
      } else {
        t << "  O " << j["o_choice"].get<std::string>() << "  alpha "
          << snum(j["alpha"].get<double>()) << "  branch "
          << j["branch"].get<std::string>() << "  joint fidelity "
          << fnum(j["joint_fidelity"].get<double>(), 9) << '\n';
      }
    }
  });
  return 0;
}

// ---------------------------------------------------------------------------
// reproduce-tables

struct ReproduceOpts {
  CommonOpts common;
};

int cmd_reproduce_tables(const ReproduceOpts& o, std::ostream& out) {
  const NoiseSetup noise = make_noise(o.common.noise_fidelity);
  const std::string path = resolve_reference_path(o.common.reference);
  if (path.empty()) {
    throw std::runtime_error(
        "no reference table found (looked for --reference, "
        "./data/reference_fidelities.csv, and the installed data directory)");
  }
  const ReferenceTable table = load_reference_table(path);

  std::vector<ojson> rows;
  double max_abs_delta = 0.0, sum_abs_delta = 0.0;
  int within1 = 0, within2 = 0, within3 = 0;
  for (const ReferenceRow& row : table.rows()) {
    const SimulatedEntry ideal = simulate_reference_row(row, std::nullopt);
    const SimulatedEntry headline =
        noise.p ? simulate_reference_row(row, *noise.p) : ideal;
    ojson r;
    r["schema"] = kSchema;
    r["command"] = "reproduce-tables";
    r["protocol"] = row.key.protocol;
    if (row.key.protocol == "rotation") {
      r["ordering"] = std::string(to_string(row.key.ordering));
      r["alpha"] = row.key.alpha;
      r["beta"] = row.key.beta;
    } else {
      r["o_choice"] = std::string(to_string(row.key.o_choice));
      r["alpha"] = row.key.alpha;
    }
    r["branch"] = row.key.branch;
    r["reference"] = row.fidelity;
    r["sigma"] = row.sigma;
    r["simulated"] = headline.fidelity;
    r["simulated_ideal"] = ideal.fidelity;
    r["delta"] = headline.fidelity - row.fidelity;
    r["delta_over_sigma"] =
        row.sigma > 0 ? (headline.fidelity - row.fidelity) / row.sigma : 0.0;
    r["probability"] = headline.probability;
    r["bloch_projection"] = headline.bloch_projection;
    r["noise_p"] = noise.record_p;
    rows.push_back(r);

    const double d = std::abs(headline.fidelity - row.fidelity);
    max_abs_delta = std::max(max_abs_delta, d);
    sum_abs_delta += d;
    if (row.sigma > 0) {
      if (d <= row.sigma) ++within1;
      if (d <= 2 * row.sigma) ++within2;
      if (d <= 3 * row.sigma) ++within3;
    }
  }
  const double mean_abs_delta = sum_abs_delta / double(rows.size());

  // The human tables always go to standard output; --out adds a
  // machine-readable copy (JSON lines unless --format csv).
  const auto render_tables = [&](std::ostream& t) {
    t << "single-qubit rotations: reference vs simulation (noise p = "
      << fnum(noise.record_p) << ")\n";
    t << "  ord  alpha      beta       branch  reference        simulated  "
         "     delta      delta/sigma\n";
    for (const ojson& r : rows) {
      if (r["protocol"] != "rotation") continue;
      t << "  " << r["ordering"].get<std::string>() << "    "
        << snum(r["alpha"].get<double>()) << "  " << snum(r["beta"].get<double>())
        << "  " << r["branch"].get<std::string>() << "      "
        << fnum(r["reference"].get<double>(), 3) << " +/- "
        << fnum(r["sigma"].get<double>(), 3) << "  "
        << fnum(r["simulated"].get<double>(), 9) << "  "
        << snum(r["delta"].get<double>()) << "  "
        << snum(r["delta_over_sigma"].get<double>(), 2) << '\n';
    }
    t << "equatorial C-NOT: reference vs simulation (noise p = "
      << fnum(noise.record_p) << ")\n";
    t << "  O    alpha      branch  reference        simulated       delta   "
         "   delta/sigma\n";
    for (const ojson& r : rows) {
      if (r["protocol"] != "cnot") continue;
      t << "  " << r["o_choice"].get<std::string>() << "    "
        << snum(r["alpha"].get<double>()) << "  " << r["branch"].get<std::string>()
        << "     " << fnum(r["reference"].get<double>(), 3) << " +/- "
        << fnum(r["sigma"].get<double>(), 3) << "  "
        << fnum(r["simulated"].get<double>(), 9) << "  "
        << snum(r["delta"].get<double>()) << "  "
        << snum(r["delta_over_sigma"].get<double>(), 2) << '\n';
    }
    t << "rows " << rows.size() << ", mean |delta| " << fnum(mean_abs_delta)
      << ", max |delta| " << fnum(max_abs_delta) << ", within 1/2/3 sigma: "
      << within1 << "/" << within2 << "/" << within3 << " of " << rows.size()
      << '\n';
  };

  if (o.common.format == "table") {
    render_tables(out);
    if (!o.common.out_path.empty()) {
      std::ofstream file;
      std::ostream& os = open_sink(o.common.out_path, file, out);
      write_json_lines(os, rows);
    }
  } else {
    std::ofstream file;
    std::ostream& os = open_sink(o.common.out_path, file, out);
    if (!o.common.out_path.empty()) render_tables(out);
    emit_records(o.common.format, rows, os, render_tables);
  }
  return 0;
}

// ---------------------------------------------------------------------------
// tomography

struct TomographyOpts {
  CommonOpts common;
  std::string protocol = "rotation";
  std::string ordering = "a";
  std::string o_choice = "H";
  double alpha = 0.0;
  double beta = 0.0;
  std::string branch;
  int s1 = 0;
  std::uint64_t sample = 0;
  std::uint64_t seed = 0;
};

struct AxisTally {
  std::uint64_t n0 = 0, n1 = 0;
  std::uint64_t total() const { return n0 + n1; }
  double estimate() const {
    return total() ? (double(n0) - double(n1)) / double(total()) : 0.0;
  }
  double std_error() const {
    if (!total()) return 0.0;
    const double e = estimate();
    return std::sqrt(std::max(0.0, 1.0 - e * e) / double(total()));
  }
};

constexpr const char* kAxisNames[3] = {"X", "Y", "Z"};

// Outcome 0 is the +1 eigenstate; P(+1) = (1 + <sigma_axis>) / 2.
int sample_axis_outcome(const BlochVector& b, int axis, std::uint64_t seed) {
  const double m = axis == 0 ? b.x : axis == 1 ? b.y : b.z;
  Rng rng(seed);
  return rng.bernoulli(std::clamp((1.0 - m) / 2.0, 0.0, 1.0));
}

ojson axis_row(const char* axis, const AxisTally& t, double exact) {
  ojson r;
  r["kind"] = "axis";
  r["axis"] = axis;
  r["shots"] = t.total();
  r["plus"] = t.n0;
  r["minus"] = t.n1;
  r["estimate"] = t.estimate();
  r["exact"] = exact;
  r["std_error"] = t.std_error();
  return r;
}

int cmd_tomography(const TomographyOpts& o, std::ostream& out) {
  std::ofstream file;
  std::ostream& os = open_sink(o.common.out_path, file, out);
  const NoiseSetup noise = make_noise(o.common.noise_fidelity);
  const double alpha = to_radians(o.alpha, o.common.degrees);
  const double beta = to_radians(o.beta, o.common.degrees);
  const bool rotation = o.protocol == "rotation";

  if (o.sample > 0 && o.branch.empty()) {
    throw std::runtime_error(
        "sampled tomography postselects one protocol branch: pass --branch");
  }

  std::vector<ojson> records;
  const auto base_record = [&](const ProtocolResult& r) {
    ojson rec = rotation ? rotation_record(r, nullptr, noise.record_p,
                                           "tomography")
                         : cnot_record(r, nullptr, noise.record_p,
                                       "tomography");
    return rec;
  };

  if (o.sample == 0) {
    std::vector<std::pair<int, int>> branches;
    if (!o.branch.empty()) {
      branches.push_back({parse_bit(o.branch[0]), parse_bit(o.branch[1])});
    } else {
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) branches.push_back({a, b});
    }
    for (const auto& [b0, b1] : branches) {
      const ProtocolResult r =
          rotation
              ? run_rotation_job(RotationJob::branch(
                                     ordering_from_string(o.ordering), alpha,
                                     beta, o.s1, b0, b1),
                                 noise)
              : run_cnot_job(CnotJob::branch(
                                 cnot_choice_from_string(o.o_choice), alpha,
                                 b0, b1),
                             noise);
      records.push_back(base_record(r));
    }
    emit_records(o.common.format, records, os, [&](std::ostream& t) {
      render_protocol_records(t, records);
    });
    return 0;
  }

  // Sampled mode: the protocol branch is postselected, and the output qubit
  // (for a C-NOT, the target conditioned on a sampled control readout) is
  // measured along X, Y, Z in rotation.
  const int b0 = parse_bit(o.branch[0]);
  const int b1 = parse_bit(o.branch[1]);
  if (rotation) {
    const ProtocolResult r = run_rotation_job(
        RotationJob::branch(ordering_from_string(o.ordering), alpha, beta,
                            o.s1, b0, b1),
        noise);
    const BlochVector exact = bloch_from_state(r.output);
    const double exact_axes[3] = {exact.x, exact.y, exact.z};
    AxisTally tally[3];
    for (std::uint64_t i = 0; i < o.sample; ++i) {
      const int axis = static_cast<int>(i % 3);
      const int outcome =
          sample_axis_outcome(exact, axis, derive_seed(o.seed, i));
      (outcome == 0 ? tally[axis].n0 : tally[axis].n1)++;
    }
    ojson head = base_record(r);
    head["mode"] = "sampled";
    head["shots"] = o.sample;
    head["seed"] = o.seed;
    records.push_back(head);
    BlochVector est{tally[0].estimate(), tally[1].estimate(),
                    tally[2].estimate()};
    for (int a = 0; a < 3; ++a) {
      ojson row = axis_row(kAxisNames[a], tally[a], exact_axes[a]);
      row["schema"] = kSchema;
      row["command"] = "tomography";
      records.push_back(row);
    }
    const BlochVector theory_dir = bloch_from_state(r.theory).unit();
    ojson summary;
    summary["schema"] = kSchema;
    summary["command"] = "tomography";
    summary["kind"] = "summary";
    summary["bloch_est_x"] = est.x;
    summary["bloch_est_y"] = est.y;
    summary["bloch_est_z"] = est.z;
    summary["bloch_x"] = exact.x;
    summary["bloch_y"] = exact.y;
    summary["bloch_z"] = exact.z;
    summary["fidelity_estimate"] = (1.0 + est.dot(theory_dir)) / 2.0;
    summary["fidelity"] = r.fidelity;
    records.push_back(summary);
  } else {
    const ProtocolResult r = run_cnot_job(
        CnotJob::branch(cnot_choice_from_string(o.o_choice), alpha, b0, b1),
        noise);
    std::optional<ConditionedTarget> cond[2];
    BlochVector cond_bloch[2];
    const DensityMatrix control_dm = partial_trace(r.output, {1});
    const double p_c1 = std::clamp(control_dm.at(1, 1).real(), 0.0, 1.0);
    for (int c = 0; c < 2; ++c) {
      const double pc = c ? p_c1 : 1.0 - p_c1;
      if (pc >= kProbFloor) {
        cond[c] = condition_on_control(r, c);
        cond_bloch[c] = bloch_from_state(cond[c]->target);
      }
    }
    AxisTally tally[2][3];
    std::uint64_t control_counts[2] = {0, 0};
    for (std::uint64_t i = 0; i < o.sample; ++i) {
      Rng control_rng(derive_seed(o.seed, 2 * i));
      const int c = control_rng.bernoulli(p_c1);
      control_counts[c]++;
      if (!cond[c]) continue;
      const int axis = static_cast<int>(i % 3);
      const int outcome = sample_axis_outcome(cond_bloch[c], axis,
                                              derive_seed(o.seed, 2 * i + 1));
      (outcome == 0 ? tally[c][axis].n0 : tally[c][axis].n1)++;
    }
    ojson head = base_record(r);
    head["mode"] = "sampled";
    head["shots"] = o.sample;
    head["seed"] = o.seed;
    records.push_back(head);
    for (int c = 0; c < 2; ++c) {
      if (!cond[c] || control_counts[c] == 0) continue;
      const ConditionedTarget& ct = *cond[c];
      const BlochVector exact = cond_bloch[c];
      const double exact_axes[3] = {exact.x, exact.y, exact.z};
      BlochVector est{tally[c][0].estimate(), tally[c][1].estimate(),
                      tally[c][2].estimate()};
      for (int a = 0; a < 3; ++a) {
        ojson row = axis_row(kAxisNames[a], tally[c][a], exact_axes[a]);
        row["schema"] = kSchema;
        row["command"] = "tomography";
        row["control"] = c;
        records.push_back(row);
      }
      ojson summary;
      summary["schema"] = kSchema;
      summary["command"] = "tomography";
      summary["kind"] = "summary";
      summary["control"] = c;
      summary["control_frequency"] =
          double(control_counts[c]) / double(o.sample);
      summary["control_probability"] = ct.probability;
      summary["bloch_est_x"] = est.x;
      summary["bloch_est_y"] = est.y;
      summary["bloch_est_z"] = est.z;
      summary["bloch_x"] = exact.x;
      summary["bloch_y"] = exact.y;
      summary["bloch_z"] = exact.z;
      const std::optional<StateVector> theory_t =
          theory_target_for_control(r, c);
      if (theory_t) {
        const BlochVector dir = bloch_from_state(*theory_t).unit();
        summary["fidelity_estimate"] = (1.0 + est.dot(dir)) / 2.0;
        summary["fidelity"] = fidelity_pure(*theory_t, ct.target);
      }
      records.push_back(summary);
    }
  }

  emit_records(o.common.format, records, os, [&](std::ostream& t) {
    for (const ojson& j : records) {
      if (j.contains("protocol")) {
        if (j["protocol"].get<std::string>() == "rotation") {
          render_rotation_block(t, j);
        } else {
          render_cnot_block(t, j);
        }
        t << "shots " << j["shots"].get<std::uint64_t>() << ", seed "
          << j["seed"].get<std::uint64_t>() << '\n';
      } else if (j["kind"] == "axis") {
        t << "  axis " << j["axis"].get<std::string>();
        if (j.contains("control")) {
          t << " (control " << j["control"].get<int>() << ")";
        }
        t << ": shots " << j["shots"].get<std::uint64_t>() << "  +1: "
          << j["plus"].get<std::uint64_t>() << "  -1: "
          << j["minus"].get<std::uint64_t>() << "  estimate "
          << snum(j["estimate"].get<double>()) << "  exact "
          << snum(j["exact"].get<double>()) << "  se "
          << fnum(j["std_error"].get<double>()) << '\n';
      } else if (j["kind"] == "summary") {
        t << "  summary";
        if (j.contains("control")) {
          t << " (control " << j["control"].get<int>() << ", frequency "
            << fnum(j["control_frequency"].get<double>()) << ", p "
            << fnum(j["control_probability"].get<double>()) << ")";
        }
        t << ": Bloch estimate (" << snum(j["bloch_est_x"].get<double>())
          << ", " << snum(j["bloch_est_y"].get<double>()) << ", "
          << snum(j["bloch_est_z"].get<double>()) << ") vs exact ("
          << snum(j["bloch_x"].get<double>()) << ", "
          << snum(j["bloch_y"].get<double>()) << ", "
          << snum(j["bloch_z"].get<double>()) << ")";
        if (j.contains("fidelity_estimate")) {
          t << "  fidelity estimate "
            << fnum(j["fidelity_estimate"].get<double>(), 9) << " vs exact "
            << fnum(j["fidelity"].get<double>(), 9);
        }
        t << '\n';
      }
    }
  });
  return 0;
}

const CLI::Validator TwoBits(
    [](std::string& s) -> std::string {
      if (s.size() == 2 && (s[0] == '0' || s[0] == '1') &&
          (s[1] == '0' || s[1] == '1')) {
        return {};
      }
      return std::string("expected two outcome bits, e.g. 01");
    },
    "BITS");

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err) {
  CLI::App app{
      "Measurement-based computation on a two-photon four-qubit cluster "
      "state: protocol simulation, noise calibration, and bench settings"};
  app.require_subcommand(1);

  CommonOpts verify_common;
  CLI::App* verify = app.add_subcommand(
      "verify-cluster",
      "check the cluster construction, local-unitary equivalences, and the "
      "stabilizer expectations");
  add_common(verify, verify_common, false);

  RotateOpts ro;
  CLI::App* rotate = app.add_subcommand(
      "rotate", "run the single-qubit-rotation pattern R_x(beta) R_z(alpha)");
  add_common(rotate, ro.common);
  rotate->add_option("--ordering", ro.ordering, "measurement ordering")
      ->check(CLI::IsMember({"a", "b"}))
      ->capture_default_str();
  rotate->add_option("--alpha", ro.alpha, "z-rotation angle");
  rotate->add_option("--beta", ro.beta, "x-rotation angle");
  auto* r_branch =
      rotate->add_option("--branch", ro.branch, "postselect outcomes s2 s3")
          ->check(TwoBits);
  rotate->add_option("--s1", ro.s1, "postselected first outcome")
      ->check(CLI::Range(0, 1))
      ->capture_default_str();
  auto* r_sample = rotate->add_option(
      "--sample,--samples", ro.sample, "sample this many full protocol runs");
  auto* r_seed = rotate->add_option("--seed", ro.seed, "sampling seed");
  r_sample->needs(r_seed);
  r_sample->excludes(r_branch);
  rotate->add_flag("--no-audit", ro.no_audit,
                   "omit the lab-setting audit block");

  CnotOpts co;
  CLI::App* cnot = app.add_subcommand(
      "cnot", "run the two-qubit C-NOT pattern with target rotation alpha");
  add_common(cnot, co.common);
  cnot->add_option("--o,--o-choice", co.o_choice,
                   "control preparation: I or H")
      ->required()
      ->check(CLI::IsMember({"I", "H"}));
  cnot->add_option("--alpha", co.alpha, "target z-rotation angle");
  auto* c_branch =
      cnot->add_option("--branch", co.branch, "postselect outcomes s1 s4")
          ->check(TwoBits);
  auto* c_sample = cnot->add_option("--sample,--samples", co.sample,
                                    "sample this many full protocol runs");
  auto* c_seed = cnot->add_option("--seed", co.seed, "sampling seed");
  c_sample->needs(c_seed);
  c_sample->excludes(c_branch);
  cnot->add_flag("--no-audit", co.no_audit,
                 "omit the lab-setting audit block");

  SweepOpts so;
  CLI::App* sweep = app.add_subcommand(
      "sweep", "enumerate branches over an angle grid, optionally in "
               "parallel");
  add_common(sweep, so.common, false);
  sweep->add_option("--protocol", so.protocol, "protocol to sweep")
      ->required()
      ->check(CLI::IsMember({"rotation", "cnot"}));
  sweep->add_option("--ordering", so.ordering, "rotation ordering")
      ->check(CLI::IsMember({"a", "b"}))
      ->capture_default_str();
  sweep->add_option("--o,--o-choice", so.o_choice, "C-NOT control choice")
      ->check(CLI::IsMember({"I", "H"}))
      ->capture_default_str();
  auto* s_alpha = sweep->add_option("--alpha", so.alpha, "fixed alpha");
  auto* s_agrid =
      sweep->add_option("--alpha-grid", so.alpha_grid,
                        "number of evenly spaced alpha values in [0, 2pi)")
          ->check(CLI::Range(1, 4096))
          ->capture_default_str();
  s_alpha->excludes(s_agrid);
  auto* s_beta = sweep->add_option("--beta", so.beta, "fixed beta");
  auto* s_bgrid =
      sweep->add_option("--beta-grid", so.beta_grid,
                        "number of evenly spaced beta values in [0, 2pi)")
          ->check(CLI::Range(1, 4096))
          ->capture_default_str();
  s_beta->excludes(s_bgrid);
  sweep->add_option("--s1", so.s1, "postselected first outcome (rotation)")
      ->check(CLI::Range(0, 1))
      ->capture_default_str();
  sweep->add_option("--jobs", so.jobs, "worker threads")
      ->check(CLI::Range(1, 256))
      ->capture_default_str();

  ReproduceOpts po;
  CLI::App* reproduce = app.add_subcommand(
      "reproduce-tables",
      "simulate every row of the bundled reference tables and report deltas");
  add_common(reproduce, po.common);

  TomographyOpts to;
  CLI::App* tomo = app.add_subcommand(
      "tomography",
      "emit Bloch-vector data for protocol outputs, exactly or from sampled "
      "X/Y/Z measurements");
  add_common(tomo, to.common);
  tomo->add_option("--protocol", to.protocol, "protocol")
      ->check(CLI::IsMember({"rotation", "cnot"}))
      ->capture_default_str();
  tomo->add_option("--ordering", to.ordering, "rotation ordering")
      ->check(CLI::IsMember({"a", "b"}))
      ->capture_default_str();
  tomo->add_option("--o,--o-choice", to.o_choice, "C-NOT control choice")
      ->check(CLI::IsMember({"I", "H"}))
      ->capture_default_str();
  tomo->add_option("--alpha", to.alpha, "z-rotation angle");
  tomo->add_option("--beta", to.beta, "x-rotation angle (rotation)");
  tomo->add_option("--branch", to.branch,
                   "postselect outcomes (s2 s3 for rotation, s1 s4 for cnot)")
      ->check(TwoBits);
  tomo->add_option("--s1", to.s1, "postselected first outcome (rotation)")
      ->check(CLI::Range(0, 1))
      ->capture_default_str();
  auto* t_sample = tomo->add_option("--sample,--samples", to.sample,
                                    "tomographic shots to sample");
  auto* t_seed = tomo->add_option("--seed", to.seed, "sampling seed");
  t_sample->needs(t_seed);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    if (verify->parsed()) return cmd_verify_cluster(verify_common, out);
    if (rotate->parsed()) return cmd_rotate(ro, out);
    if (cnot->parsed()) return cmd_cnot(co, out);
    if (sweep->parsed()) return cmd_sweep(so, out);
    if (reproduce->parsed()) return cmd_reproduce_tables(po, out);
    if (tomo->parsed()) return cmd_tomography(to, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
  err << "error: no command selected\n";
  return 2;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  argv.push_back("onewayqc-sim");
  for (const std::string& a : args) argv.push_back(a.c_str());
  return run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace onewayqc_cli
