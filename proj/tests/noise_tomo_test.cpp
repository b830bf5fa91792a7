#include "onewayqc/noise_tomo.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <string>

#include "doctest.h"

using namespace onewayqc;

namespace {

constexpr double kPi = std::numbers::pi;

std::string reference_csv_path() {
  return std::string(ONEWAYQC_TEST_DATA_DIR) + "/reference_fidelities.csv";
}

std::string write_temp_csv(const std::string& stem, const std::string& body) {
  const auto path = std::filesystem::temp_directory_path() / (stem + ".csv");
  std::ofstream out(path);
  out << body;
  out.close();
  return path.string();
}

}  // namespace

TEST_CASE("Bloch vector landmarks") {
  const BlochVector z = bloch_from_state(computational_state(0));
  CHECK(z.x == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(z.y == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(z.z == doctest::Approx(1.0).epsilon(1e-12));

  const BlochVector x = bloch_from_state(plus_state());
  CHECK(x.x == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(x.y == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(x.z == doctest::Approx(0.0).epsilon(1e-12));

  // (|0> + i|1>)/sqrt(2) points along +y.
  const BlochVector y = bloch_from_state(equatorial_state(-kPi / 2, 0));
  CHECK(y.x == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(y.y == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(y.z == doctest::Approx(0.0).epsilon(1e-12));

  const BlochVector m = bloch_from_state(DensityMatrix::maximally_mixed(1));
  CHECK(m.norm() == doctest::Approx(0.0).epsilon(1e-12));
  CHECK_THROWS_AS(m.unit(), std::invalid_argument);

  CHECK(x.dot(z) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(x.unit().norm() == doctest::Approx(1.0).epsilon(1e-12));

  CHECK_THROWS_AS(bloch_from_state(DensityMatrix::maximally_mixed(2)),
                  std::invalid_argument);
}

TEST_CASE("stabilizer fidelity on the white-noise family") {
  const DensityMatrix ideal = DensityMatrix::from_pure(build_c4());
  CHECK(stabilizer_fidelity(ideal) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(stabilizer_fidelity(DensityMatrix::maximally_mixed(4)) ==
        doctest::Approx(1.0 / 16.0).epsilon(1e-12));
  for (double p : {0.0, 0.25, 0.5, 0.75, 0.872, 1.0}) {
    const DensityMatrix rho = WhiteNoiseModel{p}.cluster_state();
    CHECK(stabilizer_fidelity(rho) ==
          doctest::Approx(p + (1.0 - p) / 16.0).epsilon(1e-12));
    // Stabilizer fidelity coincides with the direct overlap here.
    CHECK(stabilizer_fidelity(rho) ==
          doctest::Approx(fidelity_pure(build_c4(), rho)).epsilon(1e-12));
  }
  CHECK_THROWS_AS(stabilizer_fidelity(DensityMatrix::maximally_mixed(2)),
                  std::invalid_argument);
}

TEST_CASE("white-noise states are physical") {
  for (double p : {0.0, 0.3, 0.872, 1.0}) {
    const DensityMatrix rho = WhiteNoiseModel{p}.cluster_state();
    CHECK(rho.trace_real() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(rho.is_hermitian(1e-12));
    CHECK(rho.min_eigenvalue() > -1e-10);
  }
  CHECK_THROWS_AS(WhiteNoiseModel{-0.1}.cluster_state(),
                  std::invalid_argument);
  CHECK_THROWS_AS(WhiteNoiseModel{1.1}.cluster_state(), std::invalid_argument);
}

TEST_CASE("white-noise calibration inverts the stabilizer fidelity") {
  CHECK(calibrate_white_noise(0.880).p == doctest::Approx(0.872).epsilon(1e-12));
  for (double p : {0.0, 0.25, 0.872, 1.0}) {
    const double f = stabilizer_fidelity(WhiteNoiseModel{p}.cluster_state());
    CHECK(calibrate_white_noise(f).p == doctest::Approx(p).epsilon(1e-12));
  }
  CHECK_THROWS_AS(calibrate_white_noise(0.05), std::invalid_argument);
  CHECK_THROWS_AS(calibrate_white_noise(1.01), std::invalid_argument);
  // Values inside the tolerance band clamp instead of throwing.
  CHECK(calibrate_white_noise(1.0 + 1e-13).p == doctest::Approx(1.0));
}

TEST_CASE("noisy rotation fidelity follows (1 + p) / 2") {
  for (double p : {0.0, 0.25, 0.5, 0.75, 0.872, 1.0}) {
    const DensityMatrix rho = WhiteNoiseModel{p}.cluster_state();
    const ProtocolResult res = run_rotation(
        RotationJob::branch(OrderingName::a, -kPi / 2, kPi / 2, 0, 0, 0), rho);
    CHECK(res.fidelity == doctest::Approx((1.0 + p) / 2.0).epsilon(1e-12));
    CHECK(res.branch_probability == doctest::Approx(0.125).epsilon(1e-12));
  }
  // The expected values on the grid, spelled out.
  const double expected[] = {0.5, 0.625, 0.75, 0.875, 0.936, 1.0};
  const double ps[] = {0.0, 0.25, 0.5, 0.75, 0.872, 1.0};
  for (int i = 0; i < 6; ++i) {
    const ProtocolResult res = run_rotation(
        RotationJob::branch(OrderingName::b, kPi / 4, 0, 0, 1, 0),
        WhiteNoiseModel{ps[i]}.cluster_state());
    CHECK(res.fidelity == doctest::Approx(expected[i]).epsilon(1e-12));
  }
}

TEST_CASE("noisy C-NOT conditional fidelities") {
  const double p = 0.872;
  const DensityMatrix rho = WhiteNoiseModel{p}.cluster_state();

  // O = H: the correct control outcome keeps weight (1+p)/2 and the
  // conditioned target fidelity is (3p + 1) / (2p + 2).
  const ProtocolResult h = run_cnot(
      CnotJob::branch(CnotChoice::Hadamard, kPi / 2, 0, 0), rho);
  const auto h_entries = entries_for(h);
  REQUIRE(h_entries.size() == 1);
  CHECK(h_entries[0].key.branch == "001");
  CHECK(h_entries[0].probability ==
        doctest::Approx((1.0 + p) / 2.0).epsilon(1e-12));
  CHECK(h_entries[0].fidelity ==
        doctest::Approx((3.0 * p + 1.0) / (2.0 * p + 2.0)).epsilon(1e-12));
  CHECK(h_entries[0].fidelity == doctest::Approx(113.0 / 117.0).epsilon(1e-12));

  // O = Identity: both control outcomes occur with probability 1/2 and each
  // conditioned target has fidelity (1 + p) / 2.
  const ProtocolResult iden = run_cnot(
      CnotJob::branch(CnotChoice::Identity, kPi / 2, 0, 0), rho);
  const auto i_entries = entries_for(iden);
  REQUIRE(i_entries.size() == 2);
  for (const SimulatedEntry& e : i_entries) {
    CHECK(e.probability == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(e.fidelity == doctest::Approx((1.0 + p) / 2.0).epsilon(1e-12));
  }
}

TEST_CASE("entry branch strings encode the measurement record") {
  const ProtocolResult rot = run_rotation(
      RotationJob::branch(OrderingName::a, 0, kPi / 2, 0, 1, 0), build_c4());
  const auto rot_entries = entries_for(rot);
  REQUIRE(rot_entries.size() == 1);
  CHECK(rot_entries[0].key.branch == "10");
  CHECK(rot_entries[0].key.protocol == "rotation");
  CHECK(rot_entries[0].probability == doctest::Approx(0.125).epsilon(1e-12));
  CHECK(rot_entries[0].bloch_projection == doctest::Approx(1.0).epsilon(1e-12));

  const ProtocolResult cn = run_cnot(
      CnotJob::branch(CnotChoice::Identity, kPi / 4, 1, 0), build_c4());
  const auto cn_entries = entries_for(cn);
  REQUIRE(cn_entries.size() == 2);
  CHECK(cn_entries[0].key.branch == "100");
  CHECK(cn_entries[1].key.branch == "101");
  for (const SimulatedEntry& e : cn_entries) {
    CHECK(e.fidelity == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(e.probability == doctest::Approx(0.5).epsilon(1e-12));
  }

  const ProtocolResult hn = run_cnot(
      CnotJob::branch(CnotChoice::Hadamard, kPi / 4, 1, 1), build_c4());
  const auto hn_entries = entries_for(hn);
  REQUIRE(hn_entries.size() == 1);
  CHECK(hn_entries[0].key.branch == "110");
}

TEST_CASE("noisy Bloch projections shrink by the noise weight") {
  const double p = 0.872;
  const ProtocolResult res = run_rotation(
      RotationJob::branch(OrderingName::a, -kPi / 2, kPi / 2, 0, 0, 0),
      WhiteNoiseModel{p}.cluster_state());
  const auto entries = entries_for(res);
  REQUIRE(entries.size() == 1);
  CHECK(entries[0].bloch_projection == doctest::Approx(p).epsilon(1e-12));
}

TEST_CASE("reference table loads and answers lookups") {
  const ReferenceTable table = load_reference_table(reference_csv_path());
  CHECK(table.rows().size() == 32);

  RowKey key;
  key.protocol = "rotation";
  key.ordering = OrderingName::a;
  key.alpha = 0.0;
  key.beta = kPi / 2;
  key.branch = "00";
  CHECK(table.lookup(key).fidelity == doctest::Approx(0.908));
  CHECK(table.lookup(key).sigma == doctest::Approx(0.006));

  key.alpha = -kPi / 2;
  key.beta = 0.0;
  key.branch = "10";
  CHECK(table.lookup(key).fidelity == doctest::Approx(0.902));

  RowKey ckey;
  ckey.protocol = "cnot";
  ckey.ordering = OrderingName::c;
  ckey.alpha = kPi / 4;
  ckey.o_choice = CnotChoice::Hadamard;
  ckey.branch = "001";
  CHECK(table.lookup(ckey).fidelity == doctest::Approx(0.995));

  RowKey missing = key;
  missing.branch = "01";
  CHECK(table.find(missing) == nullptr);
  CHECK_THROWS_AS(table.lookup(missing), std::out_of_range);
}

TEST_CASE("reference loader rejects corrupted files") {
  CHECK_THROWS_AS(load_reference_table("/nonexistent/ref.csv"),
                  std::runtime_error);

  const std::string header =
      "protocol,ordering,alpha,beta_or_o,branch,fidelity,sigma\n";
  const std::string magic = "# onewayqc-reference-v1\n";
  const std::string row = "rotation,a,0,pi/2,00,0.908,0.006\n";

  const std::string no_magic = write_temp_csv("onewayqc_no_magic", header + row);
  CHECK_THROWS_AS(load_reference_table(no_magic), std::runtime_error);

  const std::string bad_header = write_temp_csv(
      "onewayqc_bad_header", magic + "a,b,c\n" + row);
  CHECK_THROWS_AS(load_reference_table(bad_header), std::runtime_error);

  const std::string bad_branch = write_temp_csv(
      "onewayqc_bad_branch", magic + header + "rotation,a,0,pi/2,000,0.9,0.01\n");
  CHECK_THROWS_AS(load_reference_table(bad_branch), std::runtime_error);

  const std::string bad_bit = write_temp_csv(
      "onewayqc_bad_bit", magic + header + "rotation,a,0,pi/2,0x,0.9,0.01\n");
  CHECK_THROWS_AS(load_reference_table(bad_bit), std::runtime_error);

  const std::string bad_angle = write_temp_csv(
      "onewayqc_bad_angle", magic + header + "rotation,a,zzz,pi/2,00,0.9,0.01\n");
  CHECK_THROWS_AS(load_reference_table(bad_angle), std::runtime_error);

  const std::string short_row = write_temp_csv(
      "onewayqc_short_row", magic + header + "rotation,a,0\n");
  CHECK_THROWS_AS(load_reference_table(short_row), std::runtime_error);

  const std::string empty_table =
      write_temp_csv("onewayqc_empty_table", magic + header);
  CHECK_THROWS_AS(load_reference_table(empty_table), std::runtime_error);

  const std::string good = write_temp_csv("onewayqc_good", magic + header + row);
  CHECK(load_reference_table(good).rows().size() == 1);
}

TEST_CASE("every reference row simulates to unit fidelity on the ideal cluster") {
  const ReferenceTable table = load_reference_table(reference_csv_path());
  for (const ReferenceRow& row : table.rows()) {
    const SimulatedEntry e = simulate_reference_row(row, std::nullopt);
    CAPTURE(row.key.describe());
    CHECK(e.fidelity == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(e.bloch_projection == doctest::Approx(1.0).epsilon(1e-12));
    if (row.key.protocol == "rotation") {
      CHECK(e.probability == doctest::Approx(0.125).epsilon(1e-12));
    } else if (row.key.o_choice == CnotChoice::Hadamard) {
      CHECK(e.probability == doctest::Approx(1.0).epsilon(1e-12));
    } else {
      CHECK(e.probability == doctest::Approx(0.5).epsilon(1e-12));
    }
  }
}

TEST_CASE("noisy simulation reproduces the analytic row values") {
  const ReferenceTable table = load_reference_table(reference_csv_path());
  const double p = 0.872;
  for (const ReferenceRow& row : table.rows()) {
    const SimulatedEntry e = simulate_reference_row(row, p);
    CAPTURE(row.key.describe());
    double expected = (1.0 + p) / 2.0;
    if (row.key.protocol == "cnot" &&
        row.key.o_choice == CnotChoice::Hadamard) {
      expected = (3.0 * p + 1.0) / (2.0 * p + 2.0);
    }
    CHECK(e.fidelity == doctest::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("comparison rows report signed deltas") {
  const ReferenceTable table = load_reference_table(reference_csv_path());
  std::vector<SimulatedEntry> entries;
  for (const ReferenceRow& row : table.rows()) {
    entries.push_back(simulate_reference_row(row, 0.872));
  }
  const auto report = compare_to_reference(entries, table);
  REQUIRE(report.size() == entries.size());
  for (std::size_t i = 0; i < report.size(); ++i) {
    CHECK(report[i].delta == doctest::Approx(report[i].simulated -
                                             report[i].ref.fidelity)
                                 .epsilon(1e-12));
    CHECK(report[i].simulated == doctest::Approx(entries[i].fidelity));
  }
  // A key absent from the table raises.
  SimulatedEntry stray = entries[0];
  stray.key.branch = "01";
  CHECK_THROWS_AS(compare_to_reference({stray}, table), std::out_of_range);
}

TEST_CASE("row keys match on angle values, not representations") {
  RowKey a, b;
  a.protocol = b.protocol = "rotation";
  a.ordering = b.ordering = OrderingName::b;
  a.alpha = kPi / 4;
  b.alpha = std::atan(1.0);  // pi/4 through a different route
  a.branch = b.branch = "00";
  CHECK(a.matches(b));
  b.alpha += 1e-6;
  CHECK_FALSE(a.matches(b));
  b.alpha = a.alpha;
  b.protocol = "cnot";
  CHECK_FALSE(a.matches(b));
}
