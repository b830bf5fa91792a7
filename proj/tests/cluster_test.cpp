#include "onewayqc/cluster.hpp"

#include <cmath>
#include <set>

#include "doctest.h"
#include "onewayqc/mbqc.hpp"
#include "support/oracle.hpp"

using namespace onewayqc;

namespace {

StateVector ideal_cluster() { return build_c4(); }

// Random full-rank density matrix from a fixed-seed Ginibre draw.
DensityMatrix random_density(std::uint64_t seed) {
  Rng rng(seed);
  const std::size_t d = 16;
  std::vector<Complex> g(d * d);
  for (Complex& c : g) c = Complex(rng.uniform() - 0.5, rng.uniform() - 0.5);
  std::vector<Complex> m(d * d, Complex(0));
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      Complex s(0);
      for (std::size_t k = 0; k < d; ++k) {
        s += g[i * d + k] * std::conj(g[j * d + k]);
      }
      m[i * d + j] = s;
    }
  }
  double tr = 0;
  for (std::size_t i = 0; i < d; ++i) tr += m[i * d + i].real();
  for (Complex& c : m) c /= tr;
  return DensityMatrix::from_elements(4, std::move(m));
}

}  // namespace

TEST_CASE("hyperentangled state has the four expected amplitudes") {
  const StateVector xi = build_hyperentangled();
  std::vector<Complex> want(16, Complex(0));
  want[0b0100] = Complex(0.5);
  want[0b0111] = Complex(0.5);
  want[0b1000] = Complex(-0.5);
  want[0b1011] = Complex(-0.5);
  for (std::size_t i = 0; i < 16; ++i) {
    CAPTURE(i);
    CHECK(std::abs(xi.amp(i) - want[i]) < kAlgebraTol);
  }
  CHECK(xi.norm() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("the controlled-phase step maps the hyperentangled state onto the "
          "cluster state exactly") {
  const StateVector via_cp = build_cluster_via_cp();
  const StateVector direct = ideal_cluster();
  for (std::size_t i = 0; i < 16; ++i) {
    CAPTURE(i);
    CHECK(std::abs(via_cp.amp(i) - direct.amp(i)) < kAlgebraTol);
  }
}

TEST_CASE("linear cluster amplitudes follow the quadratic sign rule") {
  const StateVector lin = build_linear_cluster();
  for (std::size_t i = 0; i < 16; ++i) {
    const int x1 = (i >> 3) & 1, x2 = (i >> 2) & 1, x3 = (i >> 1) & 1,
              x4 = i & 1;
    const double want = 0.25 * ((x1 * x2 + x2 * x3 + x3 * x4) % 2 ? -1 : 1);
    CAPTURE(i);
    CHECK(std::abs(lin.amp(i) - Complex(want)) < kAlgebraTol);
  }
}

TEST_CASE("linear cluster overlaps with the +/- basis expansion") {
  // 1/2 (|+00+> + |+01-> + |-10+> - |-11->), checked through projections.
  const StateVector lin = build_linear_cluster();
  const auto term = [](int s1, int b2, int b3, int s4) {
    return tensor(tensor(s1 ? minus_state() : plus_state(),
                         computational_state(b2)),
                  tensor(computational_state(b3),
                         s4 ? minus_state() : plus_state()));
  };
  CHECK(inner_product(term(0, 0, 0, 0), lin).real() ==
        doctest::Approx(0.5).epsilon(1e-12));
  CHECK(inner_product(term(0, 0, 1, 1), lin).real() ==
        doctest::Approx(0.5).epsilon(1e-12));
  CHECK(inner_product(term(1, 1, 0, 0), lin).real() ==
        doctest::Approx(0.5).epsilon(1e-12));
  // The fourth term carries |-> on qubit 1, with coefficient -1/2 ...
  CHECK(inner_product(term(1, 1, 1, 1), lin).real() ==
        doctest::Approx(-0.5).epsilon(1e-12));
  // ... while the |+>_1 |1>_2 |1>_3 |->_4 projection vanishes.
  CHECK(std::abs(inner_product(term(0, 1, 1, 1), lin)) < kAlgebraTol);
}

TEST_CASE("all three orderings express the cluster as a local-unitarily "
          "rotated linear cluster") {
  const StateVector lin = build_linear_cluster();
  const StateVector c4 = ideal_cluster();
  for (OrderingName name : {OrderingName::a, OrderingName::b, OrderingName::c}) {
    CAPTURE(to_string(name));
    const StateVector mapped = to_physical_frame(lin, ordering(name));
    CHECK(fidelity(mapped, c4) == doctest::Approx(1.0).epsilon(1e-12));
  }
  // Ordering b reproduces the state only up to a global sign.
  const Complex phase_b =
      inner_product(to_physical_frame(lin, ordering(OrderingName::b)), c4);
  CHECK(std::abs(phase_b - Complex(-1)) < 1e-10);
  const Complex phase_a =
      inner_product(to_physical_frame(lin, ordering(OrderingName::a)), c4);
  CHECK(std::abs(phase_a - Complex(1)) < 1e-10);
}

TEST_CASE("frame maps invert each other") {
  const StateVector lin = build_linear_cluster();
  for (OrderingName name : {OrderingName::a, OrderingName::b, OrderingName::c}) {
    const Ordering& ord = ordering(name);
    const StateVector round = to_logical_frame(to_physical_frame(lin, ord), ord);
    for (std::size_t i = 0; i < 16; ++i) {
      CHECK(std::abs(round.amp(i) - lin.amp(i)) < kAlgebraTol);
    }
    // Density-matrix path agrees with the pure path.
    const DensityMatrix viadm =
        to_logical_frame(DensityMatrix::from_pure(ideal_cluster()), ord);
    const DensityMatrix direct =
        DensityMatrix::from_pure(to_logical_frame(ideal_cluster(), ord));
    for (std::size_t i = 0; i < 16; ++i) {
      for (std::size_t j = 0; j < 16; ++j) {
        CHECK(std::abs(viadm.at(i, j) - direct.at(i, j)) < 1e-12);
      }
    }
  }
}

TEST_CASE("ordering bookkeeping") {
  const Ordering& a = ordering(OrderingName::a);
  CHECK(a.physical_of(1) == PhysicalQubit::kB);
  CHECK(a.physical_of(4) == PhysicalQubit::piB);
  CHECK(a.logical_of(PhysicalQubit::kA) == 2);
  CHECK_THROWS_AS(a.physical_of(0), std::invalid_argument);
  CHECK(ordering_from_string("c") == OrderingName::c);
  CHECK_THROWS_AS(ordering_from_string("d"), std::invalid_argument);
  CHECK(physical_position(PhysicalQubit::piA) == 3);
  CHECK(to_string(PhysicalQubit::kA) == "kA");
  CHECK(is_momentum(PhysicalQubit::kB));
  CHECK_FALSE(is_momentum(PhysicalQubit::piB));
}

TEST_CASE("stabilizer group structure") {
  const auto& group = stabilizer_group();
  REQUIRE(group.size() == 16);
  CHECK(group[0].label() == "+IIII");
  // Generators conjugated from the linear-cluster graph generators.
  CHECK(group[1].label() == "-ZZII");
  CHECK(group[2].label() == "-XXZI");
  CHECK(group[4].label() == "+ZIXX");
  CHECK(group[8].label() == "+IIZZ");
  // All labels distinct, signs all +/-1.
  std::set<std::string> labels;
  for (const auto& s : group) {
    labels.insert(s.label());
    CHECK((s.sign == 1 || s.sign == -1));
  }
  CHECK(labels.size() == 16);
}

TEST_CASE("the cluster state is a +1 eigenstate of every stabilizer element") {
  const StateVector c4 = ideal_cluster();
  const DensityMatrix rho = DensityMatrix::from_pure(c4);
  for (const auto& s : stabilizer_group()) {
    CAPTURE(s.label());
    // Pure path: S|C4> = |C4> exactly.
    const StateVector mapped = apply_stabilizer(s, c4);
    CHECK(inner_product(c4, mapped).real() ==
          doctest::Approx(1.0).epsilon(1e-12));
    // Trace path agrees.
    CHECK(stabilizer_expectation(s, rho) ==
          doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("the group-averaged expectation is the cluster-state overlap") {
  const StateVector c4 = ideal_cluster();
  for (std::uint64_t seed : {1ull, 2ull, 3ull, 4ull, 5ull}) {
    const DensityMatrix rho = random_density(seed);
    double avg = 0;
    for (const auto& s : stabilizer_group()) {
      avg += stabilizer_expectation(s, rho);
    }
    avg /= 16.0;
    CHECK(avg == doctest::Approx(fidelity_pure(c4, rho)).epsilon(1e-10));
  }
}

TEST_CASE("every single qubit of the cluster is maximally mixed") {
  const DensityMatrix rho = DensityMatrix::from_pure(ideal_cluster());
  for (int q = 1; q <= 4; ++q) {
    const DensityMatrix r = partial_trace(rho, {q});
    CAPTURE(q);
    CHECK(std::abs(r.at(0, 0) - Complex(0.5)) < kAlgebraTol);
    CHECK(std::abs(r.at(1, 1) - Complex(0.5)) < kAlgebraTol);
    CHECK(std::abs(r.at(0, 1)) < kAlgebraTol);
  }
}
