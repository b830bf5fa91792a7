#include "onewayqc/cluster.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace onewayqc {

namespace {

constexpr int kN = 4;
constexpr std::size_t kDim = 16;

void check_four(int n) {
  if (n != kN) {
    throw std::invalid_argument("expected a four-qubit register");
  }
}

Gate1Q pauli_gate(Pauli p) {
  switch (p) {
    case Pauli::I: return gates::identity();
    case Pauli::X: return gates::pauli_x();
    case Pauli::Y: return gates::pauli_y();
    case Pauli::Z: return gates::pauli_z();
  }
  throw std::invalid_argument("unknown Pauli");
}

// Match a 2x2 matrix against +/- I, X, Y, Z.
std::pair<Pauli, int> match_signed_pauli(const Gate1Q& g) {
  constexpr Pauli kinds[] = {Pauli::I, Pauli::X, Pauli::Y, Pauli::Z};
  for (Pauli p : kinds) {
    const Gate1Q ref = pauli_gate(p);
    for (int sign : {1, -1}) {
      bool ok = true;
      for (int r = 0; r < 2 && ok; ++r) {
        for (int c = 0; c < 2 && ok; ++c) {
          ok = std::abs(g.at(r, c) - double(sign) * ref.at(r, c)) < 1e-9;
        }
      }
      if (ok) return {p, sign};
    }
  }
  throw std::logic_error("conjugated generator is not a signed Pauli");
}

// a * b = i^{i_power} * p.
struct PauliProd {
  Pauli p;
  int i_power;
};

PauliProd pauli_mul(Pauli a, Pauli b) {
  if (a == Pauli::I) return {b, 0};
  if (b == Pauli::I) return {a, 0};
  if (a == b) return {Pauli::I, 0};
  const int ia = static_cast<int>(a) - 1;  // X=0, Y=1, Z=2
  const int ib = static_cast<int>(b) - 1;
  // XY = iZ, YZ = iX, ZX = iY; the reversed order picks up i^3.
  const Pauli rest = static_cast<Pauli>(4 - ia - ib);
  const bool cyclic = (ib == (ia + 1) % 3);
  return {rest, cyclic ? 1 : 3};
}

StabilizerElement stabilizer_mul(const StabilizerElement& a,
                                 const StabilizerElement& b) {
  StabilizerElement out;
  int i_power = 0;
  for (int q = 0; q < kN; ++q) {
    const PauliProd pr = pauli_mul(a.paulis[static_cast<std::size_t>(q)],
                                   b.paulis[static_cast<std::size_t>(q)]);
    out.paulis[static_cast<std::size_t>(q)] = pr.p;
    i_power = (i_power + pr.i_power) % 4;
  }
  if (i_power % 2 != 0) {
    throw std::logic_error("stabilizer product has a complex phase");
  }
  out.sign = a.sign * b.sign * (i_power == 2 ? -1 : 1);
  return out;
}

}  // namespace

std::string_view to_string(PhysicalQubit q) {
  switch (q) {
    case PhysicalQubit::kA: return "kA";
    case PhysicalQubit::kB: return "kB";
    case PhysicalQubit::piA: return "piA";
    case PhysicalQubit::piB: return "piB";
  }
  throw std::invalid_argument("unknown physical qubit");
}

bool is_momentum(PhysicalQubit q) {
  return q == PhysicalQubit::kA || q == PhysicalQubit::kB;
}

std::string_view to_string(OrderingName name) {
  switch (name) {
    case OrderingName::a: return "a";
    case OrderingName::b: return "b";
    case OrderingName::c: return "c";
  }
  throw std::invalid_argument("unknown ordering");
}

OrderingName ordering_from_string(std::string_view s) {
  if (s == "a") return OrderingName::a;
  if (s == "b") return OrderingName::b;
  if (s == "c") return OrderingName::c;
  throw std::invalid_argument("ordering must be one of a, b, c");
}

PhysicalQubit Ordering::physical_of(int logical) const {
  if (logical < 1 || logical > kN) {
    throw std::invalid_argument("logical qubit index outside 1..4");
  }
  return logical_to_physical[static_cast<std::size_t>(logical - 1)];
}

int Ordering::logical_of(PhysicalQubit q) const {
  for (int j = 1; j <= kN; ++j) {
    if (logical_to_physical[static_cast<std::size_t>(j - 1)] == q) return j;
  }
  throw std::logic_error("ordering does not cover the physical qubit");
}

const Ordering& ordering(OrderingName name) {
  using PQ = PhysicalQubit;
  static const Ordering a{
      OrderingName::a,
      {PQ::kB, PQ::kA, PQ::piA, PQ::piB},
      {gates::pauli_x() * gates::hadamard(), gates::pauli_z(),
       gates::identity(), gates::hadamard()}};
  static const Ordering b{
      OrderingName::b,
      {PQ::piB, PQ::piA, PQ::kA, PQ::kB},
      {gates::hadamard(), gates::pauli_z(), gates::pauli_x(),
       gates::pauli_z() * gates::hadamard()}};
  static const Ordering c{
      OrderingName::c,
      {PQ::kA, PQ::kB, PQ::piB, PQ::piA},
      {gates::pauli_z() * gates::hadamard(), gates::pauli_x(),
       gates::identity(), gates::hadamard()}};
  switch (name) {
    case OrderingName::a: return a;
    case OrderingName::b: return b;
    case OrderingName::c: return c;
  }
  throw std::invalid_argument("unknown ordering");
}

StateVector build_hyperentangled() {
  // (|01> - |10>)/sqrt(2) on momentum, (|00> + |11>)/sqrt(2) on polarization.
  std::vector<Complex> a(kDim, Complex(0));
  a[0b0100] = Complex(0.5);
  a[0b0111] = Complex(0.5);
  a[0b1000] = Complex(-0.5);
  a[0b1011] = Complex(-0.5);
  return StateVector::from_amplitudes(kN, std::move(a));
}

StateVector build_c4() {
  std::vector<Complex> a(kDim, Complex(0));
  a[0b0100] = Complex(0.5);
  a[0b0111] = Complex(0.5);
  a[0b1000] = Complex(-0.5);
  a[0b1011] = Complex(0.5);
  return StateVector::from_amplitudes(kN, std::move(a));
}

StateVector build_cluster_via_cp() {
  return apply_cp(build_hyperentangled(),
                  physical_position(PhysicalQubit::kA),
                  physical_position(PhysicalQubit::piA));
}

StateVector build_linear_cluster() {
  const StateVector plus = plus_state();
  StateVector s = tensor(tensor(plus, plus), tensor(plus, plus));
  s = apply_cp(s, 1, 2);
  s = apply_cp(s, 2, 3);
  s = apply_cp(s, 3, 4);
  return s;
}

namespace {

// Full-register index permutation: bit of logical position j moves to the
// physical position assigned by the ordering.
std::size_t logical_index_to_physical(std::size_t l, const Ordering& ord) {
  std::size_t p = 0;
  for (int j = 1; j <= kN; ++j) {
    const std::size_t bit = (l >> (kN - j)) & 1u;
    p |= bit << (kN - physical_position(ord.physical_of(j)));
  }
  return p;
}

}  // namespace

StateVector to_physical_frame(const StateVector& s, const Ordering& ord) {
  check_four(s.n_qubits());
  StateVector u = s;
  for (int j = 1; j <= kN; ++j) {
    u = apply_1q(u, ord.local_unitaries[static_cast<std::size_t>(j - 1)], j);
  }
  std::vector<Complex> out(kDim);
  for (std::size_t l = 0; l < kDim; ++l) {
    out[logical_index_to_physical(l, ord)] = u.amp(l);
  }
  return StateVector::from_amplitudes(kN, std::move(out));
}

StateVector to_logical_frame(const StateVector& s, const Ordering& ord) {
  check_four(s.n_qubits());
  std::vector<Complex> out(kDim);
  for (std::size_t l = 0; l < kDim; ++l) {
    out[l] = s.amp(logical_index_to_physical(l, ord));
  }
  StateVector u = StateVector::from_amplitudes(kN, std::move(out));
  for (int j = 1; j <= kN; ++j) {
    u = apply_1q(
        u, ord.local_unitaries[static_cast<std::size_t>(j - 1)].adjoint(), j);
  }
  return u;
}

DensityMatrix to_logical_frame(const DensityMatrix& r, const Ordering& ord) {
  check_four(r.n_qubits());
  std::vector<Complex> out(kDim * kDim);
  for (std::size_t i = 0; i < kDim; ++i) {
    const std::size_t pi = logical_index_to_physical(i, ord);
    for (std::size_t j = 0; j < kDim; ++j) {
      out[i * kDim + j] = r.at(pi, logical_index_to_physical(j, ord));
    }
  }
  DensityMatrix u = DensityMatrix::from_elements(kN, std::move(out));
  for (int j = 1; j <= kN; ++j) {
    u = apply_1q(
        u, ord.local_unitaries[static_cast<std::size_t>(j - 1)].adjoint(), j);
  }
  return u;
}

std::string_view to_string(Pauli p) {
  switch (p) {
    case Pauli::I: return "I";
    case Pauli::X: return "X";
    case Pauli::Y: return "Y";
    case Pauli::Z: return "Z";
  }
  throw std::invalid_argument("unknown Pauli");
}

std::string StabilizerElement::label() const {
  std::string out(sign >= 0 ? "+" : "-");
  for (Pauli p : paulis) out += to_string(p);
  return out;
}

const std::vector<StabilizerElement>& stabilizer_group() {
  static const std::vector<StabilizerElement> group = [] {
    // Linear-cluster generators X Z I I, Z X Z I, I Z X Z, I I Z X conjugated
    // by the ordering-a local unitaries and mapped to physical positions.
    const Ordering& ord = ordering(OrderingName::a);
    constexpr Pauli gen[4][4] = {
        {Pauli::X, Pauli::Z, Pauli::I, Pauli::I},
        {Pauli::Z, Pauli::X, Pauli::Z, Pauli::I},
        {Pauli::I, Pauli::Z, Pauli::X, Pauli::Z},
        {Pauli::I, Pauli::I, Pauli::Z, Pauli::X}};
    std::array<StabilizerElement, 4> generators;
    for (int g = 0; g < 4; ++g) {
      StabilizerElement e;
      e.paulis = {Pauli::I, Pauli::I, Pauli::I, Pauli::I};
      e.sign = 1;
      for (int j = 1; j <= kN; ++j) {
        const Pauli p = gen[g][j - 1];
        if (p == Pauli::I) continue;
        const Gate1Q& u = ord.local_unitaries[static_cast<std::size_t>(j - 1)];
        const auto [cp, csign] = match_signed_pauli(u * pauli_gate(p) *
                                                    u.adjoint());
        const int pos = physical_position(ord.physical_of(j));
        e.paulis[static_cast<std::size_t>(pos - 1)] = cp;
        e.sign *= csign;
      }
      generators[static_cast<std::size_t>(g)] = e;
    }
    std::vector<StabilizerElement> out;
    out.reserve(16);
    for (unsigned mask = 0; mask < 16; ++mask) {
      StabilizerElement e;
      e.paulis = {Pauli::I, Pauli::I, Pauli::I, Pauli::I};
      e.sign = 1;
      for (int g = 0; g < 4; ++g) {
        if (mask & (1u << g)) {
          e = stabilizer_mul(e, generators[static_cast<std::size_t>(g)]);
        }
      }
      out.push_back(e);
    }
    return out;
  }();
  return group;
}

StateVector apply_stabilizer(const StabilizerElement& s, const StateVector& psi) {
  check_four(psi.n_qubits());
  StateVector out = psi;
  for (int q = 1; q <= kN; ++q) {
    const Pauli p = s.paulis[static_cast<std::size_t>(q - 1)];
    if (p == Pauli::I) continue;
    out = apply_1q(out, pauli_gate(p), q);
  }
  if (s.sign < 0) {
    std::vector<Complex> a(out.amplitudes());
    for (Complex& c : a) c = -c;
    out = StateVector::from_amplitudes(kN, std::move(a));
  }
  return out;
}

double stabilizer_expectation(const StabilizerElement& s, const DensityMatrix& rho) {
  check_four(rho.n_qubits());
  // tr(rho S) with S column-sparse: S|k> = phase_k |m(k)>.
  Complex total(0);
  for (std::size_t k = 0; k < kDim; ++k) {
    std::size_t m = k;
    Complex phase(1);
    for (int q = 1; q <= kN; ++q) {
      const std::size_t bit = std::size_t{1} << (kN - q);
      const bool b = (k & bit) != 0;
      switch (s.paulis[static_cast<std::size_t>(q - 1)]) {
        case Pauli::I: break;
        case Pauli::X: m ^= bit; break;
        case Pauli::Y:
          m ^= bit;
          phase *= b ? Complex(0, -1) : Complex(0, 1);
          break;
        case Pauli::Z:
          if (b) phase = -phase;
          break;
      }
    }
    total += phase * rho.at(k, m);
  }
  return double(s.sign) * total.real();
}

}  // namespace onewayqc
