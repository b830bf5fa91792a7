// Construction of the two-photon four-qubit cluster resource: the
// hyperentangled source state, the controlled-phase step that turns it into
// the cluster state, the three logical qubit orderings with their local
// unitaries, and the sixteen-element stabilizer group.
#pragma once

#include "onewayqc/qstate.hpp"

#include <array>
#include <string>
#include <string_view>
#include <vector>

namespace onewayqc {

// Physical register order is (momentum A, momentum B, polarization A,
// polarization B); encodings are l->0 / r->1 and H->0 / V->1.
enum class PhysicalQubit { kA = 0, kB = 1, piA = 2, piB = 3 };

constexpr int physical_position(PhysicalQubit q) {
  return static_cast<int>(q) + 1;
}
std::string_view to_string(PhysicalQubit q);
bool is_momentum(PhysicalQubit q);

enum class OrderingName { a, b, c };
std::string_view to_string(OrderingName name);
OrderingName ordering_from_string(std::string_view s);

// A logical ordering: logical qubit j (1..4, linear cluster order) lives on
// physical qubit logical_to_physical[j-1], up to the local unitary
// local_unitaries[j-1] (cluster = permuted (U1..U4) |linear cluster>).
struct Ordering {
  OrderingName name;
  std::array<PhysicalQubit, 4> logical_to_physical;
  std::array<Gate1Q, 4> local_unitaries;

  PhysicalQubit physical_of(int logical) const;
  int logical_of(PhysicalQubit q) const;
};

const Ordering& ordering(OrderingName name);

// |Phi+> on the polarization pair tensored with |psi-> on the momentum pair.
StateVector build_hyperentangled();
// The four-term cluster state, written directly in the physical register.
StateVector build_c4();
// Controlled-phase between the momentum and polarization qubits of photon A,
// applied to the hyperentangled state; equals build_c4() exactly.
StateVector build_cluster_via_cp();
// CP chain 1-2, 2-3, 3-4 on |++++>, in linear (logical) order.
StateVector build_linear_cluster();

// Re-express a logical-order state in the physical register (apply the local
// unitaries, then permute logical slot j to its physical position) and back.
StateVector to_physical_frame(const StateVector& logical, const Ordering& ord);
StateVector to_logical_frame(const StateVector& physical, const Ordering& ord);
DensityMatrix to_logical_frame(const DensityMatrix& physical, const Ordering& ord);

enum class Pauli { I, X, Y, Z };
std::string_view to_string(Pauli p);

// A signed four-qubit Pauli operator in physical register order.
struct StabilizerElement {
  std::array<Pauli, 4> paulis;
  int sign = 1;  // +1 or -1
  std::string label() const;  // e.g. "-XXZI"
};

// The full stabilizer group of the cluster state: all products of the four
// conjugated linear-cluster generators.  Element 0 is the identity.
const std::vector<StabilizerElement>& stabilizer_group();

StateVector apply_stabilizer(const StabilizerElement& s, const StateVector& psi);
double stabilizer_expectation(const StabilizerElement& s, const DensityMatrix& rho);

}  // namespace onewayqc
