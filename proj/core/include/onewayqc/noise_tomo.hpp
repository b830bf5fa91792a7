// White-noise modelling of the cluster resource, stabilizer-based state
// fidelity, Bloch-vector tomography of protocol outputs, and comparison
// against the bundled experimental reference table.
#pragma once

#include "onewayqc/protocols.hpp"

#include <optional>
#include <string>
#include <vector>

namespace onewayqc {

struct BlochVector {
  double x = 0.0, y = 0.0, z = 0.0;
  double norm() const;
  double dot(const BlochVector& o) const;
  BlochVector unit() const;  // throws on (near-)zero vectors
};

BlochVector bloch_from_state(const DensityMatrix& rho);  // single qubit
BlochVector bloch_from_state(const StateVector& psi);

// (1/16) sum of all stabilizer expectations = overlap with the ideal cluster.
double stabilizer_fidelity(const DensityMatrix& rho);

// rho(p) = p |C4><C4| + (1-p) 1/16.
struct WhiteNoiseModel {
  double p = 1.0;
  DensityMatrix cluster_state() const;
};

// Inverse of stabilizer_fidelity on the white-noise family:
// p = (F - 1/16) / (15/16).  F must lie in [1/16, 1].
WhiteNoiseModel calibrate_white_noise(double stabilizer_f);

// Identifies one row of the experimental tables: a protocol configuration
// plus the outcome branch.  Rotation branches are "s2 s3" ("00".."11");
// C-NOT branches are "s1 s4 c" with c the measured control output bit.
struct RowKey {
  std::string protocol;  // "rotation" | "cnot"
  OrderingName ordering = OrderingName::a;
  double alpha = 0.0;
  double beta = 0.0;                           // rotation
  CnotChoice o_choice = CnotChoice::Identity;  // cnot
  std::string branch;

  bool matches(const RowKey& o) const;
  std::string describe() const;
};

struct ReferenceRow {
  RowKey key;
  double fidelity = 0.0;
  double sigma = 0.0;
};

class ReferenceTable {
 public:
  explicit ReferenceTable(std::vector<ReferenceRow> rows);
  const std::vector<ReferenceRow>& rows() const { return rows_; }
  const ReferenceRow& lookup(const RowKey& key) const;  // throws if missing
  const ReferenceRow* find(const RowKey& key) const;    // nullptr if missing

 private:
  std::vector<ReferenceRow> rows_;
};

// Loads the versioned CSV (first line "# onewayqc-reference-v1").
ReferenceTable load_reference_table(const std::string& path);

// One simulated datum comparable to a reference row.
struct SimulatedEntry {
  RowKey key;
  double fidelity = 0.0;          // against the per-branch theory state
  double bloch_projection = 0.0;  // simulated Bloch onto the theory direction
  double probability = 0.0;       // branch weight (conditional for C-NOT rows)
};

// Expand a protocol result into reference-comparable entries: one for a
// rotation, one per theory-supported control outcome for a C-NOT.
std::vector<SimulatedEntry> entries_for(const ProtocolResult& result);

// Run the configuration a reference row describes on an ideal or white-noise
// cluster and return the matching entry.
SimulatedEntry simulate_reference_row(const ReferenceRow& row,
                                      std::optional<double> noise_p);

struct ComparisonRow {
  ReferenceRow ref;
  double simulated = 0.0;
  double delta = 0.0;  // simulated - reference
  double bloch_projection = 0.0;
};

std::vector<ComparisonRow> compare_to_reference(
    const std::vector<SimulatedEntry>& entries, const ReferenceTable& table);

}  // namespace onewayqc
