#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "antispec/antiunitary.hpp"
#include "antispec/classifier.hpp"
#include "antispec/types.hpp"

namespace antispec {

// One irreducible block to plant: the kind, its representative energy, and
// for the Gamma_star kinds the non-real unimodular Omega to realize.
struct PlantedBlockSpec {
  RepKind kind = RepKind::GammaPlus1D;
  Complex energy;
  std::optional<Complex> omega_sq;
};

struct PlantedPlan {
  std::uint64_t seed = 0;
  std::vector<PlantedBlockSpec> blocks;
};

struct PlantedModel {
  CMatrix hamiltonian;
  AntiUnitaryOp symmetry;
  CMatrix basis;  // the random unitary used to hide the block structure
  ClassificationReport expected;
};

// Validates and normalizes a plan. Pair kinds get Im(energy) > 0 (the block
// is conjugated otherwise), scalar and degenerate kinds must carry a real
// energy, Gamma_star kinds need a unimodular omega_sq away from +-1, and the
// energies of distinct blocks must either coincide exactly (deliberately
// merged clusters) or be separated by at least 1e-6. Violations throw
// InvalidPlan.
PlantedPlan canonicalize_plan(const PlantedPlan& plan);

// Builds a dense model realizing the plan: exact block frames assembled on
// the diagonal, then conjugated by a seeded random unitary V, i.e.
// H -> V H V^dag and U -> V U V^T (the transport rule for the unitary part
// of an anti-unitary operator). The expected report lists what classify()
// should recover; a planted Gamma_plus_deg block appears there as two
// gamma_plus singlets, which is its canonical reduction at real energy.
PlantedModel build_planted(const PlantedPlan& plan);

// Random well-separated plan with 1..max_blocks blocks, for stress tests.
PlantedPlan random_plan(std::mt19937_64& rng, int max_blocks = 6);

// True when the actual classification recovers the expected blocks: equal
// dimension and multiplicities, nothing unassigned, and a one-to-one match
// of (kind, energies, omega_sq, omega) with energies compared within tol and
// flip data within max(1e-6, 100*tol). On failure *why, if non-null, gets a
// short explanation.
bool report_matches(const ClassificationReport& actual, const ClassificationReport& expected,
                    double tol, std::string* why = nullptr);

}  // namespace antispec
