#pragma once

#include <string>

#include "antispec/antiunitary.hpp"
#include "antispec/classifier.hpp"
#include "antispec/khare_mandal.hpp"
#include "antispec/planted.hpp"
#include "antispec/types.hpp"

namespace antispec {

// JSON round-trip layer.  Numbers serialize with shortest round-trip decimal
// representation, so doubles survive save/load bit-exactly.  All writers are
// atomic (temporary file + rename).  Loaders throw InvalidInput on parse or
// schema violations.

// {"dim": n, "entries": [[re, im], ...]} row-major, n*n entries
void save_matrix(const CMatrix& m, const std::string& path);
CMatrix load_matrix(const std::string& path);

// {"label": str, "unitary_part": <matrix>}
void save_antiunitary(const AntiUnitaryOp& a, const std::string& path);
AntiUnitaryOp load_antiunitary(const std::string& path);

// {"seed": int, "blocks": [{"kind": str, "energy": [re, im], "omega_sq": [re, im]?}]}
void save_plan(const PlantedPlan& p, const std::string& path);
PlantedPlan load_plan(const std::string& path);

// {"multiplicities": {...}, "blocks": [...], "commutation_residual": r,
//  "unassigned": [...], "dim": n}
void save_report(const ClassificationReport& r, const std::string& path);
ClassificationReport load_report(const std::string& path);

// {"M": m, "zeta": z, "representation": str, "all_pass": bool,
//  "states": [{"name", "energy"}], "checks": [{"what", "measured", "bound", "pass"}]}
void save_km_report(const KMReport& r, const std::string& path);

// {"Z_c": value, "bracket": width}
void save_threshold(double z_c, double bracket, const std::string& path);

void write_text_atomic(const std::string& path, const std::string& content);

} // namespace antispec
