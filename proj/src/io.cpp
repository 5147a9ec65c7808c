#include "antispec/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "antispec/errors.hpp"

namespace antispec {

namespace {

using nlohmann::json;

json complex_to_json(const Complex& z) { return json::array({z.real(), z.imag()}); }

Complex complex_from_json(const json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw InvalidInput("expected a [re, im] pair");
  return {j[0].get<double>(), j[1].get<double>()};
}

json matrix_to_json(const CMatrix& m) {
  if (m.rows() != m.cols()) throw InvalidInput("only square matrices serialize");
  json entries = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) entries.push_back(complex_to_json(m(r, c)));
  return json{{"dim", m.rows()}, {"entries", std::move(entries)}};
}

CMatrix matrix_from_json(const json& j) {
  if (!j.is_object() || !j.contains("dim") || !j.contains("entries"))
    throw InvalidInput("matrix JSON needs 'dim' and 'entries'");
  const auto n = j.at("dim").get<Eigen::Index>();
  const json& entries = j.at("entries");
  if (n < 1 || !entries.is_array() || static_cast<Eigen::Index>(entries.size()) != n * n)
    throw InvalidInput("matrix entry count does not match dim^2");
  CMatrix m(n, n);
  Eigen::Index k = 0;
  for (Eigen::Index r = 0; r < n; ++r)
    for (Eigen::Index c = 0; c < n; ++c) m(r, c) = complex_from_json(entries[k++]);
  return m;
}

json parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw InvalidInput("cannot parse '" + path + "': " + e.what());
  }
}

void dump_file(const json& j, const std::string& path) {
  write_text_atomic(path, j.dump(2) + "\n");
}

} // namespace

void write_text_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp~";
  {
    std::ofstream out(tmp, std::ios::trunc | std::ios::binary);
    if (!out) throw InvalidInput("cannot open '" + tmp + "' for writing");
    out << content;
    if (!out.good()) throw InvalidInput("failed while writing '" + tmp + "'");
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0)
    throw InvalidInput("cannot move temporary file onto '" + path + "'");
}

void save_matrix(const CMatrix& m, const std::string& path) { dump_file(matrix_to_json(m), path); }

CMatrix load_matrix(const std::string& path) { return matrix_from_json(parse_file(path)); }

void save_antiunitary(const AntiUnitaryOp& a, const std::string& path) {
  dump_file(json{{"label", a.label}, {"unitary_part", matrix_to_json(a.unitary_part)}}, path);
}

AntiUnitaryOp load_antiunitary(const std::string& path) {
  const json j = parse_file(path);
  if (!j.is_object() || !j.contains("unitary_part"))
    throw InvalidInput("anti-unitary JSON needs 'unitary_part'");
  const std::string label = j.value("label", std::string("A"));
  return AntiUnitaryOp(matrix_from_json(j.at("unitary_part")), label);
}

void save_plan(const PlantedPlan& p, const std::string& path) {
  json blocks = json::array();
  for (const PlantedBlockSpec& b : p.blocks) {
    json jb{{"kind", rep_kind_name(b.kind)}, {"energy", complex_to_json(b.energy)}};
    if (b.omega_sq) jb["omega_sq"] = complex_to_json(*b.omega_sq);
    blocks.push_back(std::move(jb));
  }
  dump_file(json{{"seed", p.seed}, {"blocks", std::move(blocks)}}, path);
}

PlantedPlan load_plan(const std::string& path) {
  const json j = parse_file(path);
  if (!j.is_object() || !j.contains("blocks") || !j.at("blocks").is_array())
    throw InvalidInput("plan JSON needs a 'blocks' array");
  PlantedPlan plan;
  plan.seed = j.value("seed", 0ULL);
  for (const json& jb : j.at("blocks")) {
    if (!jb.is_object() || !jb.contains("kind") || !jb.contains("energy"))
      throw InvalidInput("plan block needs 'kind' and 'energy'");
    PlantedBlockSpec spec;
    try {
      spec.kind = rep_kind_from_name(jb.at("kind").get<std::string>());
    } catch (const Error& e) {
      throw InvalidPlan(e.what());
    }
    spec.energy = complex_from_json(jb.at("energy"));
    if (jb.contains("omega_sq")) spec.omega_sq = complex_from_json(jb.at("omega_sq"));
    plan.blocks.push_back(spec);
  }
  return plan;
}

void save_report(const ClassificationReport& r, const std::string& path) {
  json blocks = json::array();
  for (const RepBlock& b : r.blocks) {
    json energies = json::array();
    for (const Complex& e : b.energies) energies.push_back(complex_to_json(e));
    blocks.push_back(json{{"kind", rep_kind_name(b.kind)},
                          {"omega_sq", complex_to_json(b.omega_sq)},
                          {"omega", complex_to_json(b.omega)},
                          {"energies", std::move(energies)},
                          {"state_indices", b.state_indices},
                          {"residuals",
                           {{"proportionality", b.residuals.proportionality},
                            {"flip", b.residuals.flip},
                            {"omega", b.residuals.omega}}}});
  }
  json unassigned = json::array();
  for (const UnassignedState& u : r.unassigned)
    unassigned.push_back(json{{"state_index", u.state_index}, {"reason", u.reason}});
  dump_file(json{{"multiplicities",
                  {{"n_star", r.multiplicities.n_star},
                   {"n_minus", r.multiplicities.n_minus},
                   {"n_plus", r.multiplicities.n_plus},
                   {"n_plus_1d", r.multiplicities.n_plus_1d}}},
                 {"blocks", std::move(blocks)},
                 {"commutation_residual", r.commutation_residual},
                 {"unassigned", std::move(unassigned)},
                 {"dim", r.dim}},
            path);
}

ClassificationReport load_report(const std::string& path) {
  const json j = parse_file(path);
  if (!j.is_object() || !j.contains("blocks") || !j.contains("multiplicities"))
    throw InvalidInput("report JSON needs 'blocks' and 'multiplicities'");
  ClassificationReport r;
  const json& m = j.at("multiplicities");
  r.multiplicities.n_star = m.value("n_star", 0);
  r.multiplicities.n_minus = m.value("n_minus", 0);
  r.multiplicities.n_plus = m.value("n_plus", 0);
  r.multiplicities.n_plus_1d = m.value("n_plus_1d", 0);
  r.commutation_residual = j.value("commutation_residual", 0.0);
  r.dim = j.value("dim", 0);
  for (const json& jb : j.at("blocks")) {
    RepBlock b;
    b.kind = rep_kind_from_name(jb.at("kind").get<std::string>());
    b.omega_sq = complex_from_json(jb.at("omega_sq"));
    b.omega = complex_from_json(jb.at("omega"));
    for (const json& je : jb.at("energies")) b.energies.push_back(complex_from_json(je));
    b.state_indices = jb.at("state_indices").get<std::vector<int>>();
    if (jb.contains("residuals")) {
      const json& res = jb.at("residuals");
      b.residuals.proportionality = res.value("proportionality", 0.0);
      b.residuals.flip = res.value("flip", 0.0);
      b.residuals.omega = res.value("omega", 0.0);
    }
    r.blocks.push_back(std::move(b));
  }
  if (j.contains("unassigned"))
    for (const json& ju : j.at("unassigned"))
      r.unassigned.push_back({ju.value("state_index", -1), ju.value("reason", std::string())});
  return r;
}

void save_km_report(const KMReport& r, const std::string& path) {
  json states = json::array();
  for (const KMState& s : r.states)
    states.push_back(json{{"name", s.name}, {"energy", complex_to_json(s.energy)}});
  json checks = json::array();
  for (const KMCheck& c : r.checks)
    checks.push_back(json{
        {"what", c.what}, {"measured", c.measured}, {"bound", c.bound}, {"pass", c.pass}});
  dump_file(json{{"M", r.M},
                 {"zeta", r.zeta},
                 {"representation", r.representation},
                 {"all_pass", r.all_pass},
                 {"states", std::move(states)},
                 {"checks", std::move(checks)}},
            path);
}

void save_threshold(double z_c, double bracket, const std::string& path) {
  dump_file(json{{"Z_c", z_c}, {"bracket", bracket}}, path);
}

} // namespace antispec
