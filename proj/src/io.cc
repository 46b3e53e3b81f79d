#include "pec/io.h"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace pec {

using nlohmann::json;

namespace {

[[noreturn]] void Fail(const std::string& what) {
  throw PecError(ErrorCode::kParse, what);
}

json MatToJson(const Eigen::MatrixXd& m) {
  std::vector<double> data;
  data.reserve(m.size());
  for (int i = 0; i < m.rows(); ++i) {
    for (int j = 0; j < m.cols(); ++j) data.push_back(m(i, j));
  }
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"data", data}};
}

const json& Field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    Fail(std::string("missing field '") + key + "'");
  }
  return j.at(key);
}

Eigen::MatrixXd MatFromJson(const json& j, const char* key) {
  const json& m = Field(j, key);
  try {
    const int r = m.at("rows").get<int>();
    const int c = m.at("cols").get<int>();
    const auto data = m.at("data").get<std::vector<double>>();
    if (r < 0 || c < 0 || static_cast<size_t>(r) * c != data.size()) {
      Fail(std::string("matrix '") + key + "': " + std::to_string(r) + "x" +
           std::to_string(c) + " does not match " +
           std::to_string(data.size()) + " entries");
    }
    Eigen::MatrixXd out(r, c);
    for (int i = 0; i < r; ++i) {
      for (int k = 0; k < c; ++k) out(i, k) = data[i * c + k];
    }
    return out;
  } catch (const json::exception& e) {
    Fail(std::string("matrix '") + key + "': " + e.what());
  }
}

SymMat SymFromJson(const json& j, const char* key) {
  return SymMat(MatFromJson(j, key));
}

template <typename T>
T Get(const json& j, const char* key) {
  try {
    return Field(j, key).get<T>();
  } catch (const json::exception& e) {
    Fail(std::string("field '") + key + "': " + e.what());
  }
}

json Parse(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    Fail(e.what());
  }
}

void CheckFormat(const json& j, const char* format) {
  if (Get<std::string>(j, "format") != format) {
    Fail(std::string("expected format '") + format + "'");
  }
}

json ControllerToJson(const BaseController& k) {
  return {{"Ac", MatToJson(k.Ac)},
          {"Bc", MatToJson(k.Bc)},
          {"Cc", MatToJson(k.Cc)},
          {"Dc", MatToJson(k.Dc)}};
}

BaseController ControllerFromJson(const json& j) {
  return {MatFromJson(j, "Ac"), MatFromJson(j, "Bc"), MatFromJson(j, "Cc"),
          MatFromJson(j, "Dc")};
}

json CertToJson(const EllipsoidCertificate& c) {
  return {{"program", ProgramName(c.program)},
          {"P", MatToJson(c.P.matrix())},
          {"alpha", c.alpha},
          {"beta", c.beta},
          {"objective", c.objective},
          {"min_certificate", c.min_certificate},
          {"sensors", c.sensors}};
}

EllipsoidCertificate CertFromJson(const json& j) {
  EllipsoidCertificate c;
  const std::string name = Get<std::string>(j, "program");
  bool known = false;
  for (ProgramId id : {ProgramId::kResidualSet, ProgramId::kDetectorErrorSet,
                       ProgramId::kClosedLoopSet}) {
    if (name == ProgramName(id)) {
      c.program = id;
      known = true;
    }
  }
  if (!known) Fail("unknown program '" + name + "'");
  c.P = SymFromJson(j, "P");
  c.alpha = Get<double>(j, "alpha");
  c.beta = Get<std::map<std::string, double>>(j, "beta");
  c.objective = Get<double>(j, "objective");
  c.min_certificate = Get<double>(j, "min_certificate");
  c.sensors = Get<std::vector<int>>(j, "sensors");
  return c;
}

}  // namespace

ModelFile ModelFromCase(const QuadTankCase& qc) {
  ModelFile m;
  m.plant = qc.plant;
  m.base = qc.base;
  m.L = qc.L;
  m.bounds = qc.bounds;
  for (const AttackScenario& s : qc.scenarios) m.scenarios.push_back(s.sensors);
  return m;
}

std::string DumpModel(const ModelFile& m) {
  json j;
  j["format"] = "pec-model";
  j["plant"] = {{"A", MatToJson(m.plant.A)},
                {"B", MatToJson(m.plant.B)},
                {"C", MatToJson(m.plant.C)},
                {"G", MatToJson(m.plant.G)},
                {"H", MatToJson(m.plant.H)}};
  j["controller"] = ControllerToJson(m.base);
  j["detector"] = {{"L", MatToJson(m.L)}};
  j["bounds"] = {{"W_w", MatToJson(m.bounds.W_w.matrix())},
                 {"W_v", MatToJson(m.bounds.W_v.matrix())}};
  j["scenarios"] = m.scenarios;
  j["alpha_grid"] = m.alpha_grid;
  j["alpha_r_grid"] = m.alpha_r_grid;
  return j.dump(2) + "\n";
}

ModelFile ParseModel(const std::string& text) {
  const json j = Parse(text);
  CheckFormat(j, "pec-model");
  ModelFile m;
  const json& p = Field(j, "plant");
  m.plant = MakePlant(MatFromJson(p, "A"), MatFromJson(p, "B"),
                      MatFromJson(p, "C"), MatFromJson(p, "G"),
                      MatFromJson(p, "H"));
  const BaseController k = ControllerFromJson(Field(j, "controller"));
  m.base = MakeController(m.plant, k.Ac, k.Bc, k.Cc, k.Dc);
  m.L = MatFromJson(Field(j, "detector"), "L");
  if (m.L.rows() != m.plant.nx() || m.L.cols() != m.plant.ny()) {
    throw PecError(ErrorCode::kDimensionMismatch, "detector gain L");
  }
  CheckFinite(m.L, "L");
  const json& b = Field(j, "bounds");
  m.bounds = MakeBounds(SymFromJson(b, "W_w"), SymFromJson(b, "W_v"));
  if (m.bounds.W_w.dim() != m.plant.nw() || m.bounds.W_v.dim() != m.plant.nv()) {
    throw PecError(ErrorCode::kDimensionMismatch, "bound dimensions");
  }
  m.scenarios = Get<std::vector<std::vector<int>>>(j, "scenarios");
  for (const auto& s : m.scenarios) MakeScenario(m.plant.ny(), s);
  if (j.contains("alpha_grid")) {
    m.alpha_grid = Get<std::vector<double>>(j, "alpha_grid");
  }
  if (j.contains("alpha_r_grid")) {
    m.alpha_r_grid = Get<std::vector<double>>(j, "alpha_r_grid");
  }
  return m;
}

ModelFile LoadModel(const std::string& path) {
  return ParseModel(ReadFile(path));
}

void SaveModel(const ModelFile& model, const std::string& path) {
  WriteFile(path, DumpModel(model));
}

std::string DumpCertificate(const EllipsoidCertificate& cert) {
  json j = CertToJson(cert);
  j["format"] = "pec-certificate";
  return j.dump(2) + "\n";
}

EllipsoidCertificate ParseCertificate(const std::string& text) {
  const json j = Parse(text);
  CheckFormat(j, "pec-certificate");
  return CertFromJson(j);
}

std::string DumpResidualSet(const ResidualSetResult& rs) {
  json j;
  j["format"] = "pec-residual-set";
  j["error"] = CertToJson(rs.Pe);
  j["Pi"] = MatToJson(rs.Pi.matrix());
  j["alpha_e"] = rs.alpha_e;
  j["alpha_r"] = rs.alpha_r;
  j["neg_logdet_pe"] = rs.neg_logdet_pe;
  j["neg_logdet_pi"] = rs.neg_logdet_pi;
  j["objective"] = rs.objective;
  return j.dump(2) + "\n";
}

ResidualSetResult ParseResidualSet(const std::string& text) {
  const json j = Parse(text);
  CheckFormat(j, "pec-residual-set");
  ResidualSetResult rs;
  rs.Pe = CertFromJson(Field(j, "error"));
  rs.Pi = SymFromJson(j, "Pi");
  rs.alpha_e = Get<double>(j, "alpha_e");
  rs.alpha_r = Get<double>(j, "alpha_r");
  rs.neg_logdet_pe = Get<double>(j, "neg_logdet_pe");
  rs.neg_logdet_pi = Get<double>(j, "neg_logdet_pi");
  rs.objective = Get<double>(j, "objective");
  return rs;
}

RealizationFile RealizationFromResult(const SynthesisResult& r,
                                      const SymMat& pi) {
  RealizationFile f;
  f.sensors = r.sensors;
  f.F = r.F_star;
  f.Theta = r.Theta;
  f.realized = r.realization.realized;
  f.trace_base = r.trace_base;
  f.trace_opt = r.trace_opt;
  f.alpha = r.alpha;
  f.alpha_base = r.alpha_base;
  f.Pi = pi;
  return f;
}

std::string DumpRealization(const RealizationFile& r) {
  json j;
  j["format"] = "pec-realization";
  j["sensors"] = r.sensors;
  j["F"] = MatToJson(r.F);
  j["Theta"] = MatToJson(r.Theta);
  j["controller"] = ControllerToJson(r.realized);
  j["trace_base"] = r.trace_base;
  j["trace_opt"] = r.trace_opt;
  j["alpha"] = r.alpha;
  j["alpha_base"] = r.alpha_base;
  j["Pi"] = MatToJson(r.Pi.matrix());
  return j.dump(2) + "\n";
}

RealizationFile ParseRealization(const std::string& text) {
  const json j = Parse(text);
  CheckFormat(j, "pec-realization");
  RealizationFile r;
  r.sensors = Get<std::vector<int>>(j, "sensors");
  r.F = MatFromJson(j, "F");
  r.Theta = MatFromJson(j, "Theta");
  r.realized = ControllerFromJson(Field(j, "controller"));
  r.trace_base = Get<double>(j, "trace_base");
  r.trace_opt = Get<double>(j, "trace_opt");
  r.alpha = Get<double>(j, "alpha");
  r.alpha_base = Get<double>(j, "alpha_base");
  r.Pi = SymFromJson(j, "Pi");
  return r;
}

std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) Fail("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void WriteFile(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) Fail("cannot write '" + path + "'");
  out << text;
  if (!out) Fail("write failed for '" + path + "'");
}

}  // namespace pec
