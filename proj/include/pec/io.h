#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "pec/model.h"
#include "pec/quadtank_case.h"
#include "pec/set_analysis.h"
#include "pec/synthesis.h"

namespace pec {

// Everything a run needs. Matrices are stored as
// {"rows": r, "cols": c, "data": [row-major]}.
struct ModelFile {
  LtiPlant plant;
  BaseController base;
  Eigen::MatrixXd L;
  DisturbanceBounds bounds;
  std::vector<std::vector<int>> scenarios;
  // Empty means the library defaults.
  std::vector<double> alpha_grid;
  std::vector<double> alpha_r_grid;
};

ModelFile ModelFromCase(const QuadTankCase& qc);

// Parse errors and failed validation both throw; parse problems use
// ErrorCode::kParse.
ModelFile ParseModel(const std::string& text);
std::string DumpModel(const ModelFile& model);

ModelFile LoadModel(const std::string& path);
void SaveModel(const ModelFile& model, const std::string& path);

std::string DumpCertificate(const EllipsoidCertificate& cert);
EllipsoidCertificate ParseCertificate(const std::string& text);

// Residual set: the error certificate plus Pi.
std::string DumpResidualSet(const ResidualSetResult& rs);
ResidualSetResult ParseResidualSet(const std::string& text);

struct RealizationFile {
  std::vector<int> sensors;
  Eigen::MatrixXd F;
  Eigen::MatrixXd Theta;
  BaseController realized;
  double trace_base{0.0};
  double trace_opt{0.0};
  double alpha{0.0};
  double alpha_base{0.0};
  SymMat Pi;  // detector threshold used during synthesis
};

RealizationFile RealizationFromResult(const SynthesisResult& r,
                                      const SymMat& pi);
std::string DumpRealization(const RealizationFile& r);
RealizationFile ParseRealization(const std::string& text);

// Whole-file helpers. A missing or unreadable file throws kParse with the
// path in the message.
std::string ReadFile(const std::string& path);
void WriteFile(const std::string& path, const std::string& text);

}  // namespace pec
