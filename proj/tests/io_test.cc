#include "pec/io.h"

#include <gtest/gtest.h>

#include "pec/quadtank_case.h"

namespace pec {
namespace {

using Eigen::MatrixXd;

ErrorCode CodeOf(const std::function<void()>& f) {
  try {
    f();
  } catch (const PecError& e) {
    return e.code();
  }
  ADD_FAILURE() << "no throw";
  return ErrorCode::kNonFinite;
}

GTEST_TEST(IoTest, ModelRoundTripIsExact) {
  ModelFile m = ModelFromCase(BuildCase());
  m.alpha_grid = {0.1, 0.2};
  const std::string text = DumpModel(m);
  const ModelFile back = ParseModel(text);
  EXPECT_EQ(back.plant.A, m.plant.A);
  EXPECT_EQ(back.plant.B, m.plant.B);
  EXPECT_EQ(back.base.Dc, m.base.Dc);
  EXPECT_EQ(back.L, m.L);
  EXPECT_EQ(back.bounds.W_v.matrix(), m.bounds.W_v.matrix());
  EXPECT_EQ(back.scenarios, m.scenarios);
  EXPECT_EQ(back.alpha_grid, m.alpha_grid);
  EXPECT_EQ(DumpModel(back), text);
}

GTEST_TEST(IoTest, ParseErrors) {
  EXPECT_EQ(CodeOf([] { ParseModel("{not json"); }), ErrorCode::kParse);
  EXPECT_EQ(CodeOf([] { ParseModel("{\"format\": \"pec-model\"}"); }),
            ErrorCode::kParse);
  EXPECT_EQ(CodeOf([] { ParseRealization("{\"format\": \"pec-model\"}"); }),
            ErrorCode::kParse);
  std::string text = DumpModel(ModelFromCase(BuildCase()));
  const auto pos = text.find("\"rows\": 4");
  ASSERT_NE(pos, std::string::npos);
  text.replace(pos, 9, "\"rows\": 5");
  EXPECT_EQ(CodeOf([&] { ParseModel(text); }), ErrorCode::kParse);
  try {
    ReadFile("/nonexistent/model.json");
    FAIL();
  } catch (const PecError& e) {
    EXPECT_NE(std::string(e.what()).find("/nonexistent/model.json"),
              std::string::npos);
  }
}

GTEST_TEST(IoTest, CertificateAndRealizationRoundTrip) {
  EllipsoidCertificate c;
  c.program = ProgramId::kDetectorErrorSet;
  c.P = SymMat(MatrixXd::Identity(3, 3) * 0.1);
  c.alpha = 0.3;
  c.beta = {{"beta_w", 0.25}};
  c.sensors = {1, 4};
  const EllipsoidCertificate cb = ParseCertificate(DumpCertificate(c));
  EXPECT_EQ(cb.program, c.program);
  EXPECT_EQ(cb.P.matrix(), c.P.matrix());
  EXPECT_EQ(cb.beta, c.beta);
  EXPECT_EQ(cb.sensors, c.sensors);

  RealizationFile r;
  r.sensors = {4};
  r.F = MatrixXd::Constant(2, 4, 1.0 / 3.0);
  r.Theta = r.F;
  r.realized = BuildCase().base;
  r.trace_base = 1.3;
  r.trace_opt = 1.2;
  r.Pi = SymMat::Identity(4);
  const RealizationFile rb = ParseRealization(DumpRealization(r));
  EXPECT_EQ(rb.F, r.F);
  EXPECT_EQ(rb.realized.Bc, r.realized.Bc);
  EXPECT_EQ(rb.trace_opt, r.trace_opt);
}

}  // namespace
}  // namespace pec
