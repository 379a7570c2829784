#include <gtest/gtest.h>

#include "copolyap/synth_disc.hpp"
#include "test_helpers.hpp"

namespace copolyap {
namespace {

/// Coefficients of h in template variable order.
std::vector<double> template_values(const Poly& h) {
  std::vector<double> c;
  for (const Monomial& m : monomials_of_degree(h.nvars(), h.degree())) c.push_back(h.coefficient(m));
  return c;
}

/// Largest violation of the LP rows at z (negative slack).
template <class Values>
double max_violation(const LpProblem& lp, const Values& z) {
  double worst = 0.0;
  for (const auto& c : lp.constraints) {
    double lhs = 0.0;
    for (std::size_t k = 0; k < static_cast<std::size_t>(z.size()); ++k) lhs += c.row[k] * z[k];
    const double gap = c.relation == Relation::Equal ? std::abs(lhs - c.rhs) : c.rhs - lhs;
    worst = std::max(worst, gap);
  }
  return worst;
}

TEST(DiscAssemble, Level0QuadraticRowCount) {
  const ProblemSpec p = ProblemSpec::linear(testing::ex5_matrix());
  const disc::DiscTemplates t = disc::build_templates(p, 2, 0);
  const LpProblem lp = disc::assemble_constraints(t, initial_partition(standard_simplex(2)), 0.25);
  int h_rows = 0;
  int equalities = 0;
  for (const auto& c : lp.constraints) {
    if (c.relation == Relation::Equal) ++equalities;
    else if (c.rhs == 0.25) ++h_rows;
  }
  EXPECT_EQ(h_rows, 3);
  EXPECT_EQ(equalities, 1);
}

TEST(DiscAssemble, HRowValuesAreTensorEntries) {
  const ProblemSpec p = ProblemSpec::linear(testing::ex5_matrix());
  const disc::DiscTemplates t = disc::build_templates(p, 2, 0);
  const LpProblem lp = disc::assemble_constraints(t, initial_partition(standard_simplex(2)), 0.25);
  std::vector<double> values;
  const std::vector<double> z = template_values(testing::ex5_h());
  for (const auto& c : lp.constraints) {
    if (c.relation == Relation::GreaterEqual && c.rhs == 0.25) {
      double v = 0.0;
      for (std::size_t k = 0; k < z.size(); ++k) v += c.row[k] * z[k];
      values.push_back(v);
    }
  }
  std::sort(values.begin(), values.end());
  ASSERT_EQ(values.size(), 3u);
  EXPECT_DOUBLE_EQ(values[0], 0.5);
  EXPECT_DOUBLE_EQ(values[1], 1.0);
  EXPECT_DOUBLE_EQ(values[2], 1.0);
}

TEST(DiscAssemble, ReferenceCertificateFeasible) {
  struct Case {
    ProblemSpec problem;
    Poly h;
  };
  const std::vector<Case> cases = {{ProblemSpec::linear(testing::ex5_matrix()), testing::ex5_h()},
                                   {ProblemSpec::make(testing::ex6_field()), testing::ex6_h()}};
  for (const Case& c : cases) {
    const disc::DiscTemplates t = disc::build_templates(c.problem, c.h.degree(), 0);
    std::vector<double> z = template_values(c.h);
    double sum = 0.0;
    for (double v : z) sum += v;
    for (double& v : z) v /= sum;
    for (int level = 0; level <= 2; ++level) {
      const LpProblem lp = disc::assemble_constraints(t, partition_at_level(standard_simplex(2), level));
      EXPECT_LE(max_violation(lp, z), 1e-12) << "level " << level;
    }
  }
}

TEST(DiscAssemble, ZeroTemplateIsInfeasible) {
  const ProblemSpec p = ProblemSpec::linear(testing::ex5_matrix());
  const disc::DiscTemplates t = disc::build_templates(p, 2, 0);
  const LpProblem lp = disc::assemble_constraints(t, initial_partition(standard_simplex(2)));
  EXPECT_GT(max_violation(lp, std::vector<double>(t.num_vars, 0.0)), 0.5);
}

TEST(DiscAssemble, DimensionMismatch) {
  const ProblemSpec p = ProblemSpec::linear(testing::ex5_matrix());
  const disc::DiscTemplates t = disc::build_templates(p, 2, 0);
  EXPECT_THROW(disc::assemble_constraints(t, initial_partition(standard_simplex(3))), DimensionError);
  EXPECT_THROW(disc::build_templates(p, 2, 1), std::invalid_argument);
}

TEST(DiscAssemble, LevelMonotonicity) {
  // A solution feasible at level k stays feasible at level k + 1.
  const ProblemSpec p = ProblemSpec::make(testing::ex6_field());
  const disc::DiscTemplates t = disc::build_templates(p, 3, 0);
  int solved = 0;
  for (int level = 0; level < 4; ++level) {
    const LpOutcome out = solve(disc::assemble_constraints(t, partition_at_level(standard_simplex(2), level)));
    if (out.status != LpStatus::Feasible) continue;
    ++solved;
    const LpProblem finer = disc::assemble_constraints(t, partition_at_level(standard_simplex(2), level + 1));
    EXPECT_LE(max_violation(finer, out.solution), 1e-7) << "level " << level;
  }
  EXPECT_GT(solved, 0);
}

TEST(DiscOptions, Validation) {
  disc::DiscOptions o;
  EXPECT_NO_THROW(disc::validate(o));
  EXPECT_EQ(disc::max_level(o), 6);
  o.delta_min = 0.3;
  EXPECT_THROW(disc::validate(o), std::invalid_argument);
  o.delta_min = 1.0;
  EXPECT_EQ(disc::max_level(o), 0);
  o.margin = -1;
  EXPECT_THROW(disc::validate(o), std::invalid_argument);
}

TEST(DiscSynth, Ex5) {
  disc::DiscOptions o;
  o.d_min = 2;
  o.d_max = 4;
  o.delta_min = 1.0 / 16;
  const SynthesisResult res = disc::synthesize(ProblemSpec::linear(testing::ex5_matrix()), o);
  ASSERT_TRUE(res.found());
  const Certificate& c = *res.certificate;
  EXPECT_EQ(c.h.degree(), 2);
  EXPECT_EQ(c.r, 0);
  EXPECT_LE(std::get<DiscParams>(c.params).level, 4);
  EXPECT_EQ(c.report->overall, CheckStatus::Certified);
}

TEST(DiscSynth, Ex6Cubic) {
  disc::DiscOptions o;
  o.d_min = 3;
  o.d_max = 3;
  o.r_max = 1;
  o.delta_min = 1.0 / 16;
  const ProblemSpec p = ProblemSpec::make(testing::ex6_field());
  const SynthesisResult res = disc::synthesize(p, o);
  ASSERT_TRUE(res.found());
  EXPECT_EQ(res.certificate->h.degree(), 3);
  EXPECT_LE(std::get<DiscParams>(res.certificate->params).level, 4);
  // Independent re-check with a different sampling offset.
  VerifyBudget b;
  b.seed = 17;
  EXPECT_EQ(verify_full(p, *res.certificate, b).overall, CheckStatus::Certified);
}

TEST(DiscSynth, SignSplitModeFindsEx5) {
  disc::DiscOptions o;
  o.d_min = 2;
  o.d_max = 2;
  o.r_max = 0;
  o.delta_min = 1.0 / 16;
  o.mode = FaceMode::SignSplit;
  const SynthesisResult res = disc::synthesize(ProblemSpec::linear(testing::ex5_matrix()), o);
  ASSERT_TRUE(res.found());
  EXPECT_EQ(std::get<DiscParams>(res.certificate->params).mode, FaceMode::SignSplit);
}

TEST(DiscSynth, UnstableIsNotFound) {
  disc::DiscOptions o;
  o.d_max = 3;
  o.r_max = 1;
  o.delta_min = 1.0 / 8;
  const SynthesisResult res = disc::synthesize(ProblemSpec::linear(testing::ex2_matrix()), o);
  EXPECT_FALSE(res.found());
  EXPECT_FALSE(res.nodes.empty());
}

}  // namespace
}  // namespace copolyap
