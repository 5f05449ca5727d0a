#include "vine/sweep.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "oracle.hpp"
#include "vine/errors.hpp"
#include "vine/units.hpp"

namespace vine {
namespace {

SweepRequest straight_request() {
  SweepRequest req;
  req.pressure = {0.0, 10e3, 50};
  req.length = {0.0, 3.0, 50};
  return req;
}

std::size_t count_invert(const PhaseDiagram& d) {
  return static_cast<std::size_t>(std::count_if(d.cells.begin(), d.cells.end(), [](const auto& c) {
    return c.verdict == Verdict::Invert;
  }));
}

bool same_prediction(const BehaviorPrediction& a, const BehaviorPrediction& b) {
  return a.verdict == b.verdict && a.mode == b.mode && a.required_tension == b.required_tension &&
         a.limiting_force == b.limiting_force && a.margin == b.margin &&
         a.model_used == b.model_used && a.extrapolated == b.extrapolated &&
         a.model_extension == b.model_extension;
}

TEST(ClassifyGrid, StraightGridShape) {
  const auto d = classify_grid(straight_request());
  ASSERT_EQ(d.cells.size(), 2500u);
  EXPECT_EQ(d.model_version, kModelVersion);
  // Rows below P_min (1.23 kPa) cannot invert at all.
  for (std::size_t r = 0; r < d.rows(); ++r) {
    if (d.request.pressure.center(r) < min_inversion_pressure(d.request.body)) {
      for (std::size_t c = 0; c < d.cols(); ++c) {
        const auto& cell = d.at(r, c);
        EXPECT_EQ(cell.verdict, Verdict::Buckle);
        // Just under P_min a long body buckles axially before it crushes.
        const double pa = crushing_force(d.request.body, d.request.pressure.center(r));
        EXPECT_EQ(cell.mode, cell.limiting_force < pa ? FailureMode::AxialBuckle : FailureMode::Crush);
      }
    }
  }
}

TEST(ClassifyGrid, StraightTransitionCurvePassesReferenceLengths) {
  SweepRequest req = straight_request();
  req.pressure = {1.9e3, 2.1e3, 2};  // centers 1.95 and 2.05 kPa
  auto d = classify_grid(req);
  ASSERT_EQ(d.transition_curve.size(), 2u);
  const double l2 = 0.5 * (d.transition_curve[0].critical_length + d.transition_curve[1].critical_length);
  EXPECT_NEAR(l2, 2.39, 0.03);

  req.pressure = {9.9e3, 10.1e3, 2};
  d = classify_grid(req);
  const double l10 = 0.5 * (d.transition_curve[0].critical_length + d.transition_curve[1].critical_length);
  EXPECT_NEAR(l10, 1.28, 0.03);
}

TEST(ClassifyGrid, TransitionCurveMatchesBisection) {
  const auto d = classify_grid(straight_request());
  const oracle::Body ob;
  ASSERT_FALSE(d.transition_curve.empty());
  for (const auto& pt : d.transition_curve) {
    EXPECT_NEAR(pt.critical_length, oracle::straight_transition(ob, pt.pressure), 1e-6);
  }
}

TEST(ClassifyGrid, StraightTransitionDecreasesWithPressure) {
  const auto d = classify_grid(straight_request());
  for (std::size_t i = 1; i < d.transition_curve.size(); ++i) {
    EXPECT_LT(d.transition_curve[i].critical_length, d.transition_curve[i - 1].critical_length);
  }
}

TEST(ClassifyGrid, TighterCurvatureShrinksInvertRegion) {
  SweepRequest req = straight_request();
  std::size_t prev = count_invert(classify_grid(req));
  for (double radius : {4.55, 2.25, 0.72}) {
    req.curvature = 1.0 / radius;
    const std::size_t n = count_invert(classify_grid(req));
    EXPECT_LE(n, prev) << "radius " << radius;
    prev = n;
  }
}

TEST(ClassifyGrid, BelowMinimumPressureEverywhere) {
  SweepRequest req = straight_request();
  req.pressure = {0.0, 1.0e3, 10};
  for (double k : {0.0, 0.5}) {
    req.curvature = k;
    const auto d = classify_grid(req);
    EXPECT_TRUE(d.transition_curve.empty());
    for (const auto& c : d.cells) {
      EXPECT_EQ(c.verdict, Verdict::Buckle);
      EXPECT_EQ(c.mode, FailureMode::Crush);
    }
  }
}

TEST(ClassifyGrid, AgreesWithOracleScanOnRandomRequests) {
  std::mt19937_64 rng(71);
  std::uniform_real_distribution<double> kappa(0.0, 2.0), pmax(1e3, 12e3), lmax(0.2, 4.0),
      eff(0.0, 1.0), unit(0.0, 1.0);
  std::uniform_int_distribution<std::size_t> steps(1, 40);
  for (int i = 0; i < 100; ++i) {
    SweepRequest req;
    req.curvature = unit(rng) < 0.2 ? 0.0 : kappa(rng);
    const double p1 = pmax(rng);
    req.pressure = {p1 * 0.3 * unit(rng), p1, steps(rng)};
    req.length = {0.0, lmax(rng), steps(rng)};
    if (unit(rng) < 0.3) {
      req.device = DeviceSpec{};
      req.efficiency = eff(rng);
    }
    const auto fast = classify_grid(req);
    const auto slow = oracle_scan(req);
    EXPECT_TRUE(compare_verdicts(fast, slow).empty()) << "request " << i;
  }
}

TEST(ClassifyGrid, SerialAndParallelBitIdentical) {
  for (double k : {0.0, 1 / 2.25}) {
    SweepRequest req = straight_request();
    req.curvature = k;
    req.pressure.steps = 73;
    req.length.steps = 41;
    const auto s = classify_grid(req, Execution::Serial);
    const auto p = classify_grid(req, Execution::Parallel);
    ASSERT_EQ(s.cells.size(), p.cells.size());
    for (std::size_t i = 0; i < s.cells.size(); ++i) {
      EXPECT_TRUE(same_prediction(s.cells[i], p.cells[i])) << i;
    }
    ASSERT_EQ(s.transition_curve.size(), p.transition_curve.size());
    for (std::size_t i = 0; i < s.transition_curve.size(); ++i) {
      EXPECT_EQ(s.transition_curve[i].critical_length, p.transition_curve[i].critical_length);
    }
  }
}

TEST(ClassifyGrid, CellsMatchPointPredictions) {
  SweepRequest req = straight_request();
  req.curvature = 1 / 4.55;
  req.pressure.steps = 20;
  req.length.steps = 20;
  const auto d = classify_grid(req);
  for (std::size_t r = 0; r < d.rows(); ++r) {
    for (std::size_t c = 0; c < d.cols(); ++c) {
      const RobotState s{req.length.center(c), req.curvature, req.pressure.center(r)};
      const auto p = predict_behavior(req.body, s);
      EXPECT_EQ(d.at(r, c).verdict, p.verdict);
      EXPECT_EQ(d.at(r, c).mode, p.mode);
    }
  }
}

TEST(ClassifyGrid, SingleCellAndTwoByTwo) {
  SweepRequest req;
  req.pressure = {1.9e3, 2.1e3, 1};
  req.length = {0.9, 1.1, 1};
  const auto one = classify_grid(req);
  ASSERT_EQ(one.cells.size(), 1u);
  EXPECT_EQ(one.cells[0].verdict, Verdict::Invert);

  req.pressure.steps = 2;
  req.length.steps = 2;
  EXPECT_EQ(classify_grid(req).cells.size(), 4u);
}

TEST(ClassifyGrid, InvalidRequests) {
  SweepRequest req = straight_request();
  req.pressure = {5e3, 1e3, 10};
  EXPECT_THROW(classify_grid(req), ValidationError);
  req = straight_request();
  req.length.steps = 0;
  EXPECT_THROW(classify_grid(req), ValidationError);
  req = straight_request();
  req.curvature = -1.0;
  EXPECT_THROW(oracle_scan(req), ValidationError);
}

TEST(ClassifyGrid, InjectedSolverFaultDetected) {
  SweepRequest req = straight_request();
  const TransitionSolver biased = [](const BodySpec& b, double p, double k, double t) {
    auto g = governing_transition(b, p, k, t);
    if (g.transition.found()) g.transition.length *= 1.25;
    return g;
  };
  const auto faulty = classify_grid(req, Execution::Serial, biased);
  EXPECT_FALSE(compare_verdicts(faulty, oracle_scan(req)).empty());
}

TEST(CompareVerdicts, ShapeMismatch) {
  SweepRequest a = straight_request(), b = straight_request();
  b.length.steps = 10;
  EXPECT_THROW(compare_verdicts(classify_grid(a), classify_grid(b)), ValidationError);
}

TEST(EmitDiagram, CsvRows) {
  SweepRequest req;
  req.pressure = {0.0, 2e3, 2};
  req.length = {0.5, 1.5, 2};
  const auto csv = emit_diagram(classify_grid(req), DiagramFormat::Csv);
  std::istringstream in(csv);
  std::string line;
  std::vector<std::string> lines;
  while (std::getline(in, line)) lines.push_back(line);
  ASSERT_EQ(lines.size(), 5u);
  EXPECT_EQ(lines[0],
            "pressure_kpa,length_cm,verdict,mode,required_n,limit_n,margin_n,model,extrapolated");
  EXPECT_EQ(lines[1].substr(0, 13), "0.5,75,buckle");
  EXPECT_EQ(lines[3].substr(0, 13), "1.5,75,invert");
}

TEST(EmitDiagram, SvgDeterministic) {
  SweepRequest req = straight_request();
  req.curvature = 1 / 2.25;
  const auto a = emit_diagram(classify_grid(req, Execution::Serial), DiagramFormat::Svg);
  const auto b = emit_diagram(classify_grid(req, Execution::Parallel), DiagramFormat::Svg);
  EXPECT_EQ(a, b);
  EXPECT_EQ(a.rfind("<svg", 0), 0u);
  EXPECT_NE(a.find("</svg>"), std::string::npos);
  EXPECT_NE(a.find("Pressure (kPa)"), std::string::npos);
}

TEST(EmitDiagram, FormatNames) {
  EXPECT_EQ(parse_diagram_format("csv"), DiagramFormat::Csv);
  EXPECT_EQ(parse_diagram_format("svg"), DiagramFormat::Svg);
  EXPECT_THROW(parse_diagram_format("png"), ValidationError);
}

TEST(EmitTransitionCsv, OneRowPerFoundTransition) {
  SweepRequest req = straight_request();
  req.pressure = {0.0, 10e3, 10};
  const auto d = classify_grid(req);
  const auto csv = emit_transition_csv(d);
  EXPECT_EQ(csv.rfind("pressure_kpa,critical_length_cm\n", 0), 0u);
  EXPECT_EQ(static_cast<std::size_t>(std::count(csv.begin(), csv.end(), '\n')),
            d.transition_curve.size() + 1);
  // Rows at 0.5 kPa are below P_min and contribute nothing.
  EXPECT_EQ(d.transition_curve.size(), 9u);
}

}  // namespace
}  // namespace vine
