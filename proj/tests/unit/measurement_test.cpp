// Measurement operators, collapse, and sample partitions. The dense
// checks run on an 8-point grid where every matrix product can be done
// by hand loops in the test itself.

#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include <twotime/errors.hpp>
#include <twotime/measurement.hpp>
#include <twotime/partition.hpp>
#include <twotime/state.hpp>

using namespace twotime;

namespace {

PositionGrid wide_grid() { return PositionGrid::make(-16.0, 16.0, 512); }

// Eight cells of width 1 on [0, 8): the smallest legal grid, used where
// expected matrices are written out by hand.
PositionGrid tiny_grid() { return PositionGrid::make(0.0, 8.0, 8); }

}  // namespace

TEST_CASE("sharp operator: exact 0/1 indicator of a half-open cell") {
  const PositionGrid g = tiny_grid();
  const MeasurementOperator m =
      make_measurement_operator(g, OperatorKind::SharpInterval, 3.5, 3.0);  // [2, 5)
  for (int k = 0; k < 8; ++k) {
    const double expected = (k >= 2 && k < 5) ? 1.0 : 0.0;
    CHECK(m.diagonal()(k) == expected);
  }
  SUBCASE("idempotent") {
    for (int k = 0; k < 8; ++k) {
      CHECK(m.diagonal()(k) * m.diagonal()(k) == m.diagonal()(k));
    }
  }
  SUBCASE("boundary points belong to the right-hand cell") {
    const MeasurementOperator left =
        make_measurement_operator(g, OperatorKind::SharpInterval, 1.0, 2.0);  // [0, 2)
    CHECK(left.diagonal()(1) == 1.0);
    CHECK(left.diagonal()(2) == 0.0);  // x = 2 belongs to [2, 5)
  }
}

TEST_CASE("sharp operator: full-width cell is the identity") {
  const PositionGrid g = wide_grid();
  const MeasurementOperator all =
      make_measurement_operator(g, OperatorKind::SharpInterval, 0.0, g.width());
  CHECK(all.diagonal().minCoeff() == 1.0);
  CHECK(all.diagonal().maxCoeff() == 1.0);
  const PureState psi = make_gaussian_state(g, 1.0, 0.7);
  CHECK(std::abs(all.weight(psi) - 1.0) <= 1e-12);
  CHECK(std::abs(all.weight(DensityMatrix::from_pure(psi)) - 1.0) <= 1e-12);
}

TEST_CASE("sharp operator: adjacent cells are disjoint, halves sum to the whole") {
  const PositionGrid g = wide_grid();
  const double delta = 1.5;
  const MeasurementOperator left =
      make_measurement_operator(g, OperatorKind::SharpInterval, -delta / 2.0, delta);
  const MeasurementOperator right =
      make_measurement_operator(g, OperatorKind::SharpInterval, delta / 2.0, delta);
  const MeasurementOperator both =
      make_measurement_operator(g, OperatorKind::SharpInterval, 0.0, 2.0 * delta);
  for (int k = 0; k < g.n_points; ++k) {
    CHECK(left.diagonal()(k) * right.diagonal()(k) == 0.0);
    CHECK(left.diagonal()(k) + right.diagonal()(k) == both.diagonal()(k));
  }
}

TEST_CASE("smeared operator: unnormalized Gaussian dot response") {
  const PositionGrid g = wide_grid();
  const double x0 = 1.25, delta = 0.5;
  const MeasurementOperator m =
      make_measurement_operator(g, OperatorKind::GaussianSmeared, x0, delta);
  for (int k = 0; k < g.n_points; k += 37) {
    const double x = g.x(k);
    const double expected = std::exp(-(x - x0) * (x - x0) / (2.0 * delta * delta));
    CHECK(std::abs(m.diagonal()(k) - expected) <= 1e-15);
  }
  // Sup norm 1 at the center, not idempotent anywhere else.
  CHECK(m.diagonal().maxCoeff() == doctest::Approx(1.0).epsilon(1e-12));

  SUBCASE("weight is Tr(M rho M), quadratic in the response") {
    const PureState psi = make_gaussian_state(g, 1.0, 0.0);
    double by_hand = 0.0;
    for (int k = 0; k < g.n_points; ++k) {
      by_hand += m.diagonal()(k) * m.diagonal()(k) * std::norm(psi.amplitudes()(k)) * g.dx;
    }
    CHECK(std::abs(m.weight(psi) - by_hand) <= 1e-14);
    CHECK(std::abs(m.weight(DensityMatrix::from_pure(psi)) - by_hand) <= 1e-12);
  }
}

TEST_CASE("measurement operator: construction guards") {
  const PositionGrid g = wide_grid();  // dx = 1/16
  CHECK_THROWS_AS(
      make_measurement_operator(g, OperatorKind::SharpInterval, 0.0, 0.05),
      ResolutionBelowGrid);  // below the two-point floor
  CHECK_THROWS_AS(make_measurement_operator(g, OperatorKind::SharpInterval, 16.0, 1.0),
                  OutOfRange);
  CHECK_THROWS_AS(make_measurement_operator(g, OperatorKind::GaussianSmeared, -17.0, 1.0),
                  OutOfRange);
}

TEST_CASE("merge_operators: element-wise sum of cell responses") {
  const PositionGrid g = wide_grid();
  const MeasurementOperator a =
      make_measurement_operator(g, OperatorKind::SharpInterval, -1.0, 2.0);
  const MeasurementOperator b =
      make_measurement_operator(g, OperatorKind::SharpInterval, 2.0, 2.0);
  const MeasurementOperator merged = merge_operators({a, b});
  for (int k = 0; k < g.n_points; ++k) {
    CHECK(merged.diagonal()(k) == a.diagonal()(k) + b.diagonal()(k));
  }
  CHECK_THROWS_AS(merge_operators({}), InvalidArgument);
}

TEST_CASE("collapse: identity operator leaves the state untouched") {
  const PositionGrid g = wide_grid();
  const PureState psi = make_gaussian_state(g, 1.0, 0.4);
  const MeasurementOperator all =
      make_measurement_operator(g, OperatorKind::SharpInterval, 0.0, g.width());

  const auto [post, weight] = collapse(psi, all);
  CHECK(std::abs(weight - 1.0) <= 1e-12);
  CHECK((post.amplitudes() - psi.amplitudes()).cwiseAbs().maxCoeff() <= 1e-14);

  const auto [post_rho, weight_rho] = collapse(DensityMatrix::from_pure(psi), all);
  CHECK(std::abs(weight_rho - 1.0) <= 1e-12);
  CHECK((post_rho.elements() - DensityMatrix::from_pure(psi).elements())
            .cwiseAbs()
            .maxCoeff() <= 1e-14);
}

TEST_CASE("collapse: impossible outcome after a first collapse throws") {
  const PositionGrid g = wide_grid();
  const PureState psi = make_gaussian_state(g, 1.0, 0.0);
  const MeasurementOperator left =
      make_measurement_operator(g, OperatorKind::SharpInterval, -8.0, 16.0);  // x < 0
  const MeasurementOperator right =
      make_measurement_operator(g, OperatorKind::SharpInterval, 8.0, 16.0);  // x >= 0

  const auto [post, weight] = collapse(psi, left);
  // Half of the mass minus half a cell at the peak: the grid point at
  // x = 0 belongs to the right-hand operator under the half-open rule.
  const double peak_density = 1.0 / std::sqrt(M_PI);  // |psi(0)|^2 for sigma = 1
  CHECK(weight == doctest::Approx(0.5 - 0.5 * peak_density * g.dx).epsilon(1e-3));
  CHECK_THROWS_AS(collapse(post, right), ZeroWeightOutcome);
}

TEST_CASE("collapse: matches hand matrix arithmetic on the 8-point grid") {
  const PositionGrid g = tiny_grid();
  Eigen::VectorXcd amp(8);
  amp << Complex(1, 0), Complex(1, 0), Complex(0, 2), Complex(2, -1), Complex(0.5, 0.5),
      Complex(-1, 0), Complex(0, -1), Complex(1, 1);
  const PureState psi(g, amp);
  const DensityMatrix rho = DensityMatrix::from_pure(psi);
  const MeasurementOperator m =
      make_measurement_operator(g, OperatorKind::SharpInterval, 3.5, 3.0);  // [2, 5)

  // Hand evaluation: w = sum_k M_k^2 rho_kk dx; post = M rho M / w.
  double w = 0.0;
  for (int k = 0; k < 8; ++k) {
    w += m.diagonal()(k) * m.diagonal()(k) * rho.elements()(k, k).real() * g.dx;
  }
  Eigen::MatrixXcd post_hand(8, 8);
  for (int r = 0; r < 8; ++r) {
    for (int c = 0; c < 8; ++c) {
      post_hand(r, c) = m.diagonal()(r) * rho.elements()(r, c) * m.diagonal()(c) / w;
    }
  }

  const auto [post, weight] = collapse(rho, m);
  CHECK(std::abs(weight - w) <= 1e-15);
  CHECK((post.elements() - post_hand).cwiseAbs().maxCoeff() <= 1e-13);
  // Collapse output is again a valid state.
  CHECK(std::abs(post.trace() - 1.0) <= 1e-12);
  CHECK(post.hermiticity_defect() <= 1e-13);
  CHECK(post.smallest_eigenvalue() >= -1e-12);

  SUBCASE("pure-state path gives the matching vector update") {
    const auto [post_psi, weight_psi] = collapse(psi, m);
    CHECK(std::abs(weight_psi - w) <= 1e-15);
    const DensityMatrix lifted = DensityMatrix::from_pure(post_psi);
    CHECK((lifted.elements() - post_hand).cwiseAbs().maxCoeff() <= 1e-13);
  }
}

TEST_CASE("partition: cells tile each interval exactly") {
  const PositionGrid g = wide_grid();
  const SamplePartition part = SamplePartition::build(
      g, 1.5, {SampleSet{"A", {{-3.0, 0.0}}}, SampleSet{"B", {{0.0, 3.0}, {4.5, 7.5}}}});

  CHECK(part.set_count() == 2);
  CHECK(part.cells(0).size() == 2);
  CHECK(part.cells(1).size() == 4);
  CHECK(part.total_cell_count() == 6);
  CHECK(part.set_index("B") == 1);
  CHECK(part.set_index("missing") == -1);
  CHECK_FALSE(part.complete());

  SUBCASE("cell midpoints are the representative points") {
    CHECK(part.cells(0)[0].center == doctest::Approx(-2.25));
    CHECK(part.cells(0)[1].center == doctest::Approx(-0.75));
    CHECK(part.cells(1)[2].center == doctest::Approx(5.25));
  }

  SUBCASE("sum of sharp cell operators equals the set indicator") {
    for (int i = 0; i < part.set_count(); ++i) {
      Eigen::VectorXd sum = Eigen::VectorXd::Zero(g.n_points);
      for (const Cell& cell : part.cells(i)) {
        sum += cell_operator(g, OperatorKind::SharpInterval, cell).diagonal();
      }
      const MeasurementOperator indicator = set_indicator(g, part.set(i));
      CHECK((sum - indicator.diagonal()).cwiseAbs().maxCoeff() == 0.0);
      const MeasurementOperator merged = set_operator(part, OperatorKind::SharpInterval, i);
      CHECK((merged.diagonal() - indicator.diagonal()).cwiseAbs().maxCoeff() == 0.0);
    }
  }

  SUBCASE("re-tiling at twice the resolution halves the cell count") {
    const SamplePartition coarse = part.with_resolution(3.0);
    CHECK(coarse.cells(0).size() == 1);
    CHECK(coarse.cells(1).size() == 2);
    CHECK(coarse.delta() == 3.0);
    // Boundaries at odd multiples of 1.5 are not on the 4.5 lattice.
    CHECK_THROWS_AS(part.with_resolution(4.5), AlignmentError);
  }
}

TEST_CASE("partition: covering sets are flagged complete") {
  const PositionGrid g = wide_grid();
  const SamplePartition part = SamplePartition::build(
      g, 2.0,
      {SampleSet{"L", {{-16.0, -4.0}}}, SampleSet{"M", {{-4.0, 4.0}}},
       SampleSet{"R", {{4.0, 16.0}}}});
  CHECK(part.complete());
  CHECK(part.total_cell_count() == 16);
}

TEST_CASE("partition: malformed inputs are rejected") {
  const PositionGrid g = wide_grid();
  // Interval length not a multiple of the resolution.
  CHECK_THROWS_AS(
      SamplePartition::build(g, 1.5, {SampleSet{"A", {{0.0, 2.0}}}}),
      AlignmentError);
  // Overlapping sets.
  CHECK_THROWS_AS(
      SamplePartition::build(
          g, 1.5, {SampleSet{"A", {{0.0, 3.0}}}, SampleSet{"B", {{1.5, 4.5}}}}),
      InvalidPartition);
  // Empty set list.
  CHECK_THROWS_AS(SamplePartition::build(g, 1.5, {}), InvalidPartition);
}

TEST_CASE("overlap factor: exactly 1 for sharp tilings, above 1 for smeared") {
  const PositionGrid g = wide_grid();
  const SamplePartition part = SamplePartition::build(
      g, 1.5, {SampleSet{"A", {{-3.0, 0.0}}}, SampleSet{"B", {{0.0, 3.0}}}});
  CHECK(overlap_factor(part, OperatorKind::SharpInterval) == 1.0);
  CHECK(overlap_factor(part, OperatorKind::GaussianSmeared) > 1.0);
}

TEST_CASE("set membership uses half-open intervals") {
  const SampleSet set{"U", {{-1.0, 0.5}, {2.0, 3.0}}};
  CHECK(set_contains(set, -1.0));
  CHECK(set_contains(set, 0.0));
  CHECK_FALSE(set_contains(set, 0.5));
  CHECK(set_contains(set, 2.0));
  CHECK_FALSE(set_contains(set, 3.0));
  CHECK_FALSE(set_contains(SampleSet{"empty", {}}, 0.0));
}

TEST_CASE("boundary ambiguity bound: set size against dot size") {
  const SampleSet set{"U", {{0.0, 3.0}, {6.0, 7.5}}};  // smallest interval: 1.5
  CHECK(boundary_ambiguity_bound(set, 1.5) == doctest::Approx(std::exp(-1.0)));
  CHECK(boundary_ambiguity_bound(set, 0.75) == doctest::Approx(std::exp(-4.0)));
  CHECK_THROWS_AS(boundary_ambiguity_bound(SampleSet{"empty", {}}, 1.0), InvalidPartition);
  CHECK_THROWS_AS(boundary_ambiguity_bound(set, 0.0), InvalidArgument);
}
