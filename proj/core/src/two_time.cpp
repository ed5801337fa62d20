#include "twotime/two_time.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "twotime/errors.hpp"
#include "twotime/numeric.hpp"

namespace twotime {

namespace {

// Two routes to the same defect must agree to this (absolute) level;
// both are exact linear-algebra identities, so anything worse is a bug.
constexpr double kIdentityTolerance = 1e-9;

const PositionGrid& grid_of(const std::variant<PureState, DensityMatrix>& s) {
  return std::visit([](const auto& v) -> const PositionGrid& { return v.grid(); }, s);
}

TwoTimeSpec validated(TwoTimeSpec spec) {
  spec.validate();
  return spec;
}

std::variant<PureState, DensityMatrix> evolve_to_first_time(const TwoTimeSpec& spec,
                                                            const FreeEvolver& evolver) {
  if (spec.t1 == 0.0) return spec.initial;
  return std::visit(
      [&](const auto& s) -> std::variant<PureState, DensityMatrix> {
        return evolver.apply(s, spec.t1);  // user-level step: guarded
      },
      spec.initial);
}

// Probabilities are non-negative in exact arithmetic (trace of a product
// of positive operators); only round-off can dip below zero.
double floor_at_zero(double v) { return v < 0.0 ? 0.0 : v; }

}  // namespace

const PositionGrid& TwoTimeSpec::grid() const { return grid_of(initial); }

void TwoTimeSpec::validate() const {
  if (!(mass > 0.0)) {
    throw InvalidArgument("two_time", "TwoTimeSpec.mass", "mass must be positive");
  }
  if (!(t1 >= 0.0)) {
    throw InvalidArgument("two_time", "TwoTimeSpec.t1", "first time must be >= 0");
  }
  if (!(t2 > t1)) {
    throw InvalidArgument("two_time", "TwoTimeSpec.t2",
                          "second time must lie strictly after the first");
  }
  const PositionGrid& g = grid();
  if (!(first.grid() == g) || !(second.grid() == g)) {
    throw InvalidArgument("two_time", "TwoTimeSpec.partitions",
                          "state and both partitions must share one grid");
  }
  if (first.set_count() == 0 || second.set_count() == 0) {
    throw InvalidArgument("two_time", "TwoTimeSpec.partitions",
                          "both partitions need at least one sample set");
  }
}

TwoTimeEngine::TwoTimeEngine(TwoTimeSpec spec)
    : spec_(validated(std::move(spec))),
      evolver_(spec_.grid(), spec_.mass),
      at_t1_(evolve_to_first_time(spec_, evolver_)) {
  first_merged_.reserve(spec_.first.set_count());
  for (int i = 0; i < spec_.first.set_count(); ++i) {
    first_merged_.push_back(set_operator(spec_.first, spec_.kind, i).diagonal());
  }
  second_merged_.reserve(spec_.second.set_count());
  for (int j = 0; j < spec_.second.set_count(); ++j) {
    second_merged_.push_back(set_operator(spec_.second, spec_.kind, j).diagonal());
  }
}

bool TwoTimeEngine::pure() const { return std::holds_alternative<PureState>(at_t1_); }

// --- low-level sums ---------------------------------------------------------

double TwoTimeEngine::weigh(const Eigen::VectorXd& w, const Eigen::VectorXcd& phi_t) const {
  NeumaierSum s;
  for (int k = 0; k < phi_t.size(); ++k) {
    if (w[k] != 0.0) s.add(w[k] * std::norm(phi_t[k]));
  }
  return s.value() * spec_.grid().dx;
}

double TwoTimeEngine::weigh(const Eigen::VectorXd& w, const Eigen::MatrixXcd& kernel_t) const {
  NeumaierSum s;
  for (int k = 0; k < kernel_t.rows(); ++k) {
    if (w[k] != 0.0) s.add(w[k] * kernel_t(k, k).real());
  }
  return s.value() * spec_.grid().dx;
}

std::complex<double> TwoTimeEngine::overlap(const Eigen::VectorXd& w,
                                            const Eigen::VectorXcd& bra,
                                            const Eigen::VectorXcd& ket) const {
  NeumaierSum re, im;
  for (int k = 0; k < bra.size(); ++k) {
    if (w[k] == 0.0) continue;
    const Complex term = w[k] * std::conj(bra[k]) * ket[k];
    re.add(term.real());
    im.add(term.imag());
  }
  return Complex(re.value(), im.value()) * spec_.grid().dx;
}

std::complex<double> TwoTimeEngine::trace_against(const Eigen::VectorXd& w,
                                                  const Eigen::MatrixXcd& kernel_t) const {
  NeumaierSum re, im;
  for (int k = 0; k < kernel_t.rows(); ++k) {
    if (w[k] == 0.0) continue;
    const Complex term = w[k] * kernel_t(k, k);
    re.add(term.real());
    im.add(term.imag());
  }
  return Complex(re.value(), im.value()) * spec_.grid().dx;
}

// --- chain-internal propagation ----------------------------------------------
// Collapse products of sharp operators carry slowly decaying diffraction
// tails; on the periodic grid those tails are part of the model every
// rule sees identically, so no wrap-around guard applies here.

Eigen::VectorXcd TwoTimeEngine::propagate_piece(const Eigen::VectorXd& diag) const {
  const auto& psi = std::get<PureState>(at_t1_);
  Eigen::VectorXcd phi(psi.size());
  for (int k = 0; k < phi.size(); ++k) phi[k] = diag[k] * psi.amplitudes()[k];
  evolver_.apply_raw(phi, dt());
  return phi;
}

Eigen::MatrixXcd TwoTimeEngine::propagate_kernel(const Eigen::VectorXd& diag_left,
                                                 const Eigen::VectorXd& diag_right) const {
  const auto& rho = std::get<DensityMatrix>(at_t1_).elements();
  const int n = static_cast<int>(rho.rows());
  Eigen::MatrixXcd kernel(n, n);
  for (int l = 0; l < n; ++l) {
    for (int k = 0; k < n; ++k) {
      kernel(k, l) = diag_left[k] * rho(k, l) * diag_right[l];
    }
  }
  evolver_.apply_raw(kernel, dt());
  return kernel;
}

// --- rule cores ---------------------------------------------------------------

double TwoTimeEngine::rule_probability(const Eigen::VectorXd& first_diag,
                                       const Eigen::VectorXd& second_weight) const {
  if (pure()) return weigh(second_weight, propagate_piece(first_diag));
  return weigh(second_weight, propagate_kernel(first_diag, first_diag));
}

std::complex<double> TwoTimeEngine::interference(const Eigen::VectorXd& diag_a,
                                                 const Eigen::VectorXd& diag_b,
                                                 const Eigen::VectorXd& second_weight) const {
  if (pure()) {
    // <psi| M_b U^dag W U M_a |psi> = sum_k W_k conj(phi_b,k) phi_a,k dx
    return overlap(second_weight, propagate_piece(diag_b), propagate_piece(diag_a));
  }
  return trace_against(second_weight, propagate_kernel(diag_a, diag_b));
}

double TwoTimeEngine::contextual_sum(const SamplePartition& first, int i,
                                     const Eigen::VectorXd& linear_weight) const {
  NeumaierSum total;
  for (const Cell& cell : first.cells(i)) {
    const Eigen::VectorXd diag =
        cell_operator(spec_.grid(), spec_.kind, cell).diagonal();
    if (pure()) {
      total.add(weigh(linear_weight, propagate_piece(diag)));
    } else {
      total.add(weigh(linear_weight, propagate_kernel(diag, diag)));
    }
  }
  return total.value();
}

// --- probability rules ----------------------------------------------------------

double TwoTimeEngine::single_time_probability(const SampleSet& U) const {
  const MeasurementOperator indicator = set_indicator(spec_.grid(), U);
  const double w = std::visit([&](const auto& s) { return indicator.weight(s); }, at_t1_);
  return clamp_probability(w);
}

double TwoTimeEngine::single_time_probability(int i) const {
  return single_time_probability(spec_.first.set(i));
}

double TwoTimeEngine::single_time_at_t2(int j) const {
  const MeasurementOperator indicator = set_indicator(spec_.grid(), spec_.second.set(j));
  const auto at_t2 = std::visit(
      [&](const auto& s) -> std::variant<PureState, DensityMatrix> {
        return evolver_.apply(s, dt());  // nothing collapsed: guarded step
      },
      at_t1_);
  const double w = std::visit([&](const auto& s) { return indicator.weight(s); }, at_t2);
  return clamp_probability(w);
}

double TwoTimeEngine::standard_two_time(int i, int j) const {
  return floor_at_zero(rule_probability(first_merged_.at(i), second_merged_.at(j)));
}

std::complex<double> TwoTimeEngine::decoherence_functional(int a, int b, int j) const {
  return interference(first_merged_.at(a), first_merged_.at(b), second_merged_.at(j));
}

DefectReport TwoTimeEngine::additivity_defect(int a, int b, int j) const {
  DefectReport report;
  report.d = decoherence_functional(a, b, j);
  report.defect = 2.0 * report.d.real();

  // Independent route: evaluate the standard rule on the union operator
  // M_a + M_b and subtract the parts. The cross terms are exactly the
  // defect, so the two numbers must match to round-off.
  const Eigen::VectorXd merged = first_merged_.at(a) + first_merged_.at(b);
  const double p_union = rule_probability(merged, second_merged_.at(j));
  report.merged_minus_parts = p_union - standard_two_time(a, j) - standard_two_time(b, j);

  if (std::abs(report.merged_minus_parts - report.defect) > kIdentityTolerance) {
    throw InternalInconsistency(
        "two_time", "additivity_defect",
        "interference route " + std::to_string(report.defect) + " vs union route " +
            std::to_string(report.merged_minus_parts) + " for sets (" + std::to_string(a) +
            ", " + std::to_string(b) + ") -> " + std::to_string(j));
  }
  return report;
}

double TwoTimeEngine::contextual_two_time(int i, int j) const {
  return floor_at_zero(contextual_sum(spec_.first, i, second_merged_.at(j)));
}

ResolutionDifference TwoTimeEngine::resolution_difference(int i, int j, double delta) const {
  const SamplePartition fine_first = spec_.first.with_resolution(delta);
  const SamplePartition coarse_first = spec_.first.with_resolution(2.0 * delta);
  const SamplePartition fine_second = spec_.second.with_resolution(delta);
  const SamplePartition coarse_second = spec_.second.with_resolution(2.0 * delta);

  const Eigen::VectorXd fine_weight =
      set_operator(fine_second, spec_.kind, j).diagonal();
  const Eigen::VectorXd coarse_weight =
      set_operator(coarse_second, spec_.kind, j).diagonal();

  ResolutionDifference out;

  // Fine pass keeps the evolved pieces (pure path): the half-cell
  // interference sum below reuses them pairwise.
  std::vector<Eigen::VectorXcd> fine_pieces;
  const std::vector<Cell>& fine_cells = fine_first.cells(i);
  {
    NeumaierSum p;
    for (const Cell& cell : fine_cells) {
      const Eigen::VectorXd diag =
          cell_operator(spec_.grid(), spec_.kind, cell).diagonal();
      if (pure()) {
        fine_pieces.push_back(propagate_piece(diag));
        p.add(weigh(fine_weight, fine_pieces.back()));
      } else {
        p.add(weigh(fine_weight, propagate_kernel(diag, diag)));
      }
    }
    out.p_fine = floor_at_zero(p.value());
  }
  out.p_coarse = floor_at_zero(contextual_sum(coarse_first, i, coarse_weight));
  out.epsilon = out.p_fine - out.p_coarse;

  // Every coarse cell is exactly the union of two adjacent fine cells
  // (interval lengths are multiples of 2*delta and both tilings start at
  // the same interval edge), so
  //   p_coarse - p_fine = sum_gamma 2 Re d(left half, right half; U_j)
  // term by term. The sign flip gives the cross-check for epsilon.
  {
    const std::size_t coarse_count = coarse_first.cells(i).size();
    if (fine_cells.size() != 2 * coarse_count) {
      throw InternalInconsistency("two_time", "resolution_difference",
                                  "fine tiling is not two cells per coarse cell");
    }
    NeumaierSum pairs;
    for (std::size_t c = 0; c < coarse_count; ++c) {
      const Cell& left = fine_cells[2 * c];
      const Cell& right = fine_cells[2 * c + 1];
      Complex d;
      if (pure()) {
        d = overlap(fine_weight, fine_pieces[2 * c + 1], fine_pieces[2 * c]);
      } else {
        const Eigen::VectorXd dl =
            cell_operator(spec_.grid(), spec_.kind, left).diagonal();
        const Eigen::VectorXd dr =
            cell_operator(spec_.grid(), spec_.kind, right).diagonal();
        d = trace_against(fine_weight, propagate_kernel(dl, dr));
      }
      pairs.add(-2.0 * d.real());
    }
    out.pair_sum = pairs.value();
  }

  if (spec_.kind == OperatorKind::SharpInterval) {
    // For sharp cells the identity is exact: a 2-delta projector is the
    // sum of its delta halves, and the second-time cell sum telescopes to
    // the same set indicator at both resolutions.
    if (std::abs(out.epsilon - out.pair_sum) > kIdentityTolerance) {
      throw InternalInconsistency(
          "two_time", "resolution_difference",
          "direct difference " + std::to_string(out.epsilon) +
              " vs half-cell interference sum " + std::to_string(out.pair_sum));
    }
    out.cross_checked = true;
  } else {
    // Smeared tilings satisfy no such operator identity (the 2-delta
    // Gaussian is not the sum of two delta Gaussians); both routes are
    // reported and the gap is itself a diagnostic.
    out.cross_checked = false;
  }
  return out;
}

std::vector<DecoherenceReport> TwoTimeEngine::consistency_scan(double tolerance) const {
  std::vector<DecoherenceReport> reports;
  const int ns1 = spec_.first.set_count();
  const int ns2 = spec_.second.set_count();
  for (int a = 0; a < ns1; ++a) {
    for (int b = a + 1; b < ns1; ++b) {
      for (int j = 0; j < ns2; ++j) {
        DecoherenceReport r;
        r.a = a;
        r.b = b;
        r.j = j;
        r.d = decoherence_functional(a, b, j);
        r.defect = 2.0 * r.d.real();
        r.p_a = standard_two_time(a, j);
        r.p_b = standard_two_time(b, j);
        // Dimensionless criterion: the interference term is negligible
        // relative to the larger branch probability (floored so that a
        // pair of empty branches cannot pass on 0/0).
        const double scale = std::max({r.p_a, r.p_b, 1e-12});
        r.consistent = std::abs(r.d.real()) <= tolerance * scale;
        reports.push_back(r);
      }
    }
  }
  return reports;
}

bool TwoTimeEngine::all_consistent(const std::vector<DecoherenceReport>& reports) {
  for (const DecoherenceReport& r : reports) {
    if (!r.consistent) return false;
  }
  return true;
}

// --- minimal-resolution point quantities -----------------------------------------

double TwoTimeEngine::point_probability(double x1, double x2) const {
  const Eigen::VectorXd first_diag =
      make_measurement_operator(spec_.grid(), spec_.kind, x1, spec_.first.delta())
          .diagonal();
  const Eigen::VectorXd second_diag =
      make_measurement_operator(spec_.grid(), spec_.kind, x2, spec_.second.delta())
          .diagonal();
  return floor_at_zero(rule_probability(first_diag, second_diag));
}

std::complex<double> TwoTimeEngine::point_interference(double xa, double xb,
                                                       double x2) const {
  const double d1 = spec_.first.delta();
  const Eigen::VectorXd diag_a =
      make_measurement_operator(spec_.grid(), spec_.kind, xa, d1).diagonal();
  const Eigen::VectorXd diag_b =
      make_measurement_operator(spec_.grid(), spec_.kind, xb, d1).diagonal();
  const Eigen::VectorXd second_diag =
      make_measurement_operator(spec_.grid(), spec_.kind, x2, spec_.second.delta())
          .diagonal();
  return interference(diag_a, diag_b, second_diag);
}

// --- diagnostics --------------------------------------------------------------------

double TwoTimeEngine::first_overlap_factor() const {
  return overlap_factor(spec_.first, spec_.kind);
}

double TwoTimeEngine::second_overlap_factor() const {
  return overlap_factor(spec_.second, spec_.kind);
}

// --- one-shot wrappers ----------------------------------------------------------------

double single_time_probability(const DensityMatrix& rho, const SampleSet& U) {
  return clamp_probability(set_indicator(rho.grid(), U).weight(rho));
}

double single_time_probability(const PureState& psi, const SampleSet& U) {
  return clamp_probability(set_indicator(psi.grid(), U).weight(psi));
}

double standard_two_time(const TwoTimeSpec& spec, int i, int j) {
  return TwoTimeEngine(spec).standard_two_time(i, j);
}

std::complex<double> decoherence_functional(const TwoTimeSpec& spec, int a, int b, int j) {
  return TwoTimeEngine(spec).decoherence_functional(a, b, j);
}

DefectReport additivity_defect(const TwoTimeSpec& spec, int a, int b, int j) {
  return TwoTimeEngine(spec).additivity_defect(a, b, j);
}

double contextual_two_time(const TwoTimeSpec& spec, int i, int j) {
  return TwoTimeEngine(spec).contextual_two_time(i, j);
}

ResolutionDifference resolution_difference(const TwoTimeSpec& spec, int i, int j,
                                           double delta) {
  return TwoTimeEngine(spec).resolution_difference(i, j, delta);
}

std::vector<DecoherenceReport> consistency_scan(const TwoTimeSpec& spec, double tolerance) {
  return TwoTimeEngine(spec).consistency_scan(tolerance);
}

}  // namespace twotime
