#include "memchan/conditions.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include "json.hpp"

#include "memchan/gaussian.hpp"
#include "memchan/parallel.hpp"

namespace memchan::conditions {

namespace {

constexpr double kZero = 1e-14;

std::optional<DecayFit> fit_samples(const std::vector<ConditionSample>& samples) {
  std::vector<PrefactorSample> pts;
  std::set<double> ls;
  for (const auto& s : samples) {
    if (s.value > kZero) {
      pts.push_back({s.abscissa, s.l, s.value});
      ls.insert(s.l);
    }
  }
  const std::size_t need = ls.size() > 1 ? 4 : 3;
  if (pts.size() < need) return std::nullopt;
  return fit_decay_with_prefactor(pts);
}

void check_sizes(const std::vector<int>& xs, const char* what) {
  require(!xs.empty(), std::string(what) + " must be nonempty");
  for (int x : xs) require(x >= 1, std::string(what) + " entries must be >= 1");
}

std::string describe(const mps::MPSSpec& spec) {
  return "mps d=" + std::to_string(spec.d()) + " bond=" + std::to_string(spec.bond());
}

// Runs the sample evaluations in parallel; the first error is rethrown in order.
template <class Fn>
void evaluate(std::vector<ConditionSample>& samples, int jobs, Fn&& fn) {
  std::vector<std::exception_ptr> errors(samples.size());
  parallel_for(samples.size(), jobs, [&](std::size_t i) {
    try {
      samples[i].value = fn(samples[i]);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  });
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

bool gated(const mps::MPSSpec& spec, const GateOptions& opts, ConditionReport& out) {
  const mps::TransferSpectrum ts = mps::transfer_spectrum(spec);
  if (!ts.unique_fixed_point || ts.gap <= opts.gap_threshold) {
    out.verdict = Verdict::Inconclusive;
    out.notes.push_back("transfer operator gap " + std::to_string(ts.gap) +
                        " is at or below the critical threshold; no unique fixed point, decay fit skipped");
    return true;
  }
  if (ts.moduli.size() > 1 && ts.moduli[1] > 0.0) out.predicted_rate = std::log(ts.moduli[1]);
  return false;
}

}  // namespace

std::string_view to_string(Condition c) {
  return c == Condition::DecayRepeat ? "decayrepeat" : "longshort";
}

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::DecayConfirmed: return "decay_confirmed";
    case Verdict::Inconclusive: return "inconclusive";
    case Verdict::Violated: return "violated";
  }
  return "inconclusive";
}

Verdict judge(const std::vector<ConditionSample>& samples, const std::optional<DecayFit>& fit,
              double min_r_squared) {
  const bool all_zero =
      std::all_of(samples.begin(), samples.end(), [](const ConditionSample& s) { return s.value <= kZero; });
  if (!samples.empty() && all_zero) return Verdict::DecayConfirmed;
  if (!fit) return Verdict::Inconclusive;
  if (fit->rate < 0.0 && fit->r_squared >= min_r_squared) return Verdict::DecayConfirmed;
  if (fit->rate >= 0.0 && fit->r_squared >= min_r_squared) return Verdict::Violated;
  return Verdict::Inconclusive;
}

ConditionReport check_decayrepeat_mps(const mps::MPSSpec& spec, const std::vector<int>& l_values,
                                      const std::vector<int>& s_values, int v, double delta_doc,
                                      const GateOptions& opts) {
  check_sizes(l_values, "l_values");
  check_sizes(s_values, "s_values");
  require(v >= 2, "v must be >= 2");
  ConditionReport out;
  out.condition = Condition::DecayRepeat;
  out.environment = describe(spec);
  out.notes.push_back("v = " + std::to_string(v) +
                      " is held constant; the asymptotic choice v = l^5, s = delta*l (delta = " +
                      std::to_string(delta_doc) + ") is out of reach of exact contraction");
  if (gated(spec, opts, out)) return out;

  for (int l : l_values) {
    for (int s : s_values) out.samples.push_back({double(l), double(s), 0.0});
  }
  evaluate(out.samples, opts.jobs, [&](const ConditionSample& cs) {
    mps::BlockLayout layout;
    layout.l = int(cs.l);
    layout.s = int(cs.abscissa);
    layout.v = v;
    layout.N = v * (layout.l + layout.s);
    return mps::block_product_deviation(spec, layout);
  });
  out.fit = fit_samples(out.samples);
  out.verdict = judge(out.samples, out.fit, opts.min_r_squared);
  return out;
}

std::vector<int> deltas_for(const LongShortPlan& plan, int l) {
  switch (plan.rule) {
    case DeltaRule::Sqrt: return {int(std::ceil(std::sqrt(double(l)) - 1e-12))};
    case DeltaRule::LinearFraction: return {std::max(1, int(std::ceil(plan.fraction * l - 1e-12)))};
    case DeltaRule::Ladder: return plan.deltas;
  }
  return {};
}

ConditionReport check_longshort_mps(const mps::MPSSpec& spec, const LongShortPlan& plan, const GateOptions& opts) {
  check_sizes(plan.l_values, "l_values");
  if (plan.rule == DeltaRule::Ladder) check_sizes(plan.deltas, "deltas");
  if (plan.rule == DeltaRule::LinearFraction) require(plan.fraction > 0.0, "fraction must be positive");
  ConditionReport out;
  out.condition = Condition::LongShort;
  out.environment = describe(spec);
  if (gated(spec, opts, out)) return out;

  for (int l : plan.l_values) {
    for (int delta : deltas_for(plan, l)) {
      require(l + delta <= plan.n_big, "l + delta exceeds n_big");
      out.samples.push_back({double(l), double(delta), 0.0});
    }
  }
  evaluate(out.samples, opts.jobs, [&](const ConditionSample& cs) {
    return mps::longshort_deviation(spec, int(cs.l), int(cs.abscissa), plan.n_big);
  });
  out.fit = fit_samples(out.samples);
  out.verdict = judge(out.samples, out.fit, opts.min_r_squared);
  return out;
}

GaussianReports check_conditions_gaussian(double kappa, const GaussianGeometry& geom, const GateOptions& opts) {
  // Rejects non-positive-definite potentials before any experiment runs.
  (void)gaussian::harmonic_chain(std::max(geom.n_total, geom.n_big), kappa, true);
  const std::string env = "harmonic chain kappa=" + std::to_string(kappa);

  GaussianReports out;
  const auto t1 = gaussian::theorem1_decay_experiment(kappa, geom.block, geom.separations, geom.n_total);
  auto& dr = out.decayrepeat;
  dr.condition = Condition::DecayRepeat;
  dr.environment = env;
  for (const auto& r : t1.rows) dr.samples.push_back({double(geom.block), r.abscissa, r.value});
  dr.fit = t1.fit;
  dr.verdict = judge(dr.samples, dr.fit, opts.min_r_squared);
  dr.notes.push_back("values are sqrt(2 I) upper bounds on the two-block trace-norm deviation; v > 2 blocks follow by the triangle inequality");

  const auto ls = gaussian::longshort_covariance_experiment(kappa, geom.l, geom.deltas, geom.n_big);
  auto& lo = out.longshort;
  lo.condition = Condition::LongShort;
  lo.environment = env;
  for (const auto& r : ls.rows) lo.samples.push_back({double(geom.l), r.abscissa, r.value});
  lo.fit = ls.fit;
  lo.verdict = judge(lo.samples, lo.fit, opts.min_r_squared);
  lo.notes.push_back("values are operator-norm differences of the reduced covariance matrices");
  return out;
}

std::string to_json(const ConditionReport& report) {
  nlohmann::json j;
  j["condition"] = to_string(report.condition);
  j["environment"] = report.environment;
  j["verdict"] = to_string(report.verdict);
  j["predicted_rate"] = report.predicted_rate ? nlohmann::json(*report.predicted_rate) : nlohmann::json();
  auto& rows = j["samples"] = nlohmann::json::array();
  for (const auto& s : report.samples) rows.push_back({{"l", s.l}, {"x", s.abscissa}, {"value", s.value}});
  if (report.fit) {
    j["fit"] = {{"log_amplitude", report.fit->log_amplitude},
                {"rate", report.fit->rate},
                {"r_squared", report.fit->r_squared}};
    if (report.fit->poly_exponent) j["fit"]["poly_exponent"] = *report.fit->poly_exponent;
  } else {
    j["fit"] = nullptr;
  }
  j["notes"] = report.notes;
  return j.dump(2);
}

}  // namespace memchan::conditions
