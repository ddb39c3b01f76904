#pragma once

#include <optional>
#include <string>
#include <vector>

#include "memchan/mps.hpp"
#include "memchan/numerics.hpp"

namespace memchan::conditions {

enum class Condition { DecayRepeat, LongShort };
enum class Verdict { DecayConfirmed, Inconclusive, Violated };

std::string_view to_string(Condition c);
std::string_view to_string(Verdict v);

struct ConditionSample {
  double l = 0.0;          // live block length
  double abscissa = 0.0;   // spacer s, separation d or delta
  double value = 0.0;
};

struct ConditionReport {
  Condition condition = Condition::DecayRepeat;
  std::string environment;
  std::vector<ConditionSample> samples;
  std::optional<DecayFit> fit;
  Verdict verdict = Verdict::Inconclusive;
  std::optional<double> predicted_rate;
  std::vector<std::string> notes;
};

struct GateOptions {
  double gap_threshold = 1e-6;  // transfer gap at or below this is treated as critical
  double min_r_squared = 0.9;
  int jobs = 1;
};

ConditionReport check_decayrepeat_mps(const mps::MPSSpec& spec, const std::vector<int>& l_values,
                                      const std::vector<int>& s_values, int v, double delta_doc,
                                      const GateOptions& opts = {});

enum class DeltaRule { Sqrt, LinearFraction, Ladder };

struct LongShortPlan {
  DeltaRule rule = DeltaRule::Sqrt;
  std::vector<int> l_values;
  double fraction = 0.5;      // LinearFraction: delta = ceil(fraction * l)
  std::vector<int> deltas;    // Ladder: explicit deltas, applied to every l
  int n_big = 40;
};

/// Deltas produced by the rule for a given l (Ladder returns the explicit list).
std::vector<int> deltas_for(const LongShortPlan& plan, int l);

ConditionReport check_longshort_mps(const mps::MPSSpec& spec, const LongShortPlan& plan,
                                    const GateOptions& opts = {});

struct GaussianGeometry {
  int block = 4;
  std::vector<int> separations{2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12};
  int n_total = 60;
  int l = 6;
  std::vector<int> deltas{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  int n_big = 80;
};

struct GaussianReports {
  ConditionReport decayrepeat;
  ConditionReport longshort;
};

GaussianReports check_conditions_gaussian(double kappa, const GaussianGeometry& geom = {},
                                          const GateOptions& opts = {});

/// Verdict from samples and an optional fit; every sample zero confirms trivially.
Verdict judge(const std::vector<ConditionSample>& samples, const std::optional<DecayFit>& fit,
              double min_r_squared);

std::string to_json(const ConditionReport& report);

}  // namespace memchan::conditions
