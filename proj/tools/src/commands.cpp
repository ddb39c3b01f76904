#include <cmath>
#include <limits>
#include <string>

#include "context.hpp"
#include "memchan/conditions.hpp"
#include "memchan/gaussian.hpp"
#include "memchan/ising.hpp"
#include "memchan/markov.hpp"
#include "memchan/mps.hpp"
#include "memchan/parallel.hpp"
#include "memchan/spin_ed.hpp"

namespace memchan::cli {

namespace {

using Row = std::vector<std::string>;

markov::StochasticMatrix get_markov(const json& cfg) {
  if (!cfg.contains("columns") || !cfg.at("columns").is_array()) {
    throw ConfigError("field 'columns': expected an array of d columns");
  }
  std::vector<std::vector<double>> cols;
  for (const auto& c : cfg.at("columns")) {
    if (!c.is_array()) throw ConfigError("field 'columns': each column must be an array of numbers");
    std::vector<double> col;
    for (const auto& x : c) {
      if (!x.is_number()) throw ConfigError("field 'columns': entries must be numbers");
      col.push_back(x.get<double>());
    }
    cols.push_back(std::move(col));
  }
  return markov::StochasticMatrix::from_columns(cols);
}

void fit_footer(Table& t, const std::optional<DecayFit>& fit, bool degenerate) {
  if (fit) {
    t.footer.push_back("fit log_amplitude=" + num(fit->log_amplitude));
    t.footer.push_back("fit rate=" + num(fit->rate));
    t.footer.push_back("fit r_squared=" + num(fit->r_squared));
  } else {
    t.footer.push_back(degenerate ? "fit=degenerate (all values zero)"
                                  : "fit=unavailable (fewer than 3 positive values)");
  }
}

// Evaluates each grid point in parallel; rows keep grid order. A failed point
// keeps its key cells and gets "nan" in every value column.
template <class KeyFn, class ValueFn>
void fill_rows(Context& ctx, std::size_t count, KeyFn&& keys, ValueFn&& values) {
  const std::size_t width = ctx.table.header.size();
  std::vector<Row> rows(count);
  std::vector<std::string> errors(count);
  parallel_for(count, ctx.jobs, [&](std::size_t i) {
    try {
      Row r = keys(i);
      for (auto& v : values(i)) r.push_back(std::move(v));
      rows[i] = std::move(r);
    } catch (const std::exception& e) {
      errors[i] = e.what();
      if (errors[i].empty()) errors[i] = "unknown error";
    }
  });
  for (std::size_t i = 0; i < count; ++i) {
    if (errors[i].empty()) {
      ctx.point_ok(i);
    } else {
      ctx.point_failed(i, errors[i]);
      rows[i] = keys(i);
      rows[i].resize(width, "nan");
    }
    ctx.table.rows.push_back(std::move(rows[i]));
  }
}

void cmd_markov(Context& ctx) {
  const auto m = get_markov(ctx.config);
  const auto rep = markov::capacity(m);
  Table& t = ctx.table;
  t.header = {"d", "entropy_rate_bits", "capacity_bits"};
  Row row = {std::to_string(m.d()), num(rep.entropy_rate_bits), num(rep.capacity_bits)};
  for (int i = 0; i < m.d(); ++i) {
    t.header.push_back("stationary_" + std::to_string(i));
    row.push_back(num(rep.stationary[static_cast<std::size_t>(i)]));
  }
  for (int i = 0; i < m.d(); ++i) {
    t.header.push_back("column_entropy_" + std::to_string(i));
    row.push_back(num(rep.column_entropies[static_cast<std::size_t>(i)]));
  }
  t.rows.push_back(std::move(row));
  t.plot_x = 0;
  t.plot_y = 2;
  ctx.point_ok(0);
}

void cmd_ising(Context& ctx) {
  const auto betas = get_grid(ctx.config, "beta");
  const auto js = get_grid(ctx.config, "J", "0");
  const auto ms = get_grid(ctx.config, "M", "0");
  const auto ds = get_grid(ctx.config, "D", "0");
  std::vector<ising::IsingParams> grid;
  for (double b : betas)
    for (double j : js)
      for (double m : ms)
        for (double d : ds) {
          ising::IsingParams p{b, j, m, d};
          ising::validate(p);
          grid.push_back(p);
        }
  ctx.table.header = {"beta", "J", "M", "D", "entropy_nats", "capacity_bits"};
  ctx.table.plot_y = 5;
  fill_rows(
      ctx, grid.size(),
      [&](std::size_t i) {
        const auto& p = grid[i];
        return Row{num(p.beta), num(p.J), num(p.M), num(p.D)};
      },
      [&](std::size_t i) {
        return Row{num(ising::entropy_per_site(grid[i])), num(ising::capacity(grid[i]))};
      });
}

void cmd_mps_capacity(Context& ctx) {
  const auto spec = get_mps(ctx.config);
  const auto ns = get_int_list(ctx.config, "n", spec.d() == 2 ? "8:13:1" : "4:8:1");
  const double log2d = std::log2(double(spec.d()));
  ctx.table.header = {"n", "diag_entropy_bits", "coherent_info_bits"};
  ctx.table.plot_y = 1;
  fill_rows(
      ctx, ns.size(), [&](std::size_t i) { return Row{std::to_string(ns[i])}; },
      [&](std::size_t i) {
        const double s = mps::diag_entropy_bits(spec, ns[i]);
        return Row{num(s), num(coherent_info_bits(ns[i], spec.d(), std::min(s, ns[i] * log2d)))};
      });
  std::vector<Sample> pts;
  for (const auto& r : ctx.table.rows) {
    const double s = std::stod(r[1]);
    if (!std::isnan(s)) pts.push_back({std::stod(r[0]), s});
  }
  if (pts.size() >= 3) {
    const FitLine fit = entropy_rate_estimate(pts);
    ctx.table.footer.push_back("entropy_rate_bits=" + num(fit.slope));
    ctx.table.footer.push_back("intercept=" + num(fit.intercept));
    ctx.table.footer.push_back("max_abs_residual=" + num(fit.max_abs_residual));
    ctx.table.footer.push_back("capacity_estimate_bits=" + num(log2d - fit.slope));
  } else {
    ctx.warnings.push_back("fewer than 3 successful sizes; no entropy-rate fit");
  }
  if (spec.d() == 2) {
    try {
      const auto p = mps::rank1_params(spec);
      ctx.table.footer.push_back("capacity_rank1_bits=" + num(mps::capacity_rank1(p)));
    } catch (const Error&) {
      // not rank 1: the enumeration estimate is the only route
    }
  }
}

void cmd_mps_rank1(Context& ctx) {
  std::vector<mps::Rank1Params> grid;
  if (ctx.config.contains("a") || ctx.config.contains("b") || ctx.config.contains("c")) {
    for (double a : get_grid(ctx.config, "a"))
      for (double b : get_grid(ctx.config, "b"))
        for (double c : get_grid(ctx.config, "c")) {
          if (!(a > 0.0 && b > 0.0 && c >= 0.0)) throw ConfigError("rank-1 parameters need a, b > 0 and c >= 0");
          grid.push_back({a, b, c});
        }
  } else {
    grid.push_back(mps::rank1_params(get_mps(ctx.config)));
  }
  ctx.table.header = {"a", "b", "c", "capacity_bits", "ising_J", "ising_M", "ising_D"};
  ctx.table.plot_x = 2;
  ctx.table.plot_y = 3;
  fill_rows(
      ctx, grid.size(),
      [&](std::size_t i) { return Row{num(grid[i].a), num(grid[i].b), num(grid[i].c)}; },
      [&](std::size_t i) {
        Row r{num(mps::capacity_rank1(grid[i]))};
        if (grid[i].c > 0.0) {
          const auto ip = mps::ising_from_rank1(grid[i]);
          r.insert(r.end(), {num(ip.J), num(ip.M), num(ip.D)});
        } else {
          r.insert(r.end(), {"nan", "nan", "nan"});
        }
        return r;
      });
}

void cmd_wolf_sweep(Context& ctx) {
  const auto gs = get_grid(ctx.config, "g", "-2:2:0.05");
  ctx.table.header = {"g", "a", "b", "c", "capacity_bits"};
  ctx.table.plot_y = 4;
  fill_rows(
      ctx, gs.size(), [&](std::size_t i) { return Row{num(gs[i])}; },
      [&](std::size_t i) {
        const auto p = mps::rank1_params(mps::wolf_mps(gs[i]));
        return Row{num(p.a), num(p.b), num(p.c), num(mps::wolf_capacity(gs[i]))};
      });
}

void cmd_qising_sweep(Context& ctx) {
  const auto gs = get_grid(ctx.config, "g", "0.2:1.8:0.05");
  const auto ns = get_int_list(ctx.config, "n", "6,8,10,12");
  const std::string model = get_string(ctx.config, "model", "tfim");
  if (model != "tfim" && model != "wolf") throw ConfigError("field 'model': expected \"tfim\" or \"wolf\"");
  for (int n : ns) {
    if (n < spin::kMinSpins || n > spin::kMaxSpins) {
      throw ConfigError("field 'n': spins must lie in [" + std::to_string(spin::kMinSpins) + ", " +
                        std::to_string(spin::kMaxSpins) + "]");
    }
  }
  spin::SolverOptions opts;
  opts.tol = get_number(ctx.config, "tol", opts.tol);
  opts.max_iter = get_int(ctx.config, "max_iter", opts.max_iter);
  opts.krylov_dim = get_int(ctx.config, "krylov_dim", opts.krylov_dim);
  opts.seed = ctx.seed;
  const bool periodic = get_bool(ctx.config, "periodic", true);
  const auto kind = model == "wolf" ? spin::ModelKind::Wolf : spin::ModelKind::TransverseIsing;
  const auto points = spin::sweep(kind, gs, ns, opts, periodic, ctx.jobs);

  ctx.table.header = {"n", "g", "capacity_bits", "diag_entropy_bits", "energy", "gap_estimate", "degenerate", "residual"};
  ctx.table.plot_x = 1;
  ctx.table.plot_y = 2;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto& p = points[i];
    if (!p.error.empty()) {
      ctx.point_failed(i, p.error);
      ctx.table.rows.push_back({std::to_string(p.n), num(p.g), "nan", "nan", "nan", "nan", "nan", "nan"});
      continue;
    }
    ctx.table.rows.push_back({std::to_string(p.n), num(p.g), num(p.capacity_bits), num(p.diag_entropy_bits),
                              num(p.energy), num(p.gap_estimate), p.degenerate ? "1" : "0", num(p.residual)});
    if (!p.converged) {
      ctx.point_failed(i, "solver did not converge (residual " + num(p.residual) + ")");
    } else {
      ctx.point_ok(i, {{"residual", p.residual}, {"degenerate", p.degenerate}});
    }
  }
}

void cmd_gaussian_decay(Context& ctx) {
  const double kappa = get_number(ctx.config, "kappa", 0.2);
  const int block = get_int(ctx.config, "block", 4);
  const auto seps = get_int_list(ctx.config, "separations", "2:12:1");
  const int n_total = get_int(ctx.config, "n_total", 60);
  const auto exp = gaussian::theorem1_decay_experiment(kappa, block, seps, n_total);
  ctx.table.header = {"separation", "bound", "mutual_info_nats"};
  ctx.table.plot_logy = true;
  for (std::size_t i = 0; i < exp.rows.size(); ++i) {
    const auto& r = exp.rows[i];
    ctx.table.rows.push_back({num(r.abscissa), num(r.value), num(r.mutual_info_nats)});
    ctx.point_ok(i);
  }
  fit_footer(ctx.table, exp.fit, exp.degenerate);
}

void cmd_gaussian_longshort(Context& ctx) {
  const double kappa = get_number(ctx.config, "kappa", 0.2);
  const int l = get_int(ctx.config, "l", 6);
  const auto deltas = get_int_list(ctx.config, "deltas", "1:10:1");
  const int n_big = get_int(ctx.config, "n_big", 80);
  const auto exp = gaussian::longshort_covariance_experiment(kappa, l, deltas, n_big);
  ctx.table.header = {"delta", "op_norm_diff", "entropy_bound", "entropy_diff"};
  ctx.table.plot_logy = true;
  for (std::size_t i = 0; i < exp.rows.size(); ++i) {
    const auto& r = exp.rows[i];
    ctx.table.rows.push_back({num(r.abscissa), num(r.value), num(r.entropy_bound), num(r.entropy_diff)});
    ctx.point_ok(i);
  }
  fit_footer(ctx.table, exp.fit, exp.degenerate);
}

conditions::GateOptions gate_options(const Context& ctx) {
  conditions::GateOptions g;
  g.gap_threshold = get_number(ctx.config, "gap_threshold", g.gap_threshold);
  g.min_r_squared = get_number(ctx.config, "min_r_squared", g.min_r_squared);
  g.jobs = ctx.jobs;
  return g;
}

void emit_reports(Context& ctx, const std::vector<conditions::ConditionReport>& reports) {
  ctx.table.header = {"condition", "l", "x", "value"};
  ctx.table.plot_x = 2;
  ctx.table.plot_y = 3;
  ctx.table.plot_logy = true;
  json arr = json::array();
  std::size_t index = 0;
  for (const auto& rep : reports) {
    const std::string name(conditions::to_string(rep.condition));
    for (const auto& s : rep.samples) {
      ctx.table.rows.push_back({name, num(s.l), num(s.abscissa), num(s.value)});
      ctx.point_ok(index++);
    }
    std::string line = name + " verdict=" + std::string(conditions::to_string(rep.verdict));
    if (rep.fit) {
      line += " rate=" + num(rep.fit->rate) + " r_squared=" + num(rep.fit->r_squared) +
              " log_amplitude=" + num(rep.fit->log_amplitude);
      if (rep.fit->poly_exponent) line += " poly_exponent=" + num(*rep.fit->poly_exponent);
    }
    if (rep.predicted_rate) line += " predicted_rate=" + num(*rep.predicted_rate);
    ctx.table.footer.push_back(line);
    arr.push_back(json::parse(conditions::to_json(rep)));
  }
  ctx.extra["reports"] = arr;
}

conditions::DeltaRule parse_rule(const std::string& s) {
  if (s == "sqrt") return conditions::DeltaRule::Sqrt;
  if (s == "linear_fraction") return conditions::DeltaRule::LinearFraction;
  if (s == "ladder") return conditions::DeltaRule::Ladder;
  throw ConfigError("field 'longshort.rule': expected sqrt, linear_fraction or ladder");
}

void cmd_conditions_mps(Context& ctx) {
  const auto spec = get_mps(ctx.config, 0.5);
  const auto gate = gate_options(ctx);
  const json& dr = get_object(ctx.config, "decayrepeat");
  const json& ls = get_object(ctx.config, "longshort");
  conditions::LongShortPlan plan;
  plan.rule = parse_rule(get_string(ls, "rule", "ladder"));
  plan.l_values = get_int_list(ls, "l_values", plan.rule == conditions::DeltaRule::Ladder ? "4" : "4,6,9");
  plan.fraction = get_number(ls, "fraction", plan.fraction);
  if (plan.rule == conditions::DeltaRule::Ladder) plan.deltas = get_int_list(ls, "deltas", "1:8:1");
  plan.n_big = get_int(ls, "n_big", 40);
  emit_reports(ctx, {conditions::check_decayrepeat_mps(spec, get_int_list(dr, "l_values", "2,3"),
                                                       get_int_list(dr, "s_values", "1:6:1"), get_int(dr, "v", 2),
                                                       get_number(dr, "delta_doc", 0.5), gate),
                     conditions::check_longshort_mps(spec, plan, gate)});
}

void cmd_conditions_gaussian(Context& ctx) {
  conditions::GaussianGeometry geom;
  const json& c = ctx.config;
  geom.block = get_int(c, "block", geom.block);
  geom.separations = get_int_list(c, "separations", "2:12:1");
  geom.n_total = get_int(c, "n_total", geom.n_total);
  geom.l = get_int(c, "l", geom.l);
  geom.deltas = get_int_list(c, "deltas", "1:10:1");
  geom.n_big = get_int(c, "n_big", geom.n_big);
  const auto reps = conditions::check_conditions_gaussian(get_number(c, "kappa", 0.2), geom, gate_options(ctx));
  emit_reports(ctx, {reps.decayrepeat, reps.longshort});
}

void cmd_hashing(Context& ctx) {
  const auto ns = get_int_list(ctx.config, "n", "1:10:1");
  ctx.table.header = {"n", "s_diag_bits", "coherent_info_bits", "coherent_info_per_use"};
  ctx.table.plot_y = 3;
  if (ctx.config.contains("columns")) {
    const auto m = get_markov(ctx.config);
    fill_rows(
        ctx, ns.size(), [&](std::size_t i) { return Row{std::to_string(ns[i])}; },
        [&](std::size_t i) {
          const double s = markov::brute_force_diag_entropy(m, std::nullopt, ns[i]);
          const double ci = coherent_info_bits(ns[i], m.d(), std::min(s, ns[i] * std::log2(double(m.d()))));
          return Row{num(s), num(ci), num(ci / ns[i])};
        });
    return;
  }
  const auto spec = get_mps(ctx.config);
  fill_rows(
      ctx, ns.size(), [&](std::size_t i) { return Row{std::to_string(ns[i])}; },
      [&](std::size_t i) {
        const double s = mps::diag_entropy_bits(spec, ns[i]);
        const double ci = coherent_info_bits(ns[i], spec.d(), std::min(s, ns[i] * std::log2(double(spec.d()))));
        return Row{num(s), num(ci), num(ci / ns[i])};
      });
}

}  // namespace

const std::vector<CommandInfo>& commands() {
  static const std::vector<CommandInfo> list = {
      {"markov", "capacity for a Markov-chain environment", cmd_markov},
      {"ising", "capacity for a classical Ising-chain environment", cmd_ising},
      {"mps-capacity", "enumeration entropies and rate fit for an MPS environment", cmd_mps_capacity},
      {"mps-rank1", "capacity of rank-1 MPS environments via the Ising mapping", cmd_mps_rank1},
      {"wolf-sweep", "capacity of the Wolf MPS over a g grid", cmd_wolf_sweep},
      {"qising-sweep", "exact-diagonalization capacity sweep for spin chains", cmd_qising_sweep},
      {"gaussian-decay", "two-block correlation bound vs separation in a harmonic chain", cmd_gaussian_decay},
      {"gaussian-longshort", "reduced covariance convergence vs chain length", cmd_gaussian_longshort},
      {"conditions-mps", "forgetfulness decay checks for an MPS environment", cmd_conditions_mps},
      {"conditions-gaussian", "forgetfulness decay checks for a harmonic chain", cmd_conditions_gaussian},
      {"hashing", "finite-n coherent information table", cmd_hashing},
  };
  return list;
}

}  // namespace memchan::cli
