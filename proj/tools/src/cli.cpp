#include "memchan_cli/cli.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "context.hpp"
#include "memchan/error.hpp"

#ifndef MEMCHAN_VERSION
#define MEMCHAN_VERSION "0.0.0"
#endif

namespace memchan::cli {

namespace {

double parse_double(std::string_view s) {
  const std::string tmp(s);
  char* end = nullptr;
  const double x = std::strtod(tmp.c_str(), &end);
  if (tmp.empty() || end != tmp.c_str() + tmp.size()) throw ConfigError("not a number: '" + tmp + "'");
  return x;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (true) {
    const auto next = s.find(sep, pos);
    out.push_back(s.substr(pos, next == std::string_view::npos ? std::string_view::npos : next - pos));
    if (next == std::string_view::npos) break;
    pos = next + 1;
  }
  return out;
}

std::string field(const std::string& key) { return "field '" + key + "': "; }

}  // namespace

std::vector<double> parse_grid(std::string_view text) {
  if (text.find(':') != std::string_view::npos) {
    const auto parts = split(text, ':');
    if (parts.size() != 3) throw ConfigError("grid must be start:stop:step, got '" + std::string(text) + "'");
    const double start = parse_double(parts[0]);
    const double stop = parse_double(parts[1]);
    const double step = parse_double(parts[2]);
    if (!(step > 0.0) || !std::isfinite(start) || !std::isfinite(stop) || stop < start) {
      throw ConfigError("grid needs finite start <= stop and step > 0, got '" + std::string(text) + "'");
    }
    const auto count = static_cast<long>(std::floor((stop - start) / step + 1e-9)) + 1;
    if (count > 1000000) throw ConfigError("grid has too many points");
    std::vector<double> out;
    for (long i = 0; i < count; ++i) out.push_back(start + static_cast<double>(i) * step);
    return out;
  }
  std::vector<double> out;
  for (auto part : split(text, ',')) out.push_back(parse_double(part));
  return out;
}

std::vector<int> parse_int_list(std::string_view text) {
  std::vector<int> out;
  for (double x : parse_grid(text)) {
    if (x != std::round(x)) throw ConfigError("expected integers, got " + format_number(x));
    out.push_back(static_cast<int>(std::lround(x)));
  }
  return out;
}

std::uint64_t fnv1a(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string num(double x) { return format_number(x); }

void Context::point_failed(std::size_t index, const std::string& what) {
  ++failed_points;
  warnings.push_back("point " + std::to_string(index) + ": " + what);
  points.push_back({{"index", index}, {"ok", false}, {"error", what}});
}

void Context::point_ok(std::size_t index, json detail) {
  detail["index"] = index;
  detail["ok"] = true;
  points.push_back(std::move(detail));
}

double get_number(const json& cfg, const std::string& key, std::optional<double> fallback) {
  if (!cfg.contains(key)) {
    if (fallback) return *fallback;
    throw ConfigError(field(key) + "required number is missing");
  }
  const json& v = cfg.at(key);
  if (!v.is_number()) throw ConfigError(field(key) + "expected a number");
  return v.get<double>();
}

int get_int(const json& cfg, const std::string& key, std::optional<int> fallback) {
  if (!cfg.contains(key)) {
    if (fallback) return *fallback;
    throw ConfigError(field(key) + "required integer is missing");
  }
  const json& v = cfg.at(key);
  if (!v.is_number_integer()) throw ConfigError(field(key) + "expected an integer");
  return v.get<int>();
}

bool get_bool(const json& cfg, const std::string& key, bool fallback) {
  if (!cfg.contains(key)) return fallback;
  if (!cfg.at(key).is_boolean()) throw ConfigError(field(key) + "expected true or false");
  return cfg.at(key).get<bool>();
}

std::string get_string(const json& cfg, const std::string& key, std::optional<std::string> fallback) {
  if (!cfg.contains(key)) {
    if (fallback) return *fallback;
    throw ConfigError(field(key) + "required string is missing");
  }
  if (!cfg.at(key).is_string()) throw ConfigError(field(key) + "expected a string");
  return cfg.at(key).get<std::string>();
}

std::vector<double> get_grid(const json& cfg, const std::string& key, std::optional<std::string> fallback) {
  std::vector<double> out;
  try {
    if (!cfg.contains(key)) {
      if (!fallback) throw ConfigError("required grid is missing");
      out = parse_grid(*fallback);
    } else if (const json& v = cfg.at(key); v.is_string()) {
      out = parse_grid(v.get<std::string>());
    } else if (v.is_number()) {
      out = {v.get<double>()};
    } else if (v.is_array()) {
      for (const auto& x : v) {
        if (!x.is_number()) throw ConfigError("array entries must be numbers");
        out.push_back(x.get<double>());
      }
    } else {
      throw ConfigError("expected a number, an array or a start:stop:step string");
    }
  } catch (const ConfigError& e) {
    const std::string what = e.what();
    if (what.rfind("field '", 0) == 0) throw;
    throw ConfigError(field(key) + what);
  }
  if (out.empty()) throw ConfigError(field(key) + "grid is empty");
  return out;
}

std::vector<int> get_int_list(const json& cfg, const std::string& key, std::optional<std::string> fallback) {
  std::vector<int> out;
  for (double x : get_grid(cfg, key, fallback)) {
    if (x != std::round(x)) throw ConfigError(field(key) + "expected integers");
    out.push_back(static_cast<int>(std::lround(x)));
  }
  return out;
}

const json& get_object(const json& cfg, const std::string& key) {
  static const json empty = json::object();
  if (!cfg.contains(key)) return empty;
  if (!cfg.at(key).is_object()) throw ConfigError(field(key) + "expected an object");
  return cfg.at(key);
}

mps::MPSSpec get_mps(const json& cfg, std::optional<double> default_wolf_g) {
  const int given = int(cfg.contains("wolf_g")) + int(cfg.contains("rank1")) + int(cfg.contains("matrices"));
  if (given > 1) throw ConfigError("give exactly one of 'wolf_g', 'rank1', 'matrices'");
  if (cfg.contains("wolf_g")) return mps::wolf_mps(get_number(cfg, "wolf_g"));
  if (cfg.contains("rank1")) {
    const json& r = get_object(cfg, "rank1");
    return mps::canonical_rank1({get_number(r, "a"), get_number(r, "b"), get_number(r, "c")});
  }
  if (!cfg.contains("matrices")) {
    if (default_wolf_g) return mps::wolf_mps(*default_wolf_g);
    throw ConfigError("an MPS environment needs 'wolf_g', 'rank1' or 'matrices'");
  }
  const json& ms = cfg.at("matrices");
  if (!ms.is_array() || ms.empty()) throw ConfigError(field("matrices") + "expected a nonempty array of matrices");
  std::vector<Eigen::MatrixXcd> out;
  for (std::size_t k = 0; k < ms.size(); ++k) {
    const std::string where = field("matrices") + "matrix " + std::to_string(k) + ": ";
    const json& m = ms[k];
    if (!m.is_array() || m.empty() || !m[0].is_array()) throw ConfigError(where + "expected an array of rows");
    const auto rows = static_cast<Eigen::Index>(m.size());
    const auto cols = static_cast<Eigen::Index>(m[0].size());
    Eigen::MatrixXcd q(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
      const json& row = m[static_cast<std::size_t>(i)];
      if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) throw ConfigError(where + "ragged rows");
      for (Eigen::Index j = 0; j < cols; ++j) {
        const json& e = row[static_cast<std::size_t>(j)];
        if (e.is_number()) {
          q(i, j) = e.get<double>();
        } else if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number()) {
          q(i, j) = {e[0].get<double>(), e[1].get<double>()};
        } else {
          throw ConfigError(where + "entries must be numbers or [re, im] pairs");
        }
      }
    }
    out.push_back(std::move(q));
  }
  return mps::MPSSpec(std::move(out));
}

namespace {

struct Flags {
  std::string config_path;
  std::string out = "-";
  std::string meta;
  std::string plot;
  std::string g;
  std::string n;
  int jobs = 0;
  std::uint64_t seed = 42;
  bool strict = false;
};

int resolve_jobs(int requested) {
  if (const char* env = std::getenv("MEMCHAN_JOBS"); env && *env) {
    const int j = std::atoi(env);
    if (j > 0) return j;
  }
  if (requested > 0) return requested;
  return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

json load_config(const Flags& f) {
  json cfg = json::object();
  if (!f.config_path.empty()) {
    std::ifstream in(f.config_path);
    if (!in) throw ConfigError("cannot open config file '" + f.config_path + "'");
    try {
      cfg = json::parse(in);
    } catch (const json::parse_error& e) {
      throw ConfigError("config '" + f.config_path + "': " + e.what());
    }
    if (!cfg.is_object()) throw ConfigError("config '" + f.config_path + "': top level must be an object");
  }
  if (!f.g.empty()) cfg["g"] = f.g;
  if (!f.n.empty()) cfg["n"] = f.n;
  return cfg;
}

void write_csv(std::ostream& os, const Table& t) {
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) os << (i ? "," : "") << cells[i];
    os << '\n';
  };
  line(t.header);
  for (const auto& r : t.rows) line(r);
  for (const auto& f : t.footer) os << "# " << f << '\n';
}

std::string hex64(std::uint64_t h) {
  char buf[19];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

void write_plot(const std::string& path, const std::string& csv, const Context& ctx) {
  std::ofstream os(path);
  if (!os) throw ConfigError("cannot write plot script '" + path + "'");
  const Table& t = ctx.table;
  os << "# gnuplot script for " << ctx.subcommand << "\n"
     << "set datafile separator ','\n"
     << "set datafile commentschars '#'\n"
     << "set key autotitle columnhead\n"
     << "set xlabel '" << t.header.at(static_cast<std::size_t>(t.plot_x)) << "'\n"
     << "set ylabel '" << t.header.at(static_cast<std::size_t>(t.plot_y)) << "'\n";
  if (t.plot_logy) os << "set logscale y\n";
  os << "plot '" << csv << "' using " << t.plot_x + 1 << ":" << t.plot_y + 1 << " with linespoints\n";
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"memchan: quantum capacity of correlated dephasing channels", "memchan"};
  app.set_version_flag("--version", std::string(MEMCHAN_VERSION));
  app.require_subcommand(1);
  Flags flags;
  std::vector<std::pair<CLI::App*, Command>> subs;
  for (const auto& c : commands()) {
    CLI::App* sub = app.add_subcommand(c.name, c.help);
    sub->add_option("--config", flags.config_path, "JSON config file")->check(CLI::ExistingFile);
    sub->add_option("--out", flags.out, "CSV output path, '-' for stdout");
    sub->add_option("--meta", flags.meta, "metadata JSON path (defaults to <out>.meta.json)");
    sub->add_option("--plot", flags.plot, "write a gnuplot script referencing the CSV");
    sub->add_option("--jobs", flags.jobs, "worker threads (MEMCHAN_JOBS overrides)");
    sub->add_option("--seed", flags.seed, "seed for iterative solvers");
    sub->add_flag("--strict", flags.strict, "exit 2 when any point fails numerically");
    sub->add_option("--g", flags.g, "g grid: start:stop:step or comma list");
    sub->add_option("--n", flags.n, "n list: comma list or start:stop:step");
    subs.emplace_back(sub, c.fn);
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    std::ostringstream o, r;
    const int code = app.exit(e, o, r);
    out << o.str();
    err << r.str();
    return code == 0 ? kOk : kConfigError;
  }

  Context ctx;
  Command fn = nullptr;
  for (auto& [sub, f] : subs) {
    if (sub->parsed()) {
      ctx.subcommand = sub->get_name();
      fn = f;
    }
  }
  ctx.jobs = resolve_jobs(flags.jobs);
  ctx.seed = flags.seed;

  try {
    ctx.config = load_config(flags);
    fn(ctx);
  } catch (const ConfigError& e) {
    err << "memchan " << ctx.subcommand << ": config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const memchan::Error& e) {
    if (e.kind() == ErrorKind::InvalidInput) {
      err << "memchan " << ctx.subcommand << ": config error: " << e.what() << '\n';
      return kConfigError;
    }
    err << "memchan " << ctx.subcommand << ": numeric failure: " << e.what() << '\n';
    return kNumericFailure;
  }

  const std::string config_text = ctx.config.dump();
  json meta = {{"tool", "memchan"},
               {"version", MEMCHAN_VERSION},
               {"subcommand", ctx.subcommand},
               {"config_hash", hex64(fnv1a(config_text))},
               {"config", ctx.config},
               {"seed", ctx.seed},
               {"jobs", ctx.jobs},
               {"rows", ctx.table.rows.size()},
               {"failed_points", ctx.failed_points},
               {"warnings", ctx.warnings},
               {"points", ctx.points}};
  for (auto& [k, v] : ctx.extra.items()) meta[k] = v;

  std::string meta_path = flags.meta;
  if (flags.out == "-") {
    write_csv(out, ctx.table);
  } else {
    std::ofstream os(flags.out, std::ios::binary);
    if (!os) {
      err << "memchan " << ctx.subcommand << ": cannot write '" << flags.out << "'\n";
      return kConfigError;
    }
    write_csv(os, ctx.table);
    if (meta_path.empty()) meta_path = flags.out + ".meta.json";
  }
  if (!meta_path.empty()) {
    std::ofstream ms(meta_path);
    if (!ms) {
      err << "memchan " << ctx.subcommand << ": cannot write '" << meta_path << "'\n";
      return kConfigError;
    }
    ms << meta.dump(2) << '\n';
  }
  if (!flags.plot.empty()) {
    try {
      write_plot(flags.plot, flags.out == "-" ? std::string("data.csv") : flags.out, ctx);
    } catch (const ConfigError& e) {
      err << "memchan " << ctx.subcommand << ": " << e.what() << '\n';
      return kConfigError;
    }
  }
  for (const auto& w : ctx.warnings) err << "memchan " << ctx.subcommand << ": warning: " << w << '\n';
  if (flags.strict && ctx.failed_points > 0) return kNumericFailure;
  return kOk;
}

}  // namespace memchan::cli
