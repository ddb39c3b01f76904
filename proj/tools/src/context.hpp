#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "json.hpp"
#include "memchan/mps.hpp"

namespace memchan::cli {

using nlohmann::json;

/// Schema violation; message names the offending field.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> footer;  // written as "# <line>"
  int plot_x = 0;
  int plot_y = 1;
  bool plot_logy = false;
};

struct Context {
  std::string subcommand;
  json config = json::object();
  int jobs = 1;
  std::uint64_t seed = 42;
  Table table;
  json points = json::array();
  json extra = json::object();
  std::vector<std::string> warnings;
  int failed_points = 0;

  /// Records a per-point failure; the caller writes NaNs for that row.
  void point_failed(std::size_t index, const std::string& what);
  void point_ok(std::size_t index, json detail = json::object());
};

// Typed access into the config object.
double get_number(const json& cfg, const std::string& key, std::optional<double> fallback = std::nullopt);
int get_int(const json& cfg, const std::string& key, std::optional<int> fallback = std::nullopt);
bool get_bool(const json& cfg, const std::string& key, bool fallback);
std::string get_string(const json& cfg, const std::string& key, std::optional<std::string> fallback = std::nullopt);
std::vector<double> get_grid(const json& cfg, const std::string& key,
                             std::optional<std::string> fallback = std::nullopt);
std::vector<int> get_int_list(const json& cfg, const std::string& key,
                              std::optional<std::string> fallback = std::nullopt);
const json& get_object(const json& cfg, const std::string& key);

/// "wolf_g", "rank1" {a,b,c} or "matrices" (complex entries as [re, im]).
mps::MPSSpec get_mps(const json& cfg, std::optional<double> default_wolf_g = std::nullopt);

std::string num(double x);

using Command = void (*)(Context&);

struct CommandInfo {
  const char* name;
  const char* help;
  Command fn;
};

const std::vector<CommandInfo>& commands();

}  // namespace memchan::cli
