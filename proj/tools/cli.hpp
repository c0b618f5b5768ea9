#pragma once

// Command implementations behind the nlpot executable.  Every command reads an optional
// JSON config (comments allowed), writes its primary table to `out`, and returns the
// process exit code: 0 = expectations met, 1 = unexpected result, 2 = usage/config error.

#include "nlpot/solver.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <iosfwd>
#include <string>

namespace nlpot::cli {

using json = nlohmann::json;

struct RunContext {
  json config = json::object();
  std::uint64_t seed = 1;
  int threads = 1;
  std::string out_dir;  // empty: no files written
};

// FNV-1a over the canonical dump of the config plus the seed
std::uint64_t config_hash(const json& config, std::uint64_t seed);
std::string hex(std::uint64_t v);

json load_config(const std::string& path);
// "-" or empty falls back to defaults; precedence --out, NLPOT_OUT_DIR, config "out"
std::string resolve_out_dir(const std::string& flag, const json& config);

// named plane functions: constant, linear, quadratic, log_radius, kernel, kernel_image,
// ridge, radial_table
PlaneFunction plane_function(const json& desc, const OperatorPair* pair = nullptr);
Domain parse_domain(const json& desc);
SolveConfig parse_solve_config(const json& cfg);

int cmd_catalog(const RunContext& ctx, std::ostream& out);
int cmd_probe(const RunContext& ctx, std::ostream& out, std::ostream& err);
int cmd_riesz(const RunContext& ctx, std::ostream& out, std::ostream& err);
int cmd_solve(const RunContext& ctx, std::ostream& out, std::ostream& err);
int cmd_compare(const RunContext& ctx, std::ostream& out, std::ostream& err);

int run(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace nlpot::cli
