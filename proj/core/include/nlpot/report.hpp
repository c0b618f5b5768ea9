#pragma once

#include "nlpot/symjet.hpp"

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace nlpot {

struct Witness {
  std::string note;
  Jet2 jet;
  double value = 0.0;
};

// Minimum observed increment in one (s, lambda) cell of a tameness grid.
struct CellStat {
  double s = 0.0;
  double lambda = 0.0;
  double cap = 0.0;  // sampler scale the cell was drawn at (0 when unused)
  double min_increment = 0.0;
  std::size_t samples = 0;
};

struct ProbeReport {
  std::string probe;
  std::string subject;
  bool pass = true;
  std::vector<Witness> witnesses;
  std::vector<CellStat> cells;
  std::map<std::string, double> stats;
  std::vector<std::string> notes;
  std::size_t samples = 0;
  std::uint64_t seed = 0;

  void add_witness(std::string note, Jet2 jet, double value = 0.0, std::size_t keep = 8) {
    pass = false;
    if (witnesses.size() < keep) witnesses.push_back({std::move(note), std::move(jet), value});
    stats["witness_count"] += 1.0;
  }
};

struct SampleOptions {
  std::size_t samples = 2000;
  std::uint64_t seed = 1;
  int threads = 1;
  double scale = 1.0;
};

}  // namespace nlpot
