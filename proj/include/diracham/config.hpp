#pragma once

#include "diracham/algebra_suite.hpp"
#include "diracham/dirac_bergmann.hpp"
#include "diracham/gamma.hpp"
#include "diracham/lattice.hpp"

#include <json.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace diracham {

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Constants stay as text until a command picks its scalar type, so the exact
// backend sees "0.1" as 1/10 rather than the nearest double.
struct RunConfig {
  std::string command;
  std::string track = "all";
  std::string rep;      // empty: all for verify-algebra, dirac otherwise
  int dim = 1;
  int sites = 0;        // 0 picks the command default
  std::string dx;       // empty picks the command default
  std::string dt;       // empty means 0.05 dx
  int steps = 1000;
  int record_every = 10;
  int k_mode = 1;       // k = 2π k_mode / L along x
  std::string hbar = "1";
  std::string c = "1";
  std::string mass = "1";
  std::uint64_t seed = 20240917;
  int samples = 0;      // 0 picks the command default
  std::string initial = "plane-wave";
  std::string out;
  std::string table;
  std::string inject_fault = "none";

  std::vector<Track> tracks() const;
  std::vector<Representation> representations() const;
  Fault fault() const;
  int effective_sites() const;
  int effective_samples() const;
  std::string effective_dx() const;
  double effective_dt() const;
  LatticeSpec lattice() const;

  // Throws ConfigError on anything a module precondition would reject.
  void validate() const;
  nlohmann::ordered_json to_json() const;
};

inline const std::vector<std::string> kCommands{"verify-algebra", "bergmann", "evolve", "quantize"};

}  // namespace diracham
