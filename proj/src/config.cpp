#include "diracham/config.hpp"

#include <algorithm>

namespace diracham {

Fault fault_from_string(const std::string& name) {
  if (name == "none") return Fault::none;
  if (name == "gamma") return Fault::gamma;
  if (name == "momentum") return Fault::momentum;
  throw std::invalid_argument("unknown fault '" + name + "' (none, gamma, momentum)");
}

std::string to_string(Fault f) {
  switch (f) {
    case Fault::none: return "none";
    case Fault::gamma: return "gamma";
    case Fault::momentum: return "momentum";
  }
  return "?";
}

std::vector<Track> RunConfig::tracks() const {
  if (track == "all") return {kAllTracks.begin(), kAllTracks.end()};
  try {
    return {track_from_string(track)};
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

std::vector<Representation> RunConfig::representations() const {
  if (rep.empty()) {
    if (command == "verify-algebra") return {kAllRepresentations.begin(), kAllRepresentations.end()};
    return {Representation::dirac};
  }
  if (rep == "all") return {kAllRepresentations.begin(), kAllRepresentations.end()};
  try {
    return {representation_from_string(rep)};
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

Fault RunConfig::fault() const {
  try {
    return fault_from_string(inject_fault);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

int RunConfig::effective_sites() const {
  if (sites > 0) return sites;
  if (command == "evolve") return 32;
  if (command == "quantize") return 1;
  return 8;
}

int RunConfig::effective_samples() const {
  if (samples > 0) return samples;
  return command == "verify-algebra" ? 500 : 200;
}

std::string RunConfig::effective_dx() const {
  if (!dx.empty()) return dx;
  return command == "evolve" ? "0.1" : "1";
}

double RunConfig::effective_dt() const {
  if (!dt.empty()) return static_cast<double>(parse_rational(dt));
  return 0.05 * static_cast<double>(parse_rational(effective_dx()));
}

LatticeSpec RunConfig::lattice() const { return LatticeSpec(dim, effective_sites(), parse_rational(effective_dx())); }

void RunConfig::validate() const {
  if (std::find(kCommands.begin(), kCommands.end(), command) == kCommands.end())
    throw ConfigError("unknown command '" + command + "'");
  tracks();
  representations();
  fault();
  if (dim < 1 || dim > 3) throw ConfigError("dim must be 1, 2 or 3");
  if (sites < 0) throw ConfigError("sites must be positive");
  if (steps < 0) throw ConfigError("steps must be nonnegative");
  if (samples < 0) throw ConfigError("samples must be positive");
  if (initial != "plane-wave" && initial != "zero") throw ConfigError("initial must be plane-wave or zero");
  if (record_every < 1) throw ConfigError("record_every must be positive");
  auto positive = [](const std::string& name, const std::string& text, bool allow_zero) {
    Rational v;
    try {
      v = parse_rational(text);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(name + ": " + e.what());
    }
    if (v < 0 || (!allow_zero && v == 0)) throw ConfigError(name + " must be " + (allow_zero ? "nonnegative" : "positive"));
  };
  positive("hbar", hbar, false);
  positive("c", c, false);
  positive("mass", mass, true);
  positive("dx", effective_dx(), false);
  if (!dt.empty()) positive("dt", dt, false);
  if (command == "quantize") {
    const int modes = 4 * [&] {
      int n = 1;
      for (int d = 0; d < dim; ++d) n *= effective_sites();
      return n;
    }();
    if (modes > 12) throw ConfigError("quantize needs at most 12 modes, got " + std::to_string(modes));
    // ψ̂ = â/√v must stay exact
    try {
      exact_sqrt(GaussianRational(lattice().exact_cell_volume()));
    } catch (const std::exception&) {
      throw ConfigError("quantize needs a cell volume dx^dim that is a rational square, e.g. dx = 1/4");
    }
  }
  if (fault() == Fault::gamma && command != "verify-algebra")
    throw ConfigError("the gamma fault applies to verify-algebra only");
  if (fault() == Fault::momentum && command != "bergmann")
    throw ConfigError("the momentum fault applies to bergmann only");
  if (command == "bergmann" && effective_sites() < 3)
    throw ConfigError("bergmann needs at least 3 sites per axis for the central difference");
}

nlohmann::ordered_json RunConfig::to_json() const {
  nlohmann::ordered_json j;
  j["command"] = command;
  j["track"] = track;
  j["rep"] = rep.empty() ? (command == "verify-algebra" ? "all" : "dirac") : rep;
  j["dim"] = dim;
  j["sites"] = effective_sites();
  j["dx"] = effective_dx();
  j["hbar"] = hbar;
  j["c"] = c;
  j["mass"] = mass;
  j["seed"] = seed;
  j["samples"] = effective_samples();
  if (command == "evolve") {
    j["dt"] = effective_dt();
    j["steps"] = steps;
    j["record_every"] = record_every;
    j["k_mode"] = k_mode;
    j["initial"] = initial;
  }
  j["inject_fault"] = inject_fault;
  return j;
}

}  // namespace diracham
